#include "qfeas/stirap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace qfeas {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;
using State = std::array<cplx, 3>;  // amplitudes (g1, e, g2)

State operator+(const State& a, const State& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
State operator*(double s, const State& a) { return {s * a[0], s * a[1], s * a[2]}; }

double norm2(const State& y) {
    return std::norm(y[0]) + std::norm(y[1]) + std::norm(y[2]);
}

void require_valid(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

struct Rhs {
    const LambdaSystem& sys;
    const PulseSchedule& sched;
    double dilution;  // eta/sqrt(N) on the sigma leg

    State operator()(double t, const State& y) const {
        const double op = pulse_envelope(sched, PulseId::Pi, t);
        const double os = dilution * pulse_envelope(sched, PulseId::Sigma, t);
        const cplx half_i(0.0, 0.5);
        State d;
        d[0] = -half_i * op * y[1];
        d[1] = -half_i * op * y[0] - half_i * os * y[2] -
               (cplx(0.0, sys.detuning) + 0.5 * sys.einstein_a) * y[1];
        d[2] = -half_i * os * y[1];
        return d;
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// b - b*: weights of the embedded error estimate.
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;

struct StepOut {
    State y;      // 5th-order solution
    State k_last; // FSAL stage, f(t+h, y)
    double err;   // 2-norm of the embedded difference
    double err_scaled;
};

StepOut dp5_step(const Rhs& f, double t, double h, const State& y, const State& k1,
                 double atol, double rtol) {
    const State k2 = f(t + kC2 * h, y + h * (kA21 * k1));
    const State k3 = f(t + kC3 * h, y + (h * kA31) * k1 + (h * kA32) * k2);
    const State k4 =
        f(t + kC4 * h, y + (h * kA41) * k1 + (h * kA42) * k2 + (h * kA43) * k3);
    const State k5 = f(t + kC5 * h, y + (h * kA51) * k1 + (h * kA52) * k2 +
                                        (h * kA53) * k3 + (h * kA54) * k4);
    const State k6 = f(t + h, y + (h * kA61) * k1 + (h * kA62) * k2 + (h * kA63) * k3 +
                                  (h * kA64) * k4 + (h * kA65) * k5);

    StepOut out;
    out.y = y + (h * kB1) * k1 + (h * kB3) * k3 + (h * kB4) * k4 + (h * kB5) * k5 +
            (h * kB6) * k6;
    out.k_last = f(t + h, out.y);

    double err2 = 0.0, scaled2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const cplx e = (h * kE1) * k1[i] + (h * kE3) * k3[i] + (h * kE4) * k4[i] +
                       (h * kE5) * k5[i] + (h * kE6) * k6[i] + (h * kE7) * out.k_last[i];
        const double ae = std::abs(e);
        const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(out.y[i]));
        err2 += ae * ae;
        scaled2 += (ae / sc) * (ae / sc);
    }
    out.err = std::sqrt(err2);
    out.err_scaled = std::sqrt(scaled2 / 3.0);
    return out;
}

void record_point(SimResult& r, double t, const State& y) {
    r.t.push_back(t);
    r.p_g1.push_back(std::norm(y[0]));
    r.p_e.push_back(std::norm(y[1]));
    r.p_g2.push_back(std::norm(y[2]));
    r.norm.push_back(std::sqrt(norm2(y)));
}

void finalize(SimResult& r, const LambdaSystem& sys, const State& y) {
    r.final_p_g1 = std::norm(y[0]);
    r.final_p_e = std::norm(y[1]);
    r.final_p_g2 = std::norm(y[2]);
    const double n2 = norm2(y);
    r.final_norm = std::sqrt(n2);
    r.transfer_fidelity = n2 > 0.0 ? r.final_p_g2 / n2 : 0.0;
    // With no decay channel there is nothing to emit; integrator norm
    // drift must not surface as a fake emission probability.
    r.p_em = sys.einstein_a > 0.0 ? std::max(0.0, 1.0 - n2) : 0.0;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double LambdaSystem::stokes_dilution() const { return eta / std::sqrt(qubits()); }

void LambdaSystem::validate() const {
    require_valid(eta > 0.0 && eta < 1.0, "eta: 0 < eta < 1 required");
    require_valid(bits >= 1, "bits: L >= 1 required");
    require_valid(qubit_multiplier > 0.0, "qubit_multiplier: > 0 required");
    require_valid(qubit_offset >= 0.0, "qubit_offset: >= 0 required");
    require_valid(einstein_a >= 0.0, "einstein_a: >= 0 required");
    require_valid(std::isfinite(detuning), "detuning: finite value required");
}

void PulseSchedule::validate() const {
    require_valid(t_ad > 0.0, "t_ad: > 0 required");
    for (const Pulse* p : {&sigma, &pi}) {
        require_valid(p->peak >= 0.0, "pulse peak: >= 0 required");
        require_valid(p->start_frac >= 0.0 && p->start_frac <= 1.0,
                      "pulse start_frac: within [0,1] required");
        require_valid(p->duration_frac > 0.0 && p->duration_frac <= 1.0,
                      "pulse duration_frac: within (0,1] required");
        require_valid(p->end_frac() <= 1.0 + 1e-12,
                      "pulse window: start_frac + duration_frac <= 1 required");
    }
    if (!enforce_ordering) return;
    require_valid(sigma.start_frac < pi.start_frac,
                  "ordering: sigma pulse must start before pi pulse");
    require_valid(sigma.end_frac() < pi.end_frac(),
                  "ordering: sigma pulse must end before pi pulse");
    require_valid(sigma.end_frac() > pi.start_frac,
                  "ordering: sigma and pi pulses must overlap");
}

double pulse_envelope(const PulseSchedule& schedule, PulseId id, double t) {
    const Pulse& p = id == PulseId::Sigma ? schedule.sigma : schedule.pi;
    const double start = p.start_frac * schedule.t_ad;
    const double dur = p.duration_frac * schedule.t_ad;
    const double x = (t - start) / dur;
    if (x < 0.0 || x > 1.0) return 0.0;
    const double s = std::sin(kPi * x);
    return p.peak * s * s * s * s;
}

void SimOptions::validate() const {
    require_valid(tol >= 1e-12 && tol <= 1e-4, "tol: within [1e-12, 1e-4] required");
    require_valid(max_steps > 0, "max_steps: > 0 required");
}

SimResult simulate_transfer(const LambdaSystem& system, const PulseSchedule& schedule,
                            const SimOptions& options) {
    system.validate();
    schedule.validate();
    options.validate();

    const Rhs f{system, schedule, system.stokes_dilution()};
    const double span = schedule.t_ad;
    // Error-per-unit-step control: a step of size h may spend at most
    // the fraction h/span of the total error budget, so the accumulated
    // error over the run stays ~tol.
    const double atol = options.tol;
    const double rtol = options.tol;

    SimResult r;
    State y{cplx(1.0), cplx(0.0), cplx(0.0)};
    if (options.record_trajectory) record_point(r, 0.0, y);

    double t = 0.0;
    double h = span * 1e-3;
    State k1 = f(t, y);
    std::int64_t total_attempts = 0;

    while (t < span) {
        if (t + h > span) h = span - t;
        if (++total_attempts > options.max_steps)
            throw convergence_error("integrator exceeded " +
                                    std::to_string(options.max_steps) +
                                    " steps at t = " + std::to_string(t) + " s");
        if (h < span * 1e-15)
            throw convergence_error("integrator step size collapsed at t = " +
                                    std::to_string(t) + " s");

        const StepOut s = dp5_step(f, t, h, y, k1, atol, rtol);
        const double ratio = s.err_scaled * span / h;  // <= 1 means within budget
        double factor = 0.9 * std::pow(std::max(ratio, 1e-10), -0.25);
        factor = std::clamp(factor, 0.2, 5.0);

        if (ratio <= 1.0) {
            t += h;
            y = s.y;
            k1 = s.k_last;
            ++r.stats.steps;
            r.stats.max_local_error = std::max(r.stats.max_local_error, s.err);
            r.stats.error_estimate += s.err;
            if (options.record_trajectory) record_point(r, t, y);
        } else {
            ++r.stats.rejected_steps;
        }
        h *= factor;
    }

    finalize(r, system, y);
    return r;
}

SimResult simulate_transfer_fixed(const LambdaSystem& system,
                                  const PulseSchedule& schedule, std::int64_t n_steps,
                                  bool record_trajectory) {
    system.validate();
    schedule.validate();
    require_valid(n_steps > 0, "n_steps: > 0 required");

    const Rhs f{system, schedule, system.stokes_dilution()};
    const double h = schedule.t_ad / static_cast<double>(n_steps);

    SimResult r;
    State y{cplx(1.0), cplx(0.0), cplx(0.0)};
    if (record_trajectory) record_point(r, 0.0, y);

    for (std::int64_t i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * h;
        const State k1 = f(t, y);
        const State k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
        const State k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
        const State k4 = f(t + h, y + h * k3);
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ++r.stats.steps;
        if (record_trajectory) record_point(r, static_cast<double>(i + 1) * h, y);
    }

    finalize(r, system, y);
    return r;
}

void write_trajectory_csv(const SimResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,P_g1,P_e,P_g2,norm\n";
    out.precision(17);
    for (size_t i = 0; i < result.t.size(); ++i) {
        out << result.t[i] << ',' << result.p_g1[i] << ',' << result.p_e[i] << ','
            << result.p_g2[i] << ',' << result.norm[i] << '\n';
    }
}

BetaFit fit_beta(const LambdaSystem& system, const PulseSchedule& base,
                 const std::vector<double>& t_ad_grid, const SimOptions& options) {
    system.validate();
    if (system.einstein_a <= 0.0)
        throw std::domain_error("einstein_a: > 0 required to fit the loss constant");
    if (t_ad_grid.size() < 2)
        throw std::domain_error("t_ad grid: at least 2 points required");

    std::vector<double> grid = t_ad_grid;
    std::sort(grid.begin(), grid.end());
    if (grid.front() <= 0.0)
        throw std::domain_error("t_ad grid: positive durations required");
    if (grid.back() / grid.front() < 10.0 * (1.0 - 1e-9))
        throw std::domain_error("t_ad grid: must span at least one decade");

    const double gamma = 0.5 * system.einstein_a;
    const double omega_sigma = base.sigma.peak;
    if (omega_sigma <= 0.0)
        throw std::domain_error("sigma peak: > 0 required to fit the loss constant");
    const double scale = system.eta * system.eta * omega_sigma * omega_sigma /
                         (gamma * system.qubits());

    BetaFit fit;
    fit.t_ad_min = grid.front();
    fit.t_ad_max = grid.back();

    SimOptions opt = options;
    opt.record_trajectory = false;
    for (double t_ad : grid) {
        const SimResult res = simulate_transfer(system, base.with_t_ad(t_ad), opt);
        if (res.p_em > 0.3)
            throw std::domain_error("p_em > 0.3 at t_ad = " + std::to_string(t_ad) +
                                    " s: outside the 1/T regime");
        fit.t_ad.push_back(t_ad);
        fit.p_em.push_back(res.p_em);
        fit.betas.push_back(res.p_em * t_ad * scale);
    }

    // Median rather than least squares: edge-of-regime points bias a
    // mean fit but leave the median alone.
    fit.beta = median(fit.betas);

    const size_t n = grid.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(fit.t_ad[i]);
        const double y = std::log(fit.p_em[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    double r2 = 0.0;
    for (double b : fit.betas) {
        const double d = std::log(b) - std::log(fit.beta);
        r2 += d * d;
    }
    fit.residual = std::sqrt(r2 / static_cast<double>(n));
    return fit;
}

}  // namespace qfeas
