// Acceptance suite: each criterion prints one [PASS]/[FAIL] line; the
// process exits non-zero if any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qfeas/scaling.hpp"
#include "qfeas/stirap.hpp"
#include "qfeas/sweep.hpp"

using namespace qfeas;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

PhysicalParams paper_params() {
    PhysicalParams p;
    p.eta = 0.1;
    p.rho = 1e7;
    p.epsilon = 1000.0;
    p.gamma = 0.044;
    return p;
}

LambdaSystem ref_system(double gamma) {
    LambdaSystem s;
    s.eta = 0.1;
    s.bits = 2;
    s.einstein_a = 2.0 * gamma;
    return s;
}

PulseSchedule ref_schedule(double t_ad, double omega_pi = 4e6) {
    PulseSchedule sch;
    sch.t_ad = t_ad;
    sch.sigma.peak = 2e6;
    sch.pi.peak = omega_pi;
    return sch;
}

// 1. CZ table reproduction at 1e-3 relative against the derived values.
void criterion_1() {
    const PhysicalParams p = paper_params();
    const ModelEstimate e2 = cz_estimate(2, p);
    const ModelEstimate e4 = cz_estimate(4, p);
    const bool pass = rel_diff(e2.t_min_s, 1.011) < 1e-3 &&
                      rel_diff(e4.t_min_s, 258.8) /* vs quoted */ < 1e-3 &&
                      rel_diff(*e2.gamma_max_s, 9.895e-2) < 1e-3 &&
                      rel_diff(*e4.gamma_max_s, 1.933e-4) < 1e-3 &&
                      // quoted table entries after rounding
                      std::round(e2.t_min_s) == 1.0 &&
                      std::round(e4.t_min_s) == 259.0;
    report(1, "CZ table reproduction", pass,
           "t_min(2)=" + fmt(e2.t_min_s) + " s, t_min(4)=" + fmt(e4.t_min_s) +
               " s, gamma_max(2)=" + fmt(*e2.gamma_max_s) +
               " /s, gamma_max(4)=" + fmt(*e4.gamma_max_s) + " /s");
}

// 2. Scaling ratios 1e8 and 1e16 to 1e-9 relative.
void criterion_2() {
    const PhysicalParams p = paper_params();
    const double t4 = cz_estimate(4, p).t_min_s;
    const double r40 = cz_estimate(40, p).t_min_s / t4;
    const double r400 = cz_estimate(400, p).t_min_s / t4;
    const bool pass = rel_diff(r40, 1e8) < 1e-9 && rel_diff(r400, 1e16) < 1e-9;
    report(2, "register scaling ratios", pass,
           "t_min(40)/t_min(4)=" + fmt(r40) + ", t_min(400)/t_min(4)=" + fmt(r400));
}

// 3. Raman bounds by exact evaluation; quoted values within 35%.
void criterion_3() {
    const PhysicalParams p = paper_params();
    const double t2 = raman_estimate(2, p).t_min_s;
    const double t4 = raman_estimate(4, p).t_min_s;
    const bool pass = rel_diff(t2, 6.4e-2) < 1e-9 && rel_diff(t4, 8.192) < 1e-9 &&
                      std::abs(0.05 - t2) / t2 < 0.35 &&
                      std::abs(6.5 - t4) / t4 < 0.35;
    report(3, "Raman table within documented discrepancy", pass,
           "t_min(2)=" + fmt(t2) + " s, t_min(4)=" + fmt(t4) + " s");
}

// 4. Bound saturation: T(gamma_max) = tau_dec = t_min for L in 1..64.
void criterion_4() {
    double worst = 0.0;
    for (int L = 1; L <= 64; ++L) {
        PhysicalParams p = paper_params();
        p.gamma = saturating_gamma(Model::CZ, L, p);
        const ModelEstimate e = cz_estimate(L, p);
        worst = std::max(worst, rel_diff(e.run_time_s, e.tau_dec_s));
        worst = std::max(worst, rel_diff(e.run_time_s, e.t_min_s));
    }
    report(4, "bound-saturation identity over L=1..64", worst < 1e-9,
           "max relative spread " + fmt(worst));
}

// 5. Adiabatic no-decay limit at pulse area >= 500, under 10 s.
void criterion_5() {
    const LambdaSystem sys = ref_system(0.0);
    const double stokes_eff = sys.stokes_dilution() * 2e6;
    const double t_ad = 500.0 / stokes_eff;
    SimOptions opt;
    opt.tol = 1e-8;
    const auto start = std::chrono::steady_clock::now();
    const SimResult r = simulate_transfer(sys, ref_schedule(t_ad), opt);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool pass = r.transfer_fidelity >= 0.999 &&
                      std::abs(r.final_norm - 1.0) <= 10.0 * opt.tol &&
                      seconds < 10.0;
    report(5, "simulator adiabatic limit", pass,
           "fidelity=" + fmt(r.transfer_fidelity) + ", |norm-1|=" +
               fmt(std::abs(r.final_norm - 1.0)) + ", runtime=" + fmt(seconds) + " s");
}

// 6. 1/T law over a decade, beta in [30,300], slow growth under
//    pump doubling.
void criterion_6() {
    const LambdaSystem sys = ref_system(1000.0);
    SimOptions opt;
    opt.tol = 1e-8;
    std::vector<double> grid;
    for (int i = 0; i < 7; ++i)
        grid.push_back(8e-3 * std::pow(10.0, i / 6.0));

    const BetaFit fit = fit_beta(sys, ref_schedule(1.0), grid, opt);
    const BetaFit fit2 = fit_beta(sys, ref_schedule(1.0, 8e6), grid, opt);
    const double growth = fit2.beta / fit.beta;

    bool regime = true;
    for (double pem : fit.p_em) regime = regime && pem < 0.05;

    const bool pass = regime && std::abs(fit.slope + 1.0) <= 0.1 && fit.beta >= 30.0 &&
                      fit.beta <= 300.0 && growth >= 1.0 && growth <= 2.0;
    report(6, "1/T law and loss constant", pass,
           "slope=" + fmt(fit.slope) + ", beta=" + fmt(fit.beta) +
               ", beta(2*omega_pi)/beta=" + fmt(growth));
}

// 7. Least-squares exponent recovery: 8 / 7 / 6 within 1e-9.
void criterion_7() {
    const PhysicalParams p = paper_params();
    const std::array<int, 5> ls{2, 4, 8, 16, 32};
    std::array<double, 3> slopes{};
    for (int m = 0; m < 3; ++m) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int L : ls) {
            const ModelEstimate e = m == 0   ? cz_estimate(L, p)
                                    : m == 1 ? raman_estimate(L, p)
                                             : cavity_estimate(L, p);
            const double x = std::log(static_cast<double>(L));
            const double y = std::log(e.t_min_s);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = ls.size();
        slopes[m] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    const bool pass = std::abs(slopes[0] - 8.0) < 1e-9 &&
                      std::abs(slopes[1] - 7.0) < 1e-9 &&
                      std::abs(slopes[2] - 6.0) < 1e-9;
    report(7, "exponent recovery by regression", pass,
           "cz=" + fmt(slopes[0]) + ", raman=" + fmt(slopes[1]) +
               ", cavity=" + fmt(slopes[2]));
}

// 8. Byte-identical CLI output across repeats and thread counts.
std::string run_cli_capture(const std::string& args) {
    const std::string cmd = std::string(QFEAS_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    pclose(pipe);
    return out;
}

void criterion_8() {
    const char* config = R"({
      "sweep": {
        "scenario": {"name": "cz-paper", "model": "cz", "bits": [2]},
        "axis": "L",
        "grid": {"scale": "linear", "min": 2, "max": 24, "count": 23}
      }
    })";
    {
        std::ofstream out("acceptance_sweep.json", std::ios::binary);
        out << config;
    }
    const std::string a = run_cli_capture("sweep --config acceptance_sweep.json");
    const std::string b = run_cli_capture("sweep --config acceptance_sweep.json");
    const std::string c =
        run_cli_capture("sweep --config acceptance_sweep.json --threads 4");
    const std::string d =
        run_cli_capture("sweep --config acceptance_sweep.json --threads 4");
    const std::string e =
        run_cli_capture("estimate --preset raman-paper --format json");
    const std::string f =
        run_cli_capture("estimate --preset raman-paper --format json");
    std::remove("acceptance_sweep.json");
    const bool pass = !a.empty() && a == b && a == c && c == d && !e.empty() && e == f;
    report(8, "CLI determinism incl. parallel sweeps", pass,
           "csv bytes=" + std::to_string(a.size()) +
               ", serial==repeat: " + (a == b ? "yes" : "no") +
               ", serial==threaded: " + (a == c ? "yes" : "no"));
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/8 criteria passed in %.1f s\n", 8 - g_failures, seconds);
    return g_failures == 0 ? 0 : 1;
}
