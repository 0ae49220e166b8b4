#ifndef QFEAS_STIRAP_HPP
#define QFEAS_STIRAP_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfeas {

// Adaptive integration exceeded its step budget (stiff or invalid
// parameters); distinct from validation failures so callers can map it
// to a different exit code.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Three-level Lambda system for one sideband transfer |g1;0> -> |g2;1>
// through a decaying upper level. The sigma (Stokes) leg drives the
// sideband and is diluted by eta/sqrt(N) over the N-ion COM mode; the
// pi (pump) leg preserves the phonon number and carries no eta factor.
struct LambdaSystem {
    double eta = 0.1;               // Lamb-Dicke parameter
    int bits = 2;                   // register size L
    double qubit_multiplier = 5.0;  // qubits per bit
    double qubit_offset = 0.0;
    double einstein_a = 0.0;        // upper-level decay rate A = 2*Gamma, s^-1
    double detuning = 0.0;          // single-photon detuning of e, s^-1

    double qubits() const { return qubit_multiplier * bits + qubit_offset; }
    // Multiplier applied to the sigma-pulse envelope inside the
    // Hamiltonian: eta/sqrt(N).
    double stokes_dilution() const;

    void validate() const;
};

// One sin^4 pulse, placed as fractions of the total transfer time.
struct Pulse {
    double peak = 0.0;           // peak Rabi frequency, s^-1
    double start_frac = 0.0;     // window start as fraction of t_ad
    double duration_frac = 1.0;  // window length as fraction of t_ad

    double end_frac() const { return start_frac + duration_frac; }
};

// Counterintuitive pair of sin^4 pulses: sigma (Stokes) opens and
// closes before pi (pump) does, with overlap. Set enforce_ordering =
// false to run deliberately mis-ordered schedules for comparison.
struct PulseSchedule {
    double t_ad = 0.0;  // total transfer duration, s
    Pulse sigma{0.0, 0.0, 2.0 / 3.0};
    Pulse pi{0.0, 1.0 / 3.0, 2.0 / 3.0};
    bool enforce_ordering = true;

    PulseSchedule with_t_ad(double t) const {
        PulseSchedule s = *this;
        s.t_ad = t;
        return s;
    }

    // Throws std::invalid_argument on bad fractions or, when
    // enforce_ordering is set, on a non-counterintuitive sequence.
    void validate() const;
};

// Envelope value of one pulse at time t in [0, t_ad]: zero outside the
// window, peak * sin^4(pi * (t - start)/duration) inside. Continuous,
// with vanishing slope at the window edges.
enum class PulseId { Sigma, Pi };
double pulse_envelope(const PulseSchedule& schedule, PulseId id, double t);

struct IntegratorStats {
    std::int64_t steps = 0;           // accepted
    std::int64_t rejected_steps = 0;
    double max_local_error = 0.0;     // largest accepted embedded-difference norm
    double error_estimate = 0.0;      // accumulated local error estimates
};

struct SimOptions {
    double tol = 1e-8;                   // relative error budget for the whole run
    std::int64_t max_steps = 10'000'000; // accepted + rejected
    bool record_trajectory = true;

    void validate() const;
};

struct SimResult {
    // Per accepted step (empty when recording is off).
    std::vector<double> t;
    std::vector<double> p_g1, p_e, p_g2;
    std::vector<double> norm;

    double transfer_fidelity = 0.0;  // final P_g2 / norm^2
    double p_em = 0.0;               // 1 - final norm^2 (exactly 0 when A = 0)
    double final_p_g1 = 0.0, final_p_e = 0.0, final_p_g2 = 0.0;
    double final_norm = 1.0;
    IntegratorStats stats;
};

// Integrates the rotating-frame amplitudes over [0, t_ad] with an
// embedded Dormand-Prince 5(4) pair under error-per-unit-step control,
// so the accumulated error stays within ~tol over the whole run.
SimResult simulate_transfer(const LambdaSystem& system, const PulseSchedule& schedule,
                            const SimOptions& options = {});

// Fixed-step classical RK4 over n_steps uniform steps; cross-check mode
// for the adaptive integrator (no error control, stats carry only the
// step count).
SimResult simulate_transfer_fixed(const LambdaSystem& system,
                                  const PulseSchedule& schedule, std::int64_t n_steps,
                                  bool record_trajectory = false);

// Writes the recorded trajectory as CSV: t,P_g1,P_e,P_g2,norm.
void write_trajectory_csv(const SimResult& result, const std::string& path);

struct BetaFit {
    double beta = 0.0;      // median over the grid of p_em * t_ad / (Gamma) * (eta Omega_sigma)^2 / N
    double t_ad_min = 0.0;
    double t_ad_max = 0.0;
    double slope = 0.0;     // least-squares slope of log p_em vs log t_ad
    double residual = 0.0;  // rms deviation of log beta_i from log beta
    std::vector<double> t_ad;
    std::vector<double> p_em;
    std::vector<double> betas;
};

// Runs the schedule family over t_ad_grid (>= one decade) and extracts
// the quasi-adiabatic loss constant. Throws std::domain_error when any
// grid point has p_em > 0.3 (outside the 1/T regime).
BetaFit fit_beta(const LambdaSystem& system, const PulseSchedule& base,
                 const std::vector<double>& t_ad_grid, const SimOptions& options = {});

}  // namespace qfeas

#endif
