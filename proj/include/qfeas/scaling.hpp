#ifndef QFEAS_SCALING_HPP
#define QFEAS_SCALING_HPP

#include <optional>
#include <string>
#include <vector>

namespace qfeas {

// Optical-transition ceiling on the drive-strength constant rho in
// Omega = rho * sqrt(Gamma): past ~1e10 s^{-1/2} the atom ionizes before
// a controlled pulse can be applied.
inline constexpr double kRhoMax = 1e10;

inline constexpr double kHbar = 1.054571817e-34;  // J s

// Warn-only regime thresholds: the closed forms stay evaluable outside
// these, they just stop being trustworthy.
inline constexpr double kLambDickeWarn = 0.3;           // eta
inline constexpr double kSidebandValidityWarn = 0.1;    // (Omega/2nu)^2 eta^2

enum class Model { CZ, Raman, Cavity };

const char* model_name(Model m);
std::optional<Model> model_from_name(const std::string& name);

// Shared physical inputs. All rates are angular frequencies in s^-1,
// rho in s^{-1/2}; gamma is half the Einstein A coefficient of the
// driven transition. Defaults are the canonical trapped-ion values used
// throughout the bundled presets.
struct PhysicalParams {
    double eta = 0.1;              // Lamb-Dicke parameter
    double rho = 1e7;              // Omega = rho*sqrt(gamma), s^{-1/2}
    double epsilon = 1000.0;       // gate-count prefactor in epsilon*L^3
    double gamma = 0.0;            // half Einstein coefficient, s^-1
    double omega_pi = 0.0;         // peak pump Rabi frequency, s^-1
    double beta = 100.0;           // quasi-adiabatic loss constant
    double alpha = 1.0;            // cavity in/out dwell-time ratio
    double qubit_multiplier = 5.0; // qubits per input bit
    double qubit_offset = 0.0;     // additive qubits (e.g. 2 for 5L+2)
    double margin = 1.0;           // feasibility margin: "<<" means ratio <= 1/margin

    // Number of qubits the register needs for an L-bit input.
    double qubits(int bits) const { return qubit_multiplier * bits + qubit_offset; }

    // Throws std::domain_error naming the violated precondition.
    void validate() const;
};

// Trap geometry, for deriving the Lamb-Dicke parameter and checking the
// sideband Hamiltonian's validity window.
struct TrapGeometry {
    double wavelength;     // m
    double ion_mass;       // kg
    double com_frequency;  // angular, s^-1

    void validate() const;
};

// Per-model feasibility record. run_time_s == tau_el_s * epsilon * L^3
// exactly; gamma_max_s is only defined for the CZ model.
struct ModelEstimate {
    Model model = Model::CZ;
    int bits = 0;
    double tau_el_s = 0.0;    // elementary gate time
    double run_time_s = 0.0;  // full algorithm run time T
    double tau_dec_s = 0.0;   // register decoherence time (may be +inf)
    double t_min_s = 0.0;     // decoherence-consistent lower bound on T
    std::optional<double> gamma_max_s;
    bool feasible = false;
    std::vector<std::string> diagnostics;
};

struct NaiveEstimate {
    double run_time_s = 0.0;         // T = epsilon * tau_el * L^3
    double tau_dec_s = 0.0;          // register decoherence time (+inf if gamma == 0)
    double tau_qb_required_s = 0.0;  // single-qubit coherence needed
};

// Omega = rho*sqrt(gamma) and its inverse. Exact round trip:
// gamma_from_rabi(rho, rabi_from_gamma(rho, g)) == g.
double rabi_from_gamma(double rho, double gamma);
double gamma_from_rabi(double rho, double omega);

// eta = (2 pi / lambda) * sqrt(hbar / (2 M nu)). Appends a warning to
// *diagnostics when the result is outside the Lamb-Dicke regime.
double lamb_dicke(const TrapGeometry& geom,
                  std::vector<std::string>* diagnostics = nullptr);

// Decoherence-unaware bound: gate time given from outside, decoherence
// only sets the required single-qubit coherence time.
NaiveEstimate naive_estimate(int bits, const PhysicalParams& params, double tau_el);

// Sideband-gate (Cirac-Zoller) model. The optional geometry enables the
// (Omega/2nu)^2 eta^2 validity diagnostic.
ModelEstimate cz_estimate(int bits, const PhysicalParams& params,
                          const std::optional<TrapGeometry>& geom = std::nullopt);

// Decay rates that exactly saturate the model's decoherence inequality
// at the configured margin: running the estimator at this gamma lands
// on run_time == t_min (and == tau_dec for CZ at margin 1). For the
// Raman model gamma cancels on the derived-drive path, so any positive
// value saturates; 1.0 is returned.
double saturating_gamma(Model model, int bits, const PhysicalParams& params);

// Quasi-adiabatic Raman-transfer model. If omega_sigma is not supplied
// it is taken as rho*sqrt(gamma), in which case gamma/omega_sigma^2
// reduces to 1/rho^2 analytically and gamma cancels from every output.
ModelEstimate raman_estimate(int bits, const PhysicalParams& params,
                             std::optional<double> omega_sigma = std::nullopt);

// Cavity-QED model; the microwave variant is this model with large rho.
ModelEstimate cavity_estimate(int bits, const PhysicalParams& params);

// Probability of at least one spontaneous emission during one
// quasi-adiabatic transfer of duration t_ad driven at omega_sigma.
double raman_emission_probability(int bits, const PhysicalParams& params,
                                  double omega_sigma, double t_ad);

}  // namespace qfeas

#endif
