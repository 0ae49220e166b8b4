#include "qfeas/scaling.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qfeas {

namespace {

constexpr double kPi = std::numbers::pi;

// Saturated bounds are classified feasible despite last-ulp rounding.
constexpr double kFeasibilitySlack = 1e-12;

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

void require_bits(int bits) { require(bits >= 1, "bits: L >= 1 required"); }

bool feasible_ratio(double run_time, double tau_dec, double margin) {
    // tau_dec may be +inf (no decay): always feasible.
    return run_time * margin <= tau_dec * (1.0 + kFeasibilitySlack);
}

double cz_gamma_max(int bits, const PhysicalParams& p) {
    const double l3 = std::pow(bits, 3.0);
    const double n = p.qubits(bits);
    const double eta_rho = p.eta * p.rho;
    return eta_rho * eta_rho /
           (16.0 * kPi * kPi * p.epsilon * p.epsilon * n * n * n * l3 * l3 * p.margin);
}

void append_regime_diagnostics(const PhysicalParams& p,
                               const std::optional<TrapGeometry>& geom,
                               double omega, std::vector<std::string>& out) {
    if (p.eta >= kLambDickeWarn)
        out.push_back("eta >= 0.3: outside the Lamb-Dicke regime");
    if (geom) {
        const double nu = geom->com_frequency;
        const double q = (omega / (2.0 * nu)) * (omega / (2.0 * nu)) * p.eta * p.eta;
        if (q >= kSidebandValidityWarn)
            out.push_back("(Omega/2nu)^2 eta^2 >= 0.1: sideband Hamiltonian not valid");
    }
}

}  // namespace

const char* model_name(Model m) {
    switch (m) {
        case Model::CZ: return "cz";
        case Model::Raman: return "raman";
        case Model::Cavity: return "cavity";
    }
    return "?";
}

std::optional<Model> model_from_name(const std::string& name) {
    if (name == "cz") return Model::CZ;
    if (name == "raman") return Model::Raman;
    if (name == "cavity") return Model::Cavity;
    return std::nullopt;
}

void PhysicalParams::validate() const {
    require(eta > 0.0 && eta < 1.0, "eta: 0 < eta < 1 required");
    require(rho > 0.0, "rho: rho > 0 required");
    require(rho <= kRhoMax, "rho: rho <= 1e10 s^-1/2 required");
    require(gamma >= 0.0, "gamma: gamma >= 0 required");
    require(epsilon > 0.0, "epsilon: epsilon > 0 required");
    require(beta > 0.0, "beta: beta > 0 required");
    require(alpha > 0.0, "alpha: alpha > 0 required");
    require(omega_pi >= 0.0, "omega_pi: omega_pi >= 0 required");
    require(qubit_multiplier > 0.0, "qubit_multiplier: > 0 required");
    require(qubit_offset >= 0.0, "qubit_offset: >= 0 required");
    require(margin >= 1.0, "margin: margin >= 1 required");
}

void TrapGeometry::validate() const {
    require(wavelength > 0.0, "wavelength: > 0 required");
    require(ion_mass > 0.0, "ion_mass: > 0 required");
    require(com_frequency > 0.0, "com_frequency: > 0 required");
}

double rabi_from_gamma(double rho, double gamma) {
    require(rho > 0.0, "rho: rho > 0 required");
    require(rho <= kRhoMax, "rho: rho <= 1e10 s^-1/2 required");
    require(gamma >= 0.0, "gamma: gamma >= 0 required");
    return rho * std::sqrt(gamma);
}

double gamma_from_rabi(double rho, double omega) {
    require(rho > 0.0, "rho: rho > 0 required");
    require(rho <= kRhoMax, "rho: rho <= 1e10 s^-1/2 required");
    require(omega >= 0.0, "omega: omega >= 0 required");
    const double r = omega / rho;
    return r * r;
}

double lamb_dicke(const TrapGeometry& geom, std::vector<std::string>* diagnostics) {
    geom.validate();
    const double eta = (2.0 * kPi / geom.wavelength) *
                       std::sqrt(kHbar / (2.0 * geom.ion_mass * geom.com_frequency));
    if (diagnostics && eta >= kLambDickeWarn)
        diagnostics->push_back("eta >= 0.3: outside the Lamb-Dicke regime");
    return eta;
}

NaiveEstimate naive_estimate(int bits, const PhysicalParams& params, double tau_el) {
    require_bits(bits);
    params.validate();
    require(tau_el > 0.0, "tau_el: > 0 required");

    const double l3 = std::pow(bits, 3.0);
    const double n_qubits = params.qubits(bits);

    NaiveEstimate r;
    r.run_time_s = params.epsilon * tau_el * l3;
    r.tau_dec_s = params.gamma > 0.0 ? 1.0 / (n_qubits * params.gamma)
                                     : std::numeric_limits<double>::infinity();
    r.tau_qb_required_s = tau_el * n_qubits * params.epsilon * l3;
    return r;
}

ModelEstimate cz_estimate(int bits, const PhysicalParams& params,
                          const std::optional<TrapGeometry>& geom) {
    require_bits(bits);
    params.validate();
    require(params.gamma > 0.0,
            "gamma: gamma > 0 required (Omega = rho*sqrt(gamma) vanishes)");
    if (geom) geom->validate();

    const double l3 = std::pow(bits, 3.0);
    const double l6 = l3 * l3;
    const double n_qubits = params.qubits(bits);
    const double omega = rabi_from_gamma(params.rho, params.gamma);

    ModelEstimate e;
    e.model = Model::CZ;
    e.bits = bits;
    // Gate = four pi-pulses on the sideband, coupling diluted by
    // eta/sqrt(N) across the N-ion COM mode.
    e.tau_el_s = 4.0 * kPi * std::sqrt(n_qubits) / (params.eta * omega);
    e.run_time_s = e.tau_el_s * params.epsilon * l3;
    e.tau_dec_s = 1.0 / (n_qubits * params.gamma);

    // Largest decay rate and smallest run time compatible with finishing
    // inside the register decoherence time, at the configured margin.
    e.gamma_max_s = cz_gamma_max(bits, params);
    const double eps_over = params.epsilon / (params.eta * params.rho);
    e.t_min_s = 16.0 * kPi * kPi * eps_over * eps_over * n_qubits * n_qubits * l6 *
                params.margin;

    e.feasible = feasible_ratio(e.run_time_s, e.tau_dec_s, params.margin);
    append_regime_diagnostics(params, geom, omega, e.diagnostics);
    return e;
}

ModelEstimate raman_estimate(int bits, const PhysicalParams& params,
                             std::optional<double> omega_sigma) {
    require_bits(bits);
    params.validate();
    require(params.gamma > 0.0,
            "gamma: gamma > 0 required (adiabatic-loss bound degenerates)");
    if (omega_sigma)
        require(*omega_sigma > 0.0, "omega_sigma: > 0 required");

    // Loss ratio gamma/omega_sigma^2. For the derived drive
    // omega_sigma = rho*sqrt(gamma) this is 1/rho^2 identically, so
    // gamma cancels from every returned quantity.
    const double loss_ratio = omega_sigma
                                  ? params.gamma / (*omega_sigma * *omega_sigma)
                                  : 1.0 / (params.rho * params.rho);

    const double l3 = std::pow(bits, 3.0);
    const double n_qubits = params.qubits(bits);
    const double eta2 = params.eta * params.eta;

    ModelEstimate e;
    e.model = Model::Raman;
    e.bits = bits;
    // Transfer duration saturating the total-emission budget; the run
    // time at that duration is itself the lower bound.
    e.tau_el_s = params.margin * (params.beta / eta2) * loss_ratio * n_qubits *
                 params.epsilon * l3;
    e.run_time_s = e.tau_el_s * params.epsilon * l3;
    e.t_min_s = e.run_time_s;

    // Emission probability of one transfer at this duration, and the
    // time to one expected emission over the full computation.
    const double p_em = params.beta * n_qubits * loss_ratio / (eta2 * e.tau_el_s);
    const double p_total = p_em * params.epsilon * l3;
    e.tau_dec_s = e.run_time_s / p_total;
    e.feasible = feasible_ratio(e.run_time_s, e.tau_dec_s, params.margin);
    if (params.eta >= kLambDickeWarn)
        e.diagnostics.push_back("eta >= 0.3: outside the Lamb-Dicke regime");
    return e;
}

double raman_emission_probability(int bits, const PhysicalParams& params,
                                  double omega_sigma, double t_ad) {
    require_bits(bits);
    params.validate();
    require(omega_sigma > 0.0, "omega_sigma: > 0 required");
    require(t_ad > 0.0, "t_ad: > 0 required");
    return params.beta * params.gamma * params.qubits(bits) /
           (params.eta * params.eta * omega_sigma * omega_sigma * t_ad);
}

double saturating_gamma(Model model, int bits, const PhysicalParams& params) {
    require_bits(bits);
    params.validate();
    switch (model) {
        case Model::CZ:
            return cz_gamma_max(bits, params);
        case Model::Cavity: {
            // Dwell-time decay budget at equality:
            // margin * alpha*gamma/Omega * epsilon*L^3 == 1 with Omega = rho*sqrt(gamma).
            const double r = params.rho / (params.margin * params.alpha *
                                           params.epsilon * std::pow(bits, 3.0));
            return r * r;
        }
        case Model::Raman:
            return 1.0;
    }
    throw std::domain_error("model: unknown model");
}

ModelEstimate cavity_estimate(int bits, const PhysicalParams& params) {
    require_bits(bits);
    params.validate();
    require(params.gamma > 0.0,
            "gamma: gamma > 0 required (Omega = rho*sqrt(gamma) vanishes)");

    const double l3 = std::pow(bits, 3.0);
    const double omega = rabi_from_gamma(params.rho, params.gamma);

    ModelEstimate e;
    e.model = Model::Cavity;
    e.bits = bits;
    e.tau_el_s = 1.0 / omega;
    e.run_time_s = e.tau_el_s * params.epsilon * l3;
    // Decay happens outside the cavity, alpha relates dwell times.
    e.tau_dec_s = 1.0 / (params.alpha * params.gamma);
    e.t_min_s = params.margin * params.alpha * params.epsilon * params.epsilon * l3 *
                l3 / (params.rho * params.rho);
    e.feasible = feasible_ratio(e.run_time_s, e.tau_dec_s, params.margin);
    return e;
}

}  // namespace qfeas
