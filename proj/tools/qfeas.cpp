// qfeas: decoherence-limited run-time bounds for quantum factorization
// hardware (trapped-ion sideband gates, Raman adiabatic transfer,
// cavity QED), plus a three-level transfer simulator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qfeas/scaling.hpp"
#include "qfeas/serialize.hpp"
#include "qfeas/stirap.hpp"
#include "qfeas/sweep.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::optional<std::string>& path) {
    if (!path || *path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw std::runtime_error("output: cannot open " + *path);
    out << text;
}

struct EstimateArgs {
    std::string preset;
    std::string model;
    std::string config_path;
    std::vector<int> bits;
    double eta = 0, rho = 0, epsilon = 0, gamma = 0, beta = 0, alpha = 0;
    double omega_pi = 0, omega_sigma = 0, margin = 0;
    double qubit_multiplier = 0, qubit_offset = 0;
    std::string format;
    std::string output;
};

struct SweepArgs {
    std::string config_path;
    std::string format;
    std::string output;
    int threads = 1;
};

struct SimulateArgs {
    std::string config_path;
    bool fit_beta = false;
    std::string dump;
    std::string output;
};

int run_estimate(const EstimateArgs& a, const CLI::App& sub) {
    qfeas::Scenario scenario;
    std::optional<qfeas::OutputFormat> format;

    if (!a.config_path.empty()) {
        const qfeas::Config cfg = qfeas::parse_config(read_file(a.config_path));
        if (!cfg.scenario)
            throw std::invalid_argument("config: 'scenario' document required");
        scenario = *cfg.scenario;
        format = cfg.format;
    } else if (!a.preset.empty()) {
        const auto p = qfeas::preset_scenario(a.preset);
        if (!p) throw std::invalid_argument("preset: unknown preset '" + a.preset + "'");
        scenario = *p;
    } else if (!a.model.empty()) {
        const auto m = qfeas::model_from_name(a.model);
        if (!m)
            throw std::invalid_argument("model: one of cz|raman|cavity required");
        scenario.model = *m;
        scenario.name = a.model;
    } else {
        throw std::invalid_argument("estimate: --preset, --model or --config required");
    }

    if (!a.bits.empty()) scenario.bits = a.bits;
    if (sub.count("--eta")) scenario.params.eta = a.eta;
    if (sub.count("--rho")) scenario.params.rho = a.rho;
    if (sub.count("--epsilon")) scenario.params.epsilon = a.epsilon;
    if (sub.count("--gamma")) scenario.params.gamma = a.gamma;
    if (sub.count("--beta")) scenario.params.beta = a.beta;
    if (sub.count("--alpha")) scenario.params.alpha = a.alpha;
    if (sub.count("--omega-pi")) scenario.params.omega_pi = a.omega_pi;
    if (sub.count("--margin")) scenario.params.margin = a.margin;
    if (sub.count("--qubit-multiplier"))
        scenario.params.qubit_multiplier = a.qubit_multiplier;
    if (sub.count("--qubit-offset")) scenario.params.qubit_offset = a.qubit_offset;
    if (sub.count("--omega-sigma")) scenario.omega_sigma = a.omega_sigma;

    if (!a.format.empty()) {
        format = qfeas::format_from_name(a.format);
        if (!format)
            throw std::invalid_argument("format: one of csv|json|table required");
    }

    const std::vector<qfeas::ModelEstimate> estimates =
        qfeas::evaluate_scenario(scenario);
    emit(qfeas::estimate_report(scenario, estimates,
                                format.value_or(qfeas::OutputFormat::Table)),
         a.output.empty() ? std::nullopt : std::optional<std::string>(a.output));
    return 0;
}

int run_sweep(const SweepArgs& a) {
    const qfeas::Config cfg = qfeas::parse_config(read_file(a.config_path));
    if (!cfg.sweep) throw std::invalid_argument("config: 'sweep' document required");

    std::optional<qfeas::OutputFormat> format = cfg.format;
    if (!a.format.empty()) {
        format = qfeas::format_from_name(a.format);
        if (!format)
            throw std::invalid_argument("format: one of csv|json|table required");
    }
    std::optional<std::string> output = cfg.output;
    if (!a.output.empty()) output = a.output;

    const qfeas::SweepResult result = qfeas::run_sweep(*cfg.sweep, a.threads);
    emit(qfeas::sweep_report(result, format.value_or(qfeas::OutputFormat::Csv)),
         output);
    return 0;
}

int run_simulate(const SimulateArgs& a) {
    const qfeas::Config cfg = qfeas::parse_config(read_file(a.config_path));
    if (!cfg.simulation)
        throw std::invalid_argument("config: 'simulation' document required");

    qfeas::SimulationSpec spec = *cfg.simulation;
    if (!a.dump.empty()) spec.dump = a.dump;
    spec.validate();

    qfeas::SimOptions opt = spec.options;
    opt.record_trajectory = spec.dump.has_value();
    const qfeas::SimResult result =
        qfeas::simulate_transfer(spec.system, spec.schedule, opt);
    if (spec.dump) qfeas::write_trajectory_csv(result, *spec.dump);

    std::optional<qfeas::BetaFit> fit;
    if (a.fit_beta || spec.beta_grid) {
        qfeas::BetaGridSpec grid;
        if (spec.beta_grid) {
            grid = *spec.beta_grid;
        } else {
            grid.t_ad_min = spec.schedule.t_ad;
            grid.t_ad_max = 10.0 * spec.schedule.t_ad;
            grid.count = 7;
        }
        fit = qfeas::fit_beta(spec.system, spec.schedule, grid.values(), spec.options);
    }

    std::optional<std::string> output = cfg.output;
    if (!a.output.empty()) output = a.output;
    emit(qfeas::simulation_report(spec, result, fit), output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Feasibility bounds for factorization on quantum hardware, and a "
        "three-level adiabatic-transfer simulator"};
    app.require_subcommand(1);

    EstimateArgs ea;
    CLI::App* est = app.add_subcommand(
        "estimate", "Closed-form run-time and decoherence bounds for one model");
    est->add_option("--preset", ea.preset,
                    "Named parameter set: " + [] {
                        std::string s;
                        for (const auto& n : qfeas::preset_names()) {
                            if (!s.empty()) s += ", ";
                            s += n;
                        }
                        return s;
                    }());
    est->add_option("--model", ea.model, "Hardware model: cz|raman|cavity");
    est->add_option("--config", ea.config_path, "Scenario configuration file (JSON)");
    est->add_option("--bits", ea.bits, "Register sizes L (repeatable)");
    est->add_option("--eta", ea.eta, "Lamb-Dicke parameter");
    est->add_option("--rho", ea.rho, "Drive-strength constant, s^-1/2");
    est->add_option("--epsilon", ea.epsilon, "Gate-count prefactor");
    est->add_option("--gamma", ea.gamma,
                    "Half Einstein coefficient, s^-1 (omit to evaluate at the "
                    "bound-saturating rate)");
    est->add_option("--beta", ea.beta, "Adiabatic-loss constant");
    est->add_option("--alpha", ea.alpha, "Cavity dwell-time ratio");
    est->add_option("--omega-pi", ea.omega_pi, "Peak pump Rabi frequency, s^-1");
    est->add_option("--omega-sigma", ea.omega_sigma,
                    "Explicit sigma drive for the Raman model, s^-1");
    est->add_option("--margin", ea.margin, "Feasibility margin (>= 1)");
    est->add_option("--qubit-multiplier", ea.qubit_multiplier, "Qubits per bit");
    est->add_option("--qubit-offset", ea.qubit_offset, "Additive qubit count");
    est->add_option("--format", ea.format, "Output format: csv|json|table");
    est->add_option("--output", ea.output, "Output path (default stdout)");

    SweepArgs wa;
    CLI::App* swp = app.add_subcommand("sweep", "Grid sweep over one parameter axis");
    swp->add_option("--config", wa.config_path, "Sweep configuration file (JSON)")
        ->required();
    swp->add_option("--format", wa.format, "Output format: csv|json|table");
    swp->add_option("--output", wa.output, "Output path (default stdout)");
    swp->add_option("--threads", wa.threads, "Worker threads for row evaluation");

    SimulateArgs sa;
    CLI::App* sim = app.add_subcommand(
        "simulate", "Integrate the three-level adiabatic transfer");
    sim->add_option("--config", sa.config_path, "Simulation configuration file (JSON)")
        ->required();
    sim->add_flag("--fit-beta", sa.fit_beta,
                  "Fit the loss constant over a t_ad grid (config fit_beta block, "
                  "or one decade above t_ad)");
    sim->add_option("--dump", sa.dump, "Write the time series CSV to this path");
    sim->add_option("--output", sa.output, "Summary output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "qfeas: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (est->parsed()) return run_estimate(ea, *est);
        if (swp->parsed()) return run_sweep(wa);
        if (sim->parsed()) return run_simulate(sa);
    } catch (const qfeas::convergence_error& e) {
        std::cerr << "qfeas: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::domain_error& e) {
        std::cerr << "qfeas: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qfeas: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "qfeas: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
