#ifndef QFEAS_SERIALIZE_HPP
#define QFEAS_SERIALIZE_HPP

#include <optional>
#include <string>
#include <vector>

#include "qfeas/scaling.hpp"
#include "qfeas/stirap.hpp"
#include "qfeas/sweep.hpp"

namespace qfeas {

enum class OutputFormat { Csv, Json, Table };

const char* format_name(OutputFormat f);
std::optional<OutputFormat> format_from_name(const std::string& name);

// Log-spaced transfer-duration grid for the loss-constant fit.
struct BetaGridSpec {
    double t_ad_min = 0.0;
    double t_ad_max = 0.0;
    int count = 0;

    void validate() const;
    std::vector<double> values() const;
};

struct SimulationSpec {
    LambdaSystem system;
    PulseSchedule schedule;
    SimOptions options;
    std::optional<BetaGridSpec> beta_grid;  // enables the fit when present
    std::optional<std::string> dump;        // time-series CSV path

    void validate() const;
};

// Parsed configuration document: exactly one of scenario / sweep /
// simulation, plus optional output format and path. Unknown fields are
// rejected, except a top-level "results" key, which is ignored so that
// report output can be fed back in as configuration.
struct Config {
    std::optional<Scenario> scenario;
    std::optional<SweepSpec> sweep;
    std::optional<SimulationSpec> simulation;
    std::optional<OutputFormat> format;
    std::optional<std::string> output;
};

// Parses a JSON configuration document. Throws std::invalid_argument
// with the offending key path on malformed input.
Config parse_config(const std::string& text);

// Shortest round-trip float formatting (locale-independent).
std::string format_double(double v);
// Fixed significant digits, for human-facing tables.
std::string format_double(double v, int significant_digits);

// Reports. Machine formats (csv/json) keep full float precision; the
// json reports echo the input block so they re-parse as configuration.
std::string estimate_report(const Scenario& scenario,
                            const std::vector<ModelEstimate>& estimates,
                            OutputFormat format);
std::string sweep_report(const SweepResult& result, OutputFormat format);
std::string simulation_report(const SimulationSpec& spec, const SimResult& result,
                              const std::optional<BetaFit>& fit);

}  // namespace qfeas

#endif
