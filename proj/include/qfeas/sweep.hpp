#ifndef QFEAS_SWEEP_HPP
#define QFEAS_SWEEP_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qfeas/scaling.hpp"

namespace qfeas {

// A named evaluation of one hardware model over a list of register
// sizes. params.gamma == 0 means "not specified": each row is then
// evaluated at the decay rate that saturates the model's decoherence
// bound (the convention under which the estimators reproduce their
// tabulated minima, T == t_min).
struct Scenario {
    std::string name;
    Model model = Model::CZ;
    PhysicalParams params;
    std::optional<TrapGeometry> geometry;
    std::vector<int> bits{2, 4};
    std::optional<double> omega_sigma;  // Raman: explicit sigma drive

    void validate() const;
};

enum class SweepAxis { L, Rho, Eta, Gamma, Epsilon, Beta, Alpha };

const char* axis_name(SweepAxis a);
std::optional<SweepAxis> axis_from_name(const std::string& name);

struct GridSpec {
    bool log_scale = false;
    double min = 0.0;
    double max = 0.0;
    int count = 0;

    void validate() const;
    std::vector<double> values() const;
};

struct SweepSpec {
    Scenario scenario;
    SweepAxis axis = SweepAxis::L;
    GridSpec grid;

    void validate() const;
};

// One grid point. A failed row keeps its axis value and carries the
// error text instead of an estimate.
struct SweepRow {
    double axis_value = 0.0;
    std::optional<ModelEstimate> estimate;
    std::string error;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
};

// Bundled parameter sets. cz-paper / raman-paper carry the canonical
// trapped-ion table values; barium fixes gamma at the Ba+ metastable
// value 0.044 s^-1; cavity-unit is the cavity model at alpha = 1;
// microwave is the cavity model with rho = 1e9 (low-frequency
// transition). Values not pinned by those sources are project defaults.
std::vector<std::string> preset_names();
std::optional<Scenario> preset_scenario(const std::string& name);

// One estimate per requested register size; estimator errors are
// rethrown with the scenario name and row attached.
std::vector<ModelEstimate> evaluate_scenario(const Scenario& scenario);

// One estimate per grid point, in grid order. Rows are independent and
// may be evaluated on n_threads workers; the result is identical
// regardless of scheduling. Row errors are captured in-row.
SweepResult run_sweep(const SweepSpec& spec, int n_threads = 1);

// All three models at the same L and parameters, ranked by t_min
// (ascending; ties keep cz < raman < cavity order). A model whose
// estimator throws is excluded from the ranking and its error kept.
struct ModelComparison {
    std::array<std::optional<ModelEstimate>, 3> estimates;  // cz, raman, cavity
    std::array<std::string, 3> errors;
    std::vector<Model> ranking;
};

ModelComparison compare_models(int bits, const PhysicalParams& params);

}  // namespace qfeas

#endif
