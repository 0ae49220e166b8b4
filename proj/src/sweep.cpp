#include "qfeas/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qfeas {

namespace {

ModelEstimate estimate_one(const Scenario& s, int bits) {
    PhysicalParams p = s.params;
    if (p.gamma <= 0.0) p.gamma = saturating_gamma(s.model, bits, p);
    switch (s.model) {
        case Model::CZ: return cz_estimate(bits, p, s.geometry);
        case Model::Raman: return raman_estimate(bits, p, s.omega_sigma);
        case Model::Cavity: return cavity_estimate(bits, p);
    }
    throw std::domain_error("model: unknown model");
}

}  // namespace

void Scenario::validate() const {
    if (bits.empty()) throw std::domain_error("bits: non-empty L list required");
    for (int b : bits)
        if (b < 1) throw std::domain_error("bits: L >= 1 required");
    params.validate();
    if (geometry) geometry->validate();
    if (omega_sigma && *omega_sigma <= 0.0)
        throw std::domain_error("omega_sigma: > 0 required");
}

const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::L: return "L";
        case SweepAxis::Rho: return "rho";
        case SweepAxis::Eta: return "eta";
        case SweepAxis::Gamma: return "gamma";
        case SweepAxis::Epsilon: return "epsilon";
        case SweepAxis::Beta: return "beta";
        case SweepAxis::Alpha: return "alpha";
    }
    return "?";
}

std::optional<SweepAxis> axis_from_name(const std::string& name) {
    for (SweepAxis a : {SweepAxis::L, SweepAxis::Rho, SweepAxis::Eta, SweepAxis::Gamma,
                        SweepAxis::Epsilon, SweepAxis::Beta, SweepAxis::Alpha})
        if (name == axis_name(a)) return a;
    return std::nullopt;
}

void GridSpec::validate() const {
    if (!(min > 0.0)) throw std::domain_error("grid.min: > 0 required");
    if (!(max > min)) throw std::domain_error("grid.max: > grid.min required");
    if (count < 2) throw std::domain_error("grid.count: >= 2 required");
}

std::vector<double> GridSpec::values() const {
    validate();
    std::vector<double> v(count);
    if (log_scale) {
        const double a = std::log(min), b = std::log(max);
        for (int i = 0; i < count; ++i)
            v[i] = std::exp(a + (b - a) * i / (count - 1));
        v.front() = min;
        v.back() = max;
    } else {
        for (int i = 0; i < count; ++i)
            v[i] = min + (max - min) * i / (count - 1);
    }
    return v;
}

void SweepSpec::validate() const {
    scenario.validate();
    grid.validate();
    if (axis != SweepAxis::L && scenario.bits.size() != 1)
        throw std::domain_error(
            "bits: exactly one L required when sweeping a non-L axis");
}

std::vector<std::string> preset_names() {
    return {"cz-paper", "raman-paper", "cavity-unit", "barium", "microwave"};
}

std::optional<Scenario> preset_scenario(const std::string& name) {
    Scenario s;
    s.name = name;
    s.bits = {2, 4};
    // PhysicalParams defaults already carry eta=0.1, rho=1e7,
    // epsilon=1000, beta=100, alpha=1; gamma=0 selects bound saturation.
    if (name == "cz-paper") {
        s.model = Model::CZ;
    } else if (name == "raman-paper") {
        s.model = Model::Raman;
        s.params.gamma = 0.044;  // Ba+ metastable level; cancels on the derived drive
    } else if (name == "cavity-unit") {
        s.model = Model::Cavity;
    } else if (name == "barium") {
        s.model = Model::CZ;
        s.params.gamma = 0.044;
    } else if (name == "microwave") {
        s.model = Model::Cavity;
        s.params.rho = 1e9;
    } else {
        return std::nullopt;
    }
    return s;
}

std::vector<ModelEstimate> evaluate_scenario(const Scenario& scenario) {
    try {
        scenario.validate();
    } catch (const std::exception& e) {
        throw std::domain_error("scenario '" + scenario.name + "': " + e.what());
    }
    std::vector<ModelEstimate> out;
    out.reserve(scenario.bits.size());
    for (int b : scenario.bits) {
        try {
            out.push_back(estimate_one(scenario, b));
        } catch (const std::exception& e) {
            throw std::domain_error("scenario '" + scenario.name + "' (" +
                                    model_name(scenario.model) + ", L=" +
                                    std::to_string(b) + "): " + e.what());
        }
    }
    return out;
}

SweepResult run_sweep(const SweepSpec& spec, int n_threads) {
    spec.validate();
    if (n_threads < 1) n_threads = 1;

    const std::vector<double> values = spec.grid.values();
    SweepResult result;
    result.spec = spec;
    result.rows.resize(values.size());

    auto eval_row = [&](size_t i) {
        SweepRow& row = result.rows[i];
        row.axis_value = values[i];
        try {
            Scenario s = spec.scenario;
            int bits = s.bits.front();
            if (spec.axis == SweepAxis::L) {
                bits = static_cast<int>(std::lround(values[i]));
                if (bits < 1)
                    throw std::domain_error("bits: L >= 1 required");
                row.axis_value = bits;
            } else {
                double& field = [&]() -> double& {
                    switch (spec.axis) {
                        case SweepAxis::Rho: return s.params.rho;
                        case SweepAxis::Eta: return s.params.eta;
                        case SweepAxis::Gamma: return s.params.gamma;
                        case SweepAxis::Epsilon: return s.params.epsilon;
                        case SweepAxis::Beta: return s.params.beta;
                        case SweepAxis::Alpha: return s.params.alpha;
                        default: return s.params.rho;
                    }
                }();
                field = values[i];
            }
            row.estimate = estimate_one(s, bits);
        } catch (const std::exception& e) {
            row.estimate.reset();
            row.error = e.what();
        }
    };

    const size_t n = values.size();
    const size_t workers = std::min<size_t>(n_threads, n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) eval_row(i);
    } else {
        // Static partition: each row writes only its own slot, so the
        // result does not depend on scheduling.
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (size_t i = w; i < n; i += workers) eval_row(i);
            });
        }
        for (auto& th : pool) th.join();
    }
    return result;
}

ModelComparison compare_models(int bits, const PhysicalParams& params) {
    ModelComparison cmp;
    const std::array<Model, 3> order{Model::CZ, Model::Raman, Model::Cavity};
    for (size_t i = 0; i < order.size(); ++i) {
        try {
            Scenario s;
            s.name = "compare";
            s.model = order[i];
            s.params = params;
            cmp.estimates[i] = estimate_one(s, bits);
        } catch (const std::exception& e) {
            cmp.errors[i] = e.what();
        }
    }
    std::vector<size_t> idx;
    for (size_t i = 0; i < order.size(); ++i)
        if (cmp.estimates[i]) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        return cmp.estimates[a]->t_min_s < cmp.estimates[b]->t_min_s;
    });
    for (size_t i : idx) cmp.ranking.push_back(order[i]);
    return cmp;
}

}  // namespace qfeas
