#include "qfeas/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace qfeas {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known) bad(where + ": unknown field '" + key + "'");
    }
}

double get_number(const json& obj, const std::string& where, const char* key,
                  std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        bad(where + ": missing field '" + std::string(key) + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) bad(where + "." + key + ": number required");
    return v.get<double>();
}

std::string get_string(const json& obj, const std::string& where, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_string()) bad(where + "." + key + ": string required");
    return v.get<std::string>();
}

PhysicalParams parse_params(const json& obj, const std::string& where) {
    check_keys(obj, where,
               {"eta", "rho", "epsilon", "gamma", "omega_pi", "beta", "alpha",
                "qubit_multiplier", "qubit_offset", "margin"});
    PhysicalParams p;
    p.eta = get_number(obj, where, "eta", p.eta);
    p.rho = get_number(obj, where, "rho", p.rho);
    p.epsilon = get_number(obj, where, "epsilon", p.epsilon);
    p.gamma = get_number(obj, where, "gamma", p.gamma);
    p.omega_pi = get_number(obj, where, "omega_pi", p.omega_pi);
    p.beta = get_number(obj, where, "beta", p.beta);
    p.alpha = get_number(obj, where, "alpha", p.alpha);
    p.qubit_multiplier = get_number(obj, where, "qubit_multiplier", p.qubit_multiplier);
    p.qubit_offset = get_number(obj, where, "qubit_offset", p.qubit_offset);
    p.margin = get_number(obj, where, "margin", p.margin);
    return p;
}

TrapGeometry parse_geometry(const json& obj, const std::string& where) {
    check_keys(obj, where, {"wavelength", "ion_mass", "com_frequency"});
    TrapGeometry g;
    g.wavelength = get_number(obj, where, "wavelength");
    g.ion_mass = get_number(obj, where, "ion_mass");
    g.com_frequency = get_number(obj, where, "com_frequency");
    return g;
}

Scenario parse_scenario(const json& obj, const std::string& where) {
    check_keys(obj, where,
               {"name", "model", "bits", "params", "geometry", "omega_sigma"});
    Scenario s;
    if (obj.contains("name")) s.name = get_string(obj, where, "name");
    if (!obj.contains("model")) bad(where + ": missing field 'model'");
    const std::string model = get_string(obj, where, "model");
    const auto m = model_from_name(model);
    if (!m) bad(where + ".model: one of cz|raman|cavity required");
    s.model = *m;
    if (obj.contains("bits")) {
        const json& b = obj.at("bits");
        s.bits.clear();
        if (b.is_number_integer()) {
            s.bits.push_back(b.get<int>());
        } else if (b.is_array()) {
            for (const json& x : b) {
                if (!x.is_number_integer()) bad(where + ".bits: integers required");
                s.bits.push_back(x.get<int>());
            }
        } else {
            bad(where + ".bits: integer or integer array required");
        }
    }
    if (obj.contains("params")) s.params = parse_params(obj.at("params"), where + ".params");
    if (obj.contains("geometry"))
        s.geometry = parse_geometry(obj.at("geometry"), where + ".geometry");
    if (obj.contains("omega_sigma"))
        s.omega_sigma = get_number(obj, where, "omega_sigma");
    return s;
}

SweepSpec parse_sweep(const json& obj, const std::string& where) {
    check_keys(obj, where, {"scenario", "axis", "grid"});
    if (!obj.contains("scenario")) bad(where + ": missing field 'scenario'");
    if (!obj.contains("axis")) bad(where + ": missing field 'axis'");
    if (!obj.contains("grid")) bad(where + ": missing field 'grid'");

    SweepSpec spec;
    spec.scenario = parse_scenario(obj.at("scenario"), where + ".scenario");
    const std::string axis = get_string(obj, where, "axis");
    const auto a = axis_from_name(axis);
    if (!a) bad(where + ".axis: one of L|rho|eta|gamma|epsilon|beta|alpha required");
    spec.axis = *a;

    const json& g = obj.at("grid");
    const std::string gw = where + ".grid";
    check_keys(g, gw, {"scale", "min", "max", "count"});
    if (g.contains("scale")) {
        const std::string scale = get_string(g, gw, "scale");
        if (scale == "log")
            spec.grid.log_scale = true;
        else if (scale == "linear")
            spec.grid.log_scale = false;
        else
            bad(gw + ".scale: 'linear' or 'log' required");
    }
    spec.grid.min = get_number(g, gw, "min");
    spec.grid.max = get_number(g, gw, "max");
    spec.grid.count = static_cast<int>(get_number(g, gw, "count"));
    return spec;
}

Pulse parse_pulse(const json& obj, const std::string& where, const Pulse& defaults) {
    check_keys(obj, where, {"peak", "start_frac", "duration_frac"});
    Pulse p = defaults;
    p.peak = get_number(obj, where, "peak", p.peak);
    p.start_frac = get_number(obj, where, "start_frac", p.start_frac);
    p.duration_frac = get_number(obj, where, "duration_frac", p.duration_frac);
    return p;
}

SimulationSpec parse_simulation(const json& obj, const std::string& where) {
    check_keys(obj, where,
               {"system", "schedule", "tol", "max_steps", "fit_beta", "dump"});
    if (!obj.contains("system")) bad(where + ": missing field 'system'");
    if (!obj.contains("schedule")) bad(where + ": missing field 'schedule'");

    SimulationSpec spec;
    const json& sys = obj.at("system");
    const std::string sw = where + ".system";
    check_keys(sys, sw,
               {"eta", "bits", "qubit_multiplier", "qubit_offset", "gamma", "detuning"});
    spec.system.eta = get_number(sys, sw, "eta", spec.system.eta);
    spec.system.bits = static_cast<int>(
        get_number(sys, sw, "bits", static_cast<double>(spec.system.bits)));
    spec.system.qubit_multiplier =
        get_number(sys, sw, "qubit_multiplier", spec.system.qubit_multiplier);
    spec.system.qubit_offset =
        get_number(sys, sw, "qubit_offset", spec.system.qubit_offset);
    spec.system.einstein_a = 2.0 * get_number(sys, sw, "gamma", 0.0);
    spec.system.detuning = get_number(sys, sw, "detuning", spec.system.detuning);

    const json& sch = obj.at("schedule");
    const std::string cw = where + ".schedule";
    check_keys(sch, cw, {"t_ad", "sigma", "pi", "enforce_ordering"});
    spec.schedule.t_ad = get_number(sch, cw, "t_ad");
    if (sch.contains("sigma"))
        spec.schedule.sigma = parse_pulse(sch.at("sigma"), cw + ".sigma",
                                          spec.schedule.sigma);
    if (sch.contains("pi"))
        spec.schedule.pi = parse_pulse(sch.at("pi"), cw + ".pi", spec.schedule.pi);
    if (sch.contains("enforce_ordering")) {
        if (!sch.at("enforce_ordering").is_boolean())
            bad(cw + ".enforce_ordering: boolean required");
        spec.schedule.enforce_ordering = sch.at("enforce_ordering").get<bool>();
    }

    spec.options.tol = get_number(obj, where, "tol", spec.options.tol);
    spec.options.max_steps = static_cast<std::int64_t>(get_number(
        obj, where, "max_steps", static_cast<double>(spec.options.max_steps)));

    if (obj.contains("fit_beta")) {
        const json& fb = obj.at("fit_beta");
        const std::string fw = where + ".fit_beta";
        check_keys(fb, fw, {"t_ad_min", "t_ad_max", "count"});
        BetaGridSpec bg;
        bg.t_ad_min = get_number(fb, fw, "t_ad_min");
        bg.t_ad_max = get_number(fb, fw, "t_ad_max");
        bg.count = static_cast<int>(get_number(fb, fw, "count", 7.0));
        spec.beta_grid = bg;
    }
    if (obj.contains("dump")) spec.dump = get_string(obj, where, "dump");
    return spec;
}

ordered_json params_to_json(const PhysicalParams& p) {
    ordered_json j;
    j["eta"] = p.eta;
    j["rho"] = p.rho;
    j["epsilon"] = p.epsilon;
    if (p.gamma > 0.0) j["gamma"] = p.gamma;
    j["omega_pi"] = p.omega_pi;
    j["beta"] = p.beta;
    j["alpha"] = p.alpha;
    j["qubit_multiplier"] = p.qubit_multiplier;
    j["qubit_offset"] = p.qubit_offset;
    j["margin"] = p.margin;
    return j;
}

ordered_json scenario_to_json(const Scenario& s) {
    ordered_json j;
    if (!s.name.empty()) j["name"] = s.name;
    j["model"] = model_name(s.model);
    j["bits"] = s.bits;
    j["params"] = params_to_json(s.params);
    if (s.geometry) {
        ordered_json g;
        g["wavelength"] = s.geometry->wavelength;
        g["ion_mass"] = s.geometry->ion_mass;
        g["com_frequency"] = s.geometry->com_frequency;
        j["geometry"] = g;
    }
    if (s.omega_sigma) j["omega_sigma"] = *s.omega_sigma;
    return j;
}

ordered_json estimate_to_json(const ModelEstimate& e) {
    ordered_json j;
    j["model"] = model_name(e.model);
    j["L"] = e.bits;
    j["tau_el_s"] = e.tau_el_s;
    j["T_s"] = e.run_time_s;
    j["tau_dec_s"] = e.tau_dec_s;
    if (e.gamma_max_s) j["gamma_max_s"] = *e.gamma_max_s;
    j["t_min_s"] = e.t_min_s;
    j["feasible"] = e.feasible;
    j["diagnostics"] = e.diagnostics;
    return j;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void append_estimate_csv(std::string& out, const ModelEstimate& e) {
    out += model_name(e.model);
    out += ',';
    out += std::to_string(e.bits);
    out += ',';
    out += format_double(e.tau_el_s);
    out += ',';
    out += format_double(e.run_time_s);
    out += ',';
    out += format_double(e.tau_dec_s);
    out += ',';
    if (e.gamma_max_s) out += format_double(*e.gamma_max_s);
    out += ',';
    out += format_double(e.t_min_s);
    out += ',';
    out += e.feasible ? "true" : "false";
}

std::string join_diagnostics(const std::vector<std::string>& d) {
    std::string out;
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) out += "; ";
        out += d[i];
    }
    return out;
}

void append_table_cell(std::string& out, const std::string& s, size_t width) {
    out += s;
    for (size_t i = s.size(); i < width; ++i) out += ' ';
    out += "  ";
}

std::string estimates_table(const std::vector<ModelEstimate>& estimates) {
    static constexpr size_t kW[] = {7, 4, 11, 11, 11, 12, 11, 8};
    std::string out;
    const char* head[] = {"model", "L",       "tau_el_s",    "T_s",
                          "tau_dec_s", "gamma_max_s", "t_min_s", "feasible"};
    for (int i = 0; i < 8; ++i) append_table_cell(out, head[i], kW[i]);
    out += '\n';
    for (const ModelEstimate& e : estimates) {
        append_table_cell(out, model_name(e.model), kW[0]);
        append_table_cell(out, std::to_string(e.bits), kW[1]);
        append_table_cell(out, format_double(e.tau_el_s, 4), kW[2]);
        append_table_cell(out, format_double(e.run_time_s, 4), kW[3]);
        append_table_cell(out, format_double(e.tau_dec_s, 4), kW[4]);
        append_table_cell(out, e.gamma_max_s ? format_double(*e.gamma_max_s, 4) : "-",
                          kW[5]);
        append_table_cell(out, format_double(e.t_min_s, 4), kW[6]);
        append_table_cell(out, e.feasible ? "yes" : "no", kW[7]);
        if (!e.diagnostics.empty()) out += " [" + join_diagnostics(e.diagnostics) + "]";
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    return out;
}

ordered_json sweep_spec_to_json(const SweepSpec& spec) {
    ordered_json j;
    j["scenario"] = scenario_to_json(spec.scenario);
    j["axis"] = axis_name(spec.axis);
    ordered_json g;
    g["scale"] = spec.grid.log_scale ? "log" : "linear";
    g["min"] = spec.grid.min;
    g["max"] = spec.grid.max;
    g["count"] = spec.grid.count;
    j["grid"] = g;
    return j;
}

}  // namespace

const char* format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Table: return "table";
    }
    return "?";
}

std::optional<OutputFormat> format_from_name(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    if (name == "table") return OutputFormat::Table;
    return std::nullopt;
}

void BetaGridSpec::validate() const {
    if (!(t_ad_min > 0.0)) bad("fit_beta.t_ad_min: > 0 required");
    if (!(t_ad_max > t_ad_min)) bad("fit_beta.t_ad_max: > t_ad_min required");
    if (count < 2) bad("fit_beta.count: >= 2 required");
}

std::vector<double> BetaGridSpec::values() const {
    validate();
    std::vector<double> v(count);
    const double a = std::log(t_ad_min), b = std::log(t_ad_max);
    for (int i = 0; i < count; ++i)
        v[i] = std::exp(a + (b - a) * i / (count - 1));
    v.front() = t_ad_min;
    v.back() = t_ad_max;
    return v;
}

void SimulationSpec::validate() const {
    system.validate();
    schedule.validate();
    options.validate();
    if (beta_grid) beta_grid->validate();
}

Config parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) bad("config: JSON object required");
    // "results" is emitted by the reports and ignored on input, so a
    // report document is itself a valid configuration.
    check_keys(doc, "config",
               {"scenario", "sweep", "simulation", "format", "output", "results"});

    Config cfg;
    int present = 0;
    if (doc.contains("scenario")) {
        cfg.scenario = parse_scenario(doc.at("scenario"), "scenario");
        ++present;
    }
    if (doc.contains("sweep")) {
        cfg.sweep = parse_sweep(doc.at("sweep"), "sweep");
        ++present;
    }
    if (doc.contains("simulation")) {
        cfg.simulation = parse_simulation(doc.at("simulation"), "simulation");
        ++present;
    }
    if (present != 1)
        bad("config: exactly one of scenario|sweep|simulation required");
    if (doc.contains("format")) {
        const std::string f = get_string(doc, "config", "format");
        const auto fmt = format_from_name(f);
        if (!fmt) bad("config.format: one of csv|json|table required");
        cfg.format = *fmt;
    }
    if (doc.contains("output")) cfg.output = get_string(doc, "config", "output");
    return cfg;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_double(double v, int significant_digits) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                   std::chars_format::general, significant_digits);
    return std::string(buf, res.ptr);
}

std::string estimate_report(const Scenario& scenario,
                            const std::vector<ModelEstimate>& estimates,
                            OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: {
            ordered_json j;
            j["scenario"] = scenario_to_json(scenario);
            ordered_json rows = ordered_json::array();
            for (const ModelEstimate& e : estimates) rows.push_back(estimate_to_json(e));
            j["results"] = rows;
            return j.dump(2) + "\n";
        }
        case OutputFormat::Csv: {
            std::string out =
                "model,L,tau_el_s,T_s,tau_dec_s,gamma_max_s,t_min_s,feasible,"
                "diagnostics\n";
            for (const ModelEstimate& e : estimates) {
                append_estimate_csv(out, e);
                out += ',';
                out += csv_escape(join_diagnostics(e.diagnostics));
                out += '\n';
            }
            return out;
        }
        case OutputFormat::Table:
            return estimates_table(estimates);
    }
    return {};
}

std::string sweep_report(const SweepResult& result, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: {
            ordered_json j;
            j["sweep"] = sweep_spec_to_json(result.spec);
            ordered_json rows = ordered_json::array();
            for (const SweepRow& r : result.rows) {
                ordered_json row;
                row["axis_value"] = r.axis_value;
                if (r.estimate)
                    row["estimate"] = estimate_to_json(*r.estimate);
                else
                    row["error"] = r.error;
                rows.push_back(row);
            }
            j["results"] = rows;
            return j.dump(2) + "\n";
        }
        case OutputFormat::Csv: {
            std::string out =
                "axis,model,L,tau_el_s,T_s,tau_dec_s,gamma_max_s,t_min_s,feasible,"
                "error\n";
            for (const SweepRow& r : result.rows) {
                out += format_double(r.axis_value);
                out += ',';
                if (r.estimate) {
                    append_estimate_csv(out, *r.estimate);
                    out += ',';
                } else {
                    out += model_name(result.spec.scenario.model);
                    out += ",,,,,,,,";
                    out += csv_escape(r.error);
                }
                out += '\n';
            }
            return out;
        }
        case OutputFormat::Table: {
            std::vector<ModelEstimate> ok;
            std::string failed;
            for (const SweepRow& r : result.rows) {
                if (r.estimate)
                    ok.push_back(*r.estimate);
                else
                    failed += std::string(axis_name(result.spec.axis)) + " = " +
                              format_double(r.axis_value, 4) + ": " + r.error + "\n";
            }
            return estimates_table(ok) + failed;
        }
    }
    return {};
}

std::string simulation_report(const SimulationSpec& spec, const SimResult& result,
                              const std::optional<BetaFit>& fit) {
    ordered_json sim;
    ordered_json sys;
    sys["eta"] = spec.system.eta;
    sys["bits"] = spec.system.bits;
    sys["qubit_multiplier"] = spec.system.qubit_multiplier;
    sys["qubit_offset"] = spec.system.qubit_offset;
    sys["gamma"] = 0.5 * spec.system.einstein_a;
    sys["detuning"] = spec.system.detuning;
    sim["system"] = sys;
    ordered_json sch;
    sch["t_ad"] = spec.schedule.t_ad;
    auto pulse_json = [](const Pulse& p) {
        ordered_json j;
        j["peak"] = p.peak;
        j["start_frac"] = p.start_frac;
        j["duration_frac"] = p.duration_frac;
        return j;
    };
    sch["sigma"] = pulse_json(spec.schedule.sigma);
    sch["pi"] = pulse_json(spec.schedule.pi);
    sch["enforce_ordering"] = spec.schedule.enforce_ordering;
    sim["schedule"] = sch;
    sim["tol"] = spec.options.tol;
    sim["max_steps"] = spec.options.max_steps;
    if (spec.beta_grid) {
        ordered_json fb;
        fb["t_ad_min"] = spec.beta_grid->t_ad_min;
        fb["t_ad_max"] = spec.beta_grid->t_ad_max;
        fb["count"] = spec.beta_grid->count;
        sim["fit_beta"] = fb;
    }
    if (spec.dump) sim["dump"] = *spec.dump;

    ordered_json res;
    res["transfer_fidelity"] = result.transfer_fidelity;
    res["p_em"] = result.p_em;
    ordered_json fin;
    fin["P_g1"] = result.final_p_g1;
    fin["P_e"] = result.final_p_e;
    fin["P_g2"] = result.final_p_g2;
    fin["norm"] = result.final_norm;
    res["final"] = fin;
    ordered_json stats;
    stats["steps"] = result.stats.steps;
    stats["rejected_steps"] = result.stats.rejected_steps;
    stats["max_local_error"] = result.stats.max_local_error;
    stats["error_estimate"] = result.stats.error_estimate;
    res["stats"] = stats;
    if (fit) {
        ordered_json fj;
        fj["beta"] = fit->beta;
        fj["t_ad_min"] = fit->t_ad_min;
        fj["t_ad_max"] = fit->t_ad_max;
        fj["slope"] = fit->slope;
        fj["residual"] = fit->residual;
        fj["t_ad"] = fit->t_ad;
        fj["p_em"] = fit->p_em;
        fj["betas"] = fit->betas;
        res["fit_beta"] = fj;
    }

    ordered_json j;
    j["simulation"] = sim;
    j["results"] = res;
    return j.dump(2) + "\n";
}

}  // namespace qfeas
