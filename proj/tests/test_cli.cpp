#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = true) {
    const std::string cmd = std::string(QFEAS_CLI_PATH) + " " + args +
                            (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

const char* kSweepConfig = R"({
  "sweep": {
    "scenario": {"name": "cz-paper", "model": "cz", "bits": [2]},
    "axis": "L",
    "grid": {"scale": "linear", "min": 2, "max": 4, "count": 3}
  }
})";

const char* kSimConfig = R"({
  "simulation": {
    "system": {"eta": 0.1, "bits": 2, "gamma": 0},
    "schedule": {"t_ad": 7.91e-3, "sigma": {"peak": 2e6}, "pi": {"peak": 4e6}},
    "tol": 1e-8
  }
})";

}  // namespace

TEST_CASE("estimate preset to json") {
    const RunResult r =
        run_cli("estimate --preset cz-paper --bits 4 --format json", false);
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["results"].size() == 1);
    const double t_min = doc["results"][0]["t_min_s"].get<double>();
    CHECK(std::abs(t_min - 258.72575761191688) / 258.72575761191688 < 1e-12);
    CHECK(std::abs(t_min - 258.8) / t_min < 1e-3);  // table value after rounding
    const double g_max = doc["results"][0]["gamma_max_s"].get<double>();
    CHECK(std::abs(g_max - 1.933e-4) / g_max < 1e-3);
}

TEST_CASE("estimate validation failures exit 2 and name the precondition") {
    const RunResult r = run_cli("estimate --model cz --bits 0");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("L >= 1") != std::string::npos);

    const RunResult r2 = run_cli("estimate --model warp --bits 2");
    CHECK(r2.exit_code == 2);

    const RunResult r3 = run_cli("estimate --model cz --bits 2 --rho 2e10");
    CHECK(r3.exit_code == 2);
    CHECK(r3.out.find("rho") != std::string::npos);

    const RunResult r4 = run_cli("estimate --bogus-flag 1");
    CHECK(r4.exit_code == 2);
}

TEST_CASE("estimate raman preset value") {
    const RunResult r =
        run_cli("estimate --preset raman-paper --bits 2 --format json", false);
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    const double t_min = doc["results"][0]["t_min_s"].get<double>();
    CHECK(std::abs(t_min - 0.064) / 0.064 < 1e-12);
}

TEST_CASE("estimate json output feeds back as config with identical results") {
    const RunResult first =
        run_cli("estimate --preset cavity-unit --bits 4 --format json", false);
    REQUIRE(first.exit_code == 0);
    write_file("cli_roundtrip.json", first.out);
    const RunResult second =
        run_cli("estimate --config cli_roundtrip.json --format json", false);
    REQUIRE(second.exit_code == 0);
    CHECK(first.out == second.out);
    std::remove("cli_roundtrip.json");
}

TEST_CASE("sweep csv output and determinism") {
    write_file("cli_sweep.json", kSweepConfig);
    const RunResult a = run_cli("sweep --config cli_sweep.json", false);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out.rfind("axis,model,L,tau_el_s,T_s,tau_dec_s,gamma_max_s,t_min_s,"
                      "feasible,error\n",
                      0) == 0);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 4);
    CHECK(a.out.find("\n2,cz,2,") != std::string::npos);

    const RunResult b = run_cli("sweep --config cli_sweep.json", false);
    const RunResult c = run_cli("sweep --config cli_sweep.json --threads 4", false);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);

    const RunResult j = run_cli("sweep --config cli_sweep.json --format json", false);
    REQUIRE(j.exit_code == 0);
    const json doc = json::parse(j.out);
    CHECK(doc["results"].size() == 3);
    std::remove("cli_sweep.json");
}

TEST_CASE("sweep rejects malformed configs with exit 2") {
    write_file("cli_bad.json", R"({"sweep": {"axis": "L"}})");
    const RunResult r = run_cli("sweep --config cli_bad.json");
    CHECK(r.exit_code == 2);
    std::remove("cli_bad.json");

    const RunResult missing = run_cli("sweep --config does_not_exist.json");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("simulate reports the no-decay adiabatic limit") {
    write_file("cli_sim.json", kSimConfig);
    const RunResult r = run_cli("simulate --config cli_sim.json", false);
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["results"]["p_em"].get<double>() == 0.0);
    CHECK(doc["results"]["transfer_fidelity"].get<double>() >= 0.999);
    std::remove("cli_sim.json");
}

TEST_CASE("simulate writes the time-series dump") {
    write_file("cli_sim.json", kSimConfig);
    const RunResult r =
        run_cli("simulate --config cli_sim.json --dump cli_traj.csv", false);
    REQUIRE(r.exit_code == 0);
    std::ifstream traj("cli_traj.csv");
    REQUIRE(traj.good());
    std::string header;
    std::getline(traj, header);
    CHECK(header == "t,P_g1,P_e,P_g2,norm");
    std::string first;
    std::getline(traj, first);
    CHECK(first.rfind("0,1,0,0,1", 0) == 0);
    std::remove("cli_sim.json");
    std::remove("cli_traj.csv");
}

TEST_CASE("simulate exit codes distinguish schedule and convergence errors") {
    write_file("cli_sim_bad.json", R"({
      "simulation": {
        "system": {"eta": 0.1, "bits": 2, "gamma": 0},
        "schedule": {"t_ad": 1e-3,
                     "sigma": {"peak": 1e6, "start_frac": 0.4, "duration_frac": 0.5},
                     "pi": {"peak": 1e6, "start_frac": 0.0, "duration_frac": 0.5}},
        "tol": 1e-8
      }
    })");
    const RunResult bad = run_cli("simulate --config cli_sim_bad.json");
    CHECK(bad.exit_code == 2);
    CHECK(bad.out.find("ordering") != std::string::npos);
    std::remove("cli_sim_bad.json");

    write_file("cli_sim_stuck.json", R"({
      "simulation": {
        "system": {"eta": 0.1, "bits": 2, "gamma": 1000},
        "schedule": {"t_ad": 1.6e-2, "sigma": {"peak": 2e6}, "pi": {"peak": 4e6}},
        "tol": 1e-10,
        "max_steps": 20
      }
    })");
    const RunResult stuck = run_cli("simulate --config cli_sim_stuck.json");
    CHECK(stuck.exit_code == 3);
    std::remove("cli_sim_stuck.json");
}

TEST_CASE("simulate fit-beta block reports the loss constant") {
    write_file("cli_fit.json", R"({
      "simulation": {
        "system": {"eta": 0.1, "bits": 2, "gamma": 1000},
        "schedule": {"t_ad": 8e-3, "sigma": {"peak": 2e6}, "pi": {"peak": 4e6}},
        "tol": 1e-7,
        "fit_beta": {"t_ad_min": 8e-3, "t_ad_max": 8e-2, "count": 5}
      }
    })");
    const RunResult r = run_cli("simulate --config cli_fit.json", false);
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    const double beta = doc["results"]["fit_beta"]["beta"].get<double>();
    const double slope = doc["results"]["fit_beta"]["slope"].get<double>();
    CHECK(beta > 30.0);
    CHECK(beta < 300.0);
    CHECK(std::abs(slope + 1.0) < 0.1);
    std::remove("cli_fit.json");
}

TEST_CASE("table output is the default estimate format") {
    const RunResult r = run_cli("estimate --preset barium", false);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("model", 0) == 0);
    CHECK(r.out.find("cz") != std::string::npos);
    CHECK(r.out.find("no") != std::string::npos);  // L=4 infeasible at 0.044
}
