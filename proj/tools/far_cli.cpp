// far: command-line front end for the fluid-antenna-relay sum-rate solver.
//
//   far solve <scenario> [--scheme S] [--traces]
//   far sweep <scenario> [--powers LIST|RANGE] [--schemes LIST] --out PATH
//   far oracle <scenario> --resolution M [--joint4d]
//   far gen <seed> <n_users> --out PATH
//
// Exit codes: 0 success, 1 validation error, 2 infeasible scenario,
// 3 internal solver failure.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "far/far.hpp"
#include "far/report_json.hpp"

namespace {

enum ExitCode : int { kOk = 0, kValidation = 1, kInfeasible = 2, kSolverFailure = 3 };

struct CommonOptions {
    unsigned threads = 0;
    bool center_equal_bandwidth = false;
    double oracle_resolution = 0.1;
};

far::SolverConfig make_config(const CommonOptions& o) {
    far::SolverConfig c;
    c.threads = o.threads;
    c.equal_bandwidth_optimize_location = !o.center_equal_bandwidth;
    c.oracle_resolution_m = o.oracle_resolution;
    return c;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    cmd->add_flag("--center-equal-bandwidth", o.center_equal_bandwidth,
                  "Equal-bandwidth scheme keeps both ports at the rectangle center");
    cmd->add_option("--oracle-resolution", o.oracle_resolution, "Lattice step of the oracle scheme, meters")
        ->check(CLI::PositiveNumber);
}

int cmd_solve(const std::string& path, const std::string& scheme_name, bool traces, const CommonOptions& o) {
    const auto s = far::load_scenario(path);
    const auto report = far::run_scheme(s, far::parse_scheme(scheme_name), make_config(o));
    auto j = far::to_json(report, traces);
    j["radio"] = far::radio_json(s);
    std::cout << j.dump(2) << "\n";
    return report.feasible ? kOk : kInfeasible;
}

int cmd_sweep(const std::string& path, const std::string& powers, const std::string& schemes, const std::string& out,
              const CommonOptions& o) {
    const auto s = far::load_scenario(path);
    far::SweepSpec spec;
    spec.powers_w = powers.empty() ? far::default_sweep_powers_w() : far::parse_powers(powers);
    spec.schemes = far::parse_schemes(schemes);
    const auto config = make_config(o);
    const auto result = far::run_sweep(s, spec, config);
    far::write_sweep_table(out, far::format_sweep_table(s, result, config));
    std::cout << "wrote " << result.rows.size() << " rows to " << out << "\n" << far::summary_line(result) << "\n";
    return kOk;
}

int cmd_oracle(const std::string& path, double resolution, bool joint4d, const CommonOptions& o) {
    const auto s = far::load_scenario(path);
    const auto port_b = far::optimal_port_b(s);
    const auto grid = joint4d ? far::grid_4d(s, resolution, o.threads)
                              : far::grid_2d(s, port_b.y, port_b.z, resolution, o.threads);
    const auto proposed = far::solve(s, make_config(o));
    nlohmann::json j{{"mode", joint4d ? "joint4d" : "port_a_2d"},
                     {"oracle", far::to_json(grid)},
                     {"proposed_sum_rate_bps", proposed.sum_rate_bps},
                     {"proposed_feasible", proposed.feasible},
                     {"proposed_placement", far::to_json(proposed.placement)}};
    if (grid.found_feasible && proposed.feasible && proposed.sum_rate_bps > 0.0)
        j["oracle_over_proposed_gap"] = (grid.best_sum_rate_bps - proposed.sum_rate_bps) / proposed.sum_rate_bps;
    std::cout << j.dump(2) << "\n";
    return grid.found_feasible ? kOk : kInfeasible;
}

int cmd_gen(std::uint64_t seed, std::size_t n_users, double tx_power_dbm, const std::string& out) {
    far::write_scenario(far::gen_scenario(seed, n_users, tx_power_dbm), out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fluid-antenna-relay uplink sum-rate solver"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string scenario_path;

    auto* solve = app.add_subcommand("solve", "Solve one scenario and print a JSON report");
    std::string scheme = "proposed";
    bool traces = false;
    solve->add_option("scenario", scenario_path, "Scenario file")->required();
    solve->add_option("--scheme", scheme, "proposed | fixed-location | equal-bandwidth | oracle");
    solve->add_flag("--traces", traces, "Include every SCA iterate in the report");
    add_common(solve, common);

    auto* sweep = app.add_subcommand("sweep", "Sweep the per-user transmit power and write a CSV table");
    std::string powers;
    std::string schemes = "proposed,fixed-location,equal-bandwidth";
    std::string out_path;
    sweep->add_option("scenario", scenario_path, "Scenario file")->required();
    sweep->add_option("--powers", powers, "e.g. -10:5:30dBm or 0dBm,10dBm,0.5W (default -10:5:30dBm)");
    sweep->add_option("--schemes", schemes, "Comma list of schemes");
    sweep->add_option("--out", out_path, "Output CSV path")->required();
    add_common(sweep, common);

    auto* oracle = app.add_subcommand("oracle", "Brute-force lattice search, compared with the proposed solver");
    double resolution = 0.1;
    bool joint4d = false;
    oracle->add_option("scenario", scenario_path, "Scenario file")->required();
    oracle->add_option("--resolution", resolution, "Lattice step, meters")->required()->check(CLI::PositiveNumber);
    oracle->add_flag("--joint4d", joint4d, "Search both ports jointly");
    add_common(oracle, common);

    auto* gen = app.add_subcommand("gen", "Generate a seeded random scenario");
    std::uint64_t seed = 0;
    std::size_t n_users = 0;
    double tx_power_dbm = far::kDefaultTxPowerDbm;
    gen->add_option("seed", seed, "Generator seed")->required();
    gen->add_option("n_users", n_users, "Number of users")->required();
    gen->add_option("--tx-power-dbm", tx_power_dbm, "Per-user transmit power");
    gen->add_option("--out", out_path, "Output scenario path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*solve) return cmd_solve(scenario_path, scheme, traces, common);
        if (*sweep) return cmd_sweep(scenario_path, powers, schemes, out_path, common);
        if (*oracle) return cmd_oracle(scenario_path, resolution, joint4d, common);
        if (*gen) return cmd_gen(seed, n_users, tx_power_dbm, out_path);
    } catch (const far::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const far::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
    return kOk;
}
