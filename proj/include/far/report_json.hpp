#pragma once

// JSON views of solver outputs for the CLI. User indices are 1-based here.

#include <json.hpp>

#include "far/oracle.hpp"
#include "far/orchestrator.hpp"

namespace far {

inline nlohmann::json to_json(const PortPlacement& p) {
    return {{"y1_m", p.y1}, {"z1_m", p.z1}, {"y2_m", p.y2}, {"z2_m", p.z2}};
}

inline nlohmann::json to_json(const ScaState& st) {
    return {{"t", st.iterate_index},
            {"y1_m", st.y1},
            {"z1_m", st.z1},
            {"q", st.q},
            {"u", st.u},
            {"surrogate_value", st.surrogate_value},
            {"true_objective", st.true_objective},
            {"stationarity", st.stationarity},
            {"inner_iterations", st.inner_iterations}};
}

inline nlohmann::json radio_json(const Scenario& s) {
    return {{"path_loss_exp", s.path_loss_exp},
            {"ref_gain", s.ref_gain},
            {"noise_power_w", s.noise_power_w},
            {"medium_factor", s.medium_factor},
            {"provenance", s.provenance}};
}

inline nlohmann::json to_json(const SolveReport& r, bool with_traces = false) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& run : r.runs) {
        nlohmann::json j{{"k", run.k + 1},
                         {"start_index", run.start_index},
                         {"start", {run.start.y, run.start.z}},
                         {"termination", to_string(run.trace.termination)},
                         {"outer_iterations", run.trace.outer_iterations()},
                         {"final_placement", to_json(run.final_placement)},
                         {"sum_rate_bps", run.sum_rate_bps},
                         {"consistent", run.consistent},
                         {"meets_floor", run.meets_floor}};
        if (!run.failure.empty()) j["failure"] = run.failure;
        if (with_traces) {
            nlohmann::json states = nlohmann::json::array();
            for (const auto& st : run.trace.states) states.push_back(to_json(st));
            j["trace"] = std::move(states);
        }
        runs.push_back(std::move(j));
    }
    return {{"scheme", std::string(to_string(r.scheme))},
            {"feasible", r.feasible},
            {"sum_rate_bps", r.sum_rate_bps},
            {"chosen_k", r.chosen_k + 1},
            {"placement", to_json(r.placement)},
            {"bandwidths_hz", r.allocation.bandwidths_hz},
            {"per_user_rates_bps", r.per_user_rates},
            {"iterations", r.iterations},
            {"best_user_below_floor", r.best_user_below_floor},
            {"runtime_ms", r.runtime_ms},
            {"diagnostics", r.diagnostics},
            {"runs", std::move(runs)}};
}

inline nlohmann::json to_json(const OracleResult& o) {
    return {{"resolution_m", o.resolution_m},
            {"best_point", to_json(o.best_point)},
            {"best_sum_rate_bps", o.best_sum_rate_bps},
            {"evaluated_points", o.evaluated_points},
            {"feasible_fraction", o.feasible_fraction},
            {"found_feasible", o.found_feasible}};
}

}  // namespace far
