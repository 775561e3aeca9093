#pragma once

// End-to-end solve: port B in closed form, an SCA run for every hypothesis of
// which user absorbs the surplus bandwidth, keep the best consistent run, then
// split the bandwidth in closed form. Also the two reference schemes.

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "far/bandwidth.hpp"
#include "far/error.hpp"
#include "far/model.hpp"
#include "far/oracle.hpp"
#include "far/parallel.hpp"
#include "far/placement_portb.hpp"
#include "far/sca_porta.hpp"

namespace far {

enum class Scheme { proposed, fixed_location, equal_bandwidth, oracle };

inline std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::proposed: return "proposed";
        case Scheme::fixed_location: return "fixed-location";
        case Scheme::equal_bandwidth: return "equal-bandwidth";
        case Scheme::oracle: return "oracle";
    }
    return "unknown";
}

inline Scheme parse_scheme(std::string_view name) {
    for (Scheme s : {Scheme::proposed, Scheme::fixed_location, Scheme::equal_bandwidth, Scheme::oracle})
        if (to_string(s) == name) return s;
    throw ValidationError("unknown scheme '" + std::string(name) +
                          "' (expected proposed, fixed-location, equal-bandwidth or oracle)");
}

struct SolverConfig {
    ScaOptions sca;
    // Equal-bandwidth scheme: optimize the port locations (true) or use the
    // rectangle center like the fixed-location scheme (false).
    bool equal_bandwidth_optimize_location = true;
    double oracle_resolution_m = 0.1;
    unsigned threads = 0;  // 0: hardware concurrency
};

// One SCA run of the multi-start grid.
struct ScaRun {
    std::size_t k = 0;
    std::size_t start_index = 0;
    PortLocation start;
    ScaTrace trace;
    PortPlacement final_placement;
    double sum_rate_bps = 0.0;  // closed-form total at final_placement
    bool consistent = false;    // k is the argmax at final_placement and b_k >= 0
    bool meets_floor = false;   // user k also reaches R_k
    std::string failure;        // non-empty when the inner solver gave up
};

struct SolveReport {
    Scheme scheme = Scheme::proposed;
    PortPlacement placement;
    BandwidthAllocation allocation;
    std::vector<double> per_user_rates;
    double sum_rate_bps = 0.0;
    std::size_t chosen_k = 0;  // 0-based
    std::vector<ScaRun> runs;
    int iterations = 0;  // outer SCA iterations of the winning run
    bool feasible = false;
    bool best_user_below_floor = false;
    double runtime_ms = 0.0;
    std::vector<std::string> diagnostics;
};

namespace detail {

inline bool meets_floors(const Scenario& s, std::span<const double> rates) {
    for (std::size_t n = 0; n < s.size(); ++n)
        if (!(rates[n] >= s.users[n].min_rate_bps * (1.0 - 1e-9))) return false;
    return true;
}

inline void finish_with_allocation(const Scenario& s, SolveReport& r) {
    r.allocation = allocate(s, r.placement);
    r.per_user_rates = user_rates(s, r.placement, r.allocation.bandwidths_hz);
    r.sum_rate_bps = 0.0;
    for (double v : r.per_user_rates) r.sum_rate_bps += v;
    r.chosen_k = r.allocation.best_user;
    r.feasible = r.allocation.feasible && meets_floors(s, r.per_user_rates);
}

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline ScaRun run_one(const Scenario& s, std::size_t k, std::size_t start_index, PortLocation start,
                      PortLocation port_b, ScaObjective mode, const ScaOptions& opt) {
    ScaRun run;
    run.k = k;
    run.start_index = start_index;
    run.start = start;
    try {
        auto [placement, trace] = sca_optimize_port_a(s, k, port_b.y, port_b.z, start, mode, opt);
        run.final_placement = placement;
        run.trace = std::move(trace);
    } catch (const SolverError& e) {
        run.failure = e.what();
        run.final_placement = {start.y, start.z, port_b.y, port_b.z};
    }
    return run;
}

}  // namespace detail

inline SolveReport solve(const Scenario& s, const SolverConfig& config = {}) {
    validate(s);
    detail::Stopwatch clock;
    const PortLocation port_b = optimal_port_b(s);
    const auto starts = multi_start_points(s);
    const std::size_t n_users = s.size();

    SolveReport report;
    report.scheme = Scheme::proposed;
    report.runs = parallel_map(n_users * starts.size(), config.threads, [&](std::size_t task) {
        const std::size_t k = task / starts.size();
        const std::size_t si = task % starts.size();
        return detail::run_one(s, k, si, starts[si], port_b, ScaObjective::best_user_rate, config.sca);
    });

    const ScaRun* best = nullptr;
    const ScaRun* best_below_floor = nullptr;
    std::size_t failures = 0;
    for (auto& run : report.runs) {
        if (!run.failure.empty()) {
            ++failures;
            continue;
        }
        if (run.trace.termination == ScaTermination::infeasible_start) continue;
        const auto alloc = allocate(s, run.final_placement);
        run.sum_rate_bps = alloc.sum_rate_bps;
        run.consistent = alloc.best_user == run.k && alloc.bandwidths_hz[run.k] >= 0.0;
        if (!run.consistent) continue;
        const double rate_k = achievable_rate(s, run.k, run.final_placement, alloc.bandwidths_hz[run.k]);
        run.meets_floor = rate_k >= s.users[run.k].min_rate_bps * (1.0 - 1e-9);
        auto& slot = run.meets_floor ? best : best_below_floor;
        if (slot == nullptr || run.sum_rate_bps > slot->sum_rate_bps) slot = &run;
    }
    if (failures > 0)
        report.diagnostics.push_back(std::to_string(failures) + " SCA run(s) stopped without a stationarity certificate");

    const ScaRun* chosen = best ? best : best_below_floor;
    if (chosen) {
        report.placement = chosen->final_placement;
        report.iterations = chosen->trace.outer_iterations();
        if (!best) {
            report.best_user_below_floor = true;
            report.diagnostics.push_back("surplus user " + std::to_string(chosen->k + 1) +
                                         " ends below its rate floor in every consistent run");
        }
    } else {
        report.placement = {s.y_bounds.center(), s.z_bounds.center(), port_b.y, port_b.z};
        report.diagnostics.push_back("no SCA run ended at a placement where its surplus user is the strongest "
                                     "and the rate floors fit the budget");
    }
    detail::finish_with_allocation(s, report);
    if (!chosen) report.feasible = false;
    report.runtime_ms = clock.elapsed_ms();
    return report;
}

// Both ports at the center of the rectangle, closed-form bandwidth.
inline SolveReport fixed_location_baseline(const Scenario& s) {
    validate(s);
    detail::Stopwatch clock;
    SolveReport report;
    report.scheme = Scheme::fixed_location;
    report.placement = center_placement(s);
    detail::finish_with_allocation(s, report);
    report.runtime_ms = clock.elapsed_ms();
    return report;
}

// b_n = B/N for everyone; port B in closed form and port A by multi-start SCA on
// sum_n (B/N) log2(1 + SNR_n), unless config disables location optimization.
inline SolveReport equal_bandwidth_baseline(const Scenario& s, const SolverConfig& config = {}) {
    validate(s);
    detail::Stopwatch clock;
    SolveReport report;
    report.scheme = Scheme::equal_bandwidth;

    if (config.equal_bandwidth_optimize_location) {
        const PortLocation port_b = optimal_port_b(s);
        const auto starts = multi_start_points(s);
        report.runs = parallel_map(starts.size(), config.threads, [&](std::size_t si) {
            return detail::run_one(s, 0, si, starts[si], port_b, ScaObjective::equal_bandwidth, config.sca);
        });
        const ScaRun* best = nullptr;
        for (auto& run : report.runs) {
            if (!run.failure.empty()) continue;
            run.sum_rate_bps = run.trace.states.back().true_objective;
            run.consistent = true;
            if (best == nullptr || run.sum_rate_bps > best->sum_rate_bps) best = &run;
        }
        if (best) {
            report.placement = best->final_placement;
            report.iterations = best->trace.outer_iterations();
        } else {
            report.placement = {s.y_bounds.center(), s.z_bounds.center(), port_b.y, port_b.z};
            report.diagnostics.push_back("every SCA run failed; reporting the center of the rectangle");
        }
    } else {
        report.placement = center_placement(s);
        report.diagnostics.push_back("location optimization disabled; ports at the rectangle center");
    }

    const double share = s.total_bandwidth_hz / static_cast<double>(s.size());
    report.allocation.bandwidths_hz.assign(s.size(), share);
    report.per_user_rates = user_rates(s, report.placement, report.allocation.bandwidths_hz);
    report.sum_rate_bps = 0.0;
    for (double v : report.per_user_rates) report.sum_rate_bps += v;
    report.chosen_k = best_user_index(snrs(s, report.placement));
    report.feasible = detail::meets_floors(s, report.per_user_rates);
    report.allocation.best_user = report.chosen_k;
    report.allocation.sum_rate_bps = report.sum_rate_bps;
    report.allocation.feasible = report.feasible;
    report.runtime_ms = clock.elapsed_ms();
    return report;
}

// Lattice search over port A with port B in closed form, packaged as a report.
inline SolveReport oracle_scheme(const Scenario& s, const SolverConfig& config = {}) {
    validate(s);
    detail::Stopwatch clock;
    const PortLocation port_b = optimal_port_b(s);
    const auto grid = grid_2d(s, port_b.y, port_b.z, config.oracle_resolution_m, config.threads);
    SolveReport report;
    report.scheme = Scheme::oracle;
    report.placement = grid.best_point;
    detail::finish_with_allocation(s, report);
    if (!grid.found_feasible) report.diagnostics.push_back("no feasible lattice point");
    report.runtime_ms = clock.elapsed_ms();
    return report;
}

inline SolveReport run_scheme(const Scenario& s, Scheme scheme, const SolverConfig& config = {}) {
    switch (scheme) {
        case Scheme::proposed: return solve(s, config);
        case Scheme::fixed_location: return fixed_location_baseline(s);
        case Scheme::equal_bandwidth: return equal_bandwidth_baseline(s, config);
        case Scheme::oracle: return oracle_scheme(s, config);
    }
    throw ValidationError("unknown scheme");
}

}  // namespace far
