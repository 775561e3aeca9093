#pragma once

// Brute-force lattice search over port locations. Ground truth for the SCA
// pipeline, and a measurement of what fixing port B first gives up.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "far/bandwidth.hpp"
#include "far/error.hpp"
#include "far/model.hpp"
#include "far/parallel.hpp"

namespace far {

struct OracleResult {
    double resolution_m = 0.0;
    PortPlacement best_point;
    double best_sum_rate_bps = 0.0;
    std::size_t evaluated_points = 0;
    double feasible_fraction = 0.0;
    bool found_feasible = false;
};

inline constexpr std::size_t kMaxOraclePoints = 10'000'000;

// Points lo, lo + r, lo + 2r, ... plus hi when hi is not itself on the lattice.
// Halving r (power-of-two refinement) yields a superset.
inline std::vector<double> lattice(const Interval& iv, double resolution) {
    if (!(resolution > 0.0)) throw ValidationError("resolution must be positive");
    const double steps = std::floor(iv.length() / resolution + 1e-9);
    if (steps > static_cast<double>(kMaxOraclePoints))
        throw ValidationError("grid too large along one axis; increase the resolution");
    std::vector<double> pts;
    const auto count = static_cast<std::size_t>(steps) + 1;
    pts.reserve(count + 1);
    for (std::size_t i = 0; i < count; ++i) pts.push_back(iv.lo + static_cast<double>(i) * resolution);
    if (pts.back() > iv.hi) pts.back() = iv.hi;
    if (pts.back() < iv.hi - 1e-12 * std::max(1.0, std::abs(iv.hi))) pts.push_back(iv.hi);
    return pts;
}

namespace detail {

struct PointEval {
    double sum_rate = 0.0;
    bool feasible = false;
};

// Same arithmetic as allocate(), without allocations.
class SumRateEvaluator {
public:
    explicit SumRateEvaluator(const Scenario& s)
        : s_(s), snr_(s.size()), eff_(s.size()), bw_(s.size()), rates_(min_rates(s)) {}

    PointEval operator()(const PortPlacement& p) {
        for (std::size_t n = 0; n < s_.size(); ++n) {
            snr_[n] = snr(s_, n, p);
            eff_[n] = std::log2(1.0 + snr_[n]);
        }
        const auto r = closed_form_into(s_.total_bandwidth_hz, eff_, rates_, best_user_index(snr_), bw_);
        return {r.sum_rate_bps, r.feasible};
    }

private:
    const Scenario& s_;
    std::vector<double> snr_, eff_, bw_, rates_;
};

struct RowBest {
    PortPlacement point;
    double value = 0.0;
    bool any_feasible = false;
    std::size_t feasible = 0;
    std::size_t evaluated = 0;
};

inline void check_size(double points, double resolution, int dims) {
    if (points > static_cast<double>(kMaxOraclePoints)) {
        const double suggested = resolution * std::pow(points / static_cast<double>(kMaxOraclePoints), 1.0 / dims);
        throw ValidationError("grid too large: " + std::to_string(static_cast<long long>(points)) +
                              " points; try resolution >= " + std::to_string(suggested) + " m");
    }
}

inline OracleResult reduce(std::vector<RowBest>& rows, double resolution) {
    OracleResult out;
    out.resolution_m = resolution;
    std::size_t feasible = 0;
    bool have_any = false;
    for (const auto& row : rows) {
        out.evaluated_points += row.evaluated;
        feasible += row.feasible;
        if (row.any_feasible && (!out.found_feasible || row.value > out.best_sum_rate_bps)) {
            out.found_feasible = true;
            out.best_point = row.point;
            out.best_sum_rate_bps = row.value;
        }
        if (!have_any) {
            have_any = true;
            if (!row.any_feasible) {
                out.best_point = row.point;
                out.best_sum_rate_bps = row.value;
            }
        }
    }
    out.feasible_fraction =
        out.evaluated_points ? static_cast<double>(feasible) / static_cast<double>(out.evaluated_points) : 0.0;
    return out;
}

inline void consider(RowBest& row, const PortPlacement& p, const PointEval& e) {
    ++row.evaluated;
    if (e.feasible) ++row.feasible;
    if (row.evaluated == 1 && !e.feasible) {
        row.point = p;
        row.value = e.sum_rate;
    }
    if (e.feasible && (!row.any_feasible || e.sum_rate > row.value)) {
        row.any_feasible = true;
        row.point = p;
        row.value = e.sum_rate;
    }
}

}  // namespace detail

// Exhaustive search over port A with port B fixed at (y2, z2). Infeasible lattice
// points count toward feasible_fraction only. When nothing is feasible,
// best_point is the lattice origin and found_feasible is false.
inline OracleResult grid_2d(const Scenario& s, double y2, double z2, double resolution, unsigned threads = 0) {
    const auto ys = lattice(s.y_bounds, resolution);
    const auto zs = lattice(s.z_bounds, resolution);
    detail::check_size(static_cast<double>(ys.size()) * static_cast<double>(zs.size()), resolution, 2);
    auto rows = parallel_map(ys.size(), threads, [&](std::size_t i) {
        detail::SumRateEvaluator eval(s);
        detail::RowBest row;
        for (double z1 : zs) {
            const PortPlacement p{ys[i], z1, y2, z2};
            detail::consider(row, p, eval(p));
        }
        return row;
    });
    return detail::reduce(rows, resolution);
}

// Joint search over both ports.
inline OracleResult grid_4d(const Scenario& s, double resolution, unsigned threads = 0) {
    const auto ys = lattice(s.y_bounds, resolution);
    const auto zs = lattice(s.z_bounds, resolution);
    const double ny = static_cast<double>(ys.size());
    const double nz = static_cast<double>(zs.size());
    detail::check_size(ny * ny * nz * nz, resolution, 4);
    auto rows = parallel_map(ys.size(), threads, [&](std::size_t i) {
        detail::SumRateEvaluator eval(s);
        detail::RowBest row;
        for (double z1 : zs)
            for (double y2 : ys)
                for (double z2 : zs) {
                    const PortPlacement p{ys[i], z1, y2, z2};
                    detail::consider(row, p, eval(p));
                }
        return row;
    });
    return detail::reduce(rows, resolution);
}

}  // namespace far
