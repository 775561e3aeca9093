#pragma once

// Test-only helpers: random instance generators and oracles that re-derive
// quantities without going through the library's code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "far/model.hpp"
#include "far/sca_porta.hpp"

namespace far::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

struct RandomScenarioOptions {
    std::size_t min_users = 1;
    std::size_t max_users = 5;
    bool equal_powers = false;
    double min_rate_lo = 1e4;
    double min_rate_hi = 2e5;
};

// Broader than the reference geometry: random BS, wall, bounds and powers.
inline Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioOptions& opt = {}) {
    Scenario s;
    const auto n = static_cast<std::size_t>(
        std::floor(uniform(rng, static_cast<double>(opt.min_users), static_cast<double>(opt.max_users) + 1.0)));
    s.wall_width_m = uniform(rng, 5.0, 40.0);
    s.bs_position = {uniform(rng, 100.0, 500.0), uniform(rng, -50.0, 80.0), uniform(rng, 0.0, 60.0)};
    const double ylo = uniform(rng, -10.0, 10.0);
    const double zlo = uniform(rng, 0.0, 10.0);
    s.y_bounds = {ylo, ylo + uniform(rng, 2.0, 30.0)};
    s.z_bounds = {zlo, zlo + uniform(rng, 2.0, 30.0)};
    s.total_bandwidth_hz = uniform(rng, 5e6, 2e7);
    s.noise_power_w = 1e-12;
    s.ref_gain = 1e-4;
    s.path_loss_exp = uniform(rng, 1.5, 3.0);
    s.medium_factor = uniform(rng, 1.5, 6.0);
    const double p = uniform(rng, 1e-3, 1.0);
    for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i) {
        UserTerminal u;
        u.position = {uniform(rng, 1.0, 300.0), uniform(rng, 0.0, 300.0)};
        u.tx_power_w = opt.equal_powers ? p : uniform(rng, 1e-3, 1.0);
        u.min_rate_bps = uniform(rng, opt.min_rate_lo, opt.min_rate_hi);
        s.users.push_back(u);
    }
    return s;
}

inline PortPlacement random_placement(std::mt19937_64& rng, const Scenario& s) {
    return {uniform(rng, s.y_bounds.lo, s.y_bounds.hi), uniform(rng, s.z_bounds.lo, s.z_bounds.hi),
            uniform(rng, s.y_bounds.lo, s.y_bounds.hi), uniform(rng, s.z_bounds.lo, s.z_bounds.hi)};
}

// Channel gain straight from the geometry, written out long-hand.
inline double reference_gain(const Scenario& s, std::size_t n, const PortPlacement& p) {
    const auto& u = s.users[n];
    const double a = std::sqrt(u.position.x * u.position.x + (p.y1 - u.position.y) * (p.y1 - u.position.y) +
                               p.z1 * p.z1);
    const double b = std::sqrt(s.wall_width_m * s.wall_width_m + (p.y1 - p.y2) * (p.y1 - p.y2) +
                               (p.z1 - p.z2) * (p.z1 - p.z2));
    const double dx = s.wall_width_m - s.bs_position.x;
    const double dy = p.y2 - s.bs_position.y;
    const double dz = p.z2 - s.bs_position.z;
    const double c = std::sqrt(dx * dx + dy * dy + dz * dz);
    return s.ref_gain / std::pow(a + b / s.medium_factor + c, s.path_loss_exp);
}

inline double reference_sum_rate(const Scenario& s, const PortPlacement& p, bool* feasible = nullptr) {
    std::vector<double> c(s.size());
    std::size_t k = 0;
    for (std::size_t n = 0; n < s.size(); ++n) {
        const double sn = s.users[n].tx_power_w * reference_gain(s, n, p) / s.noise_power_w;
        c[n] = std::log(1.0 + sn) / std::log(2.0);
        if (c[n] > c[k]) k = n;
    }
    double left = s.total_bandwidth_hz;
    double total = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n)
        if (n != k) {
            left -= s.users[n].min_rate_bps / c[n];
            total += s.users[n].min_rate_bps;
        }
    if (feasible) *feasible = left >= 0.0;
    return total + left * c[k];
}

// Subproblem oracle: the optimum of the convexified subproblem expanded at
// `expansion`, re-derived from the constraint definitions and maximized by a
// long-horizon projected ascent on finite-difference gradients.
class SubproblemOracle {
public:
    SubproblemOracle(const Scenario& s, const ScaState& expansion, std::size_t k) : s_(s), x_(expansion), k_(k) {}

    // -inf when infeasible.
    double value(double y1, double z1) const {
        const PortPlacement p{y1, z1, x_.y2, x_.z2};
        std::vector<double> q(s_.size());
        double pinned = 0.0;
        for (std::size_t n = 0; n < s_.size(); ++n) {
            const double inv_snr_scale = s_.noise_power_w / (s_.users[n].tx_power_w * s_.ref_gain);
            // sigma^2 / (p rho0) * L^alpha, with L^alpha = rho0 / gain
            const double g = inv_snr_scale * s_.ref_gain / reference_gain(s_, n, p);
            const double ut = x_.u[n];
            const double u = ut + ut * ut * (1.0 / ut - g);  // largest u with the linearized bound
            if (u < 0.0) return -INFINITY;
            q[n] = std::log1p(u) / std::log(2.0);
            if (n != k_) {
                if (q[n] <= 0.0) return -INFINITY;
                pinned += s_.users[n].min_rate_bps / q[n];
            }
        }
        const double B = s_.total_bandwidth_hz;
        if (pinned > B) return -INFINITY;
        const double cap = std::sqrt(q[k_]);
        const double qt = x_.q[k_];
        auto f = [&](double qk) { return B * qt * qt + 2.0 * B * qt * (qk - qt) - pinned * qk * qk; };
        // Concave quadratic on [0, cap]: best of the endpoints and the clipped vertex.
        double best = std::max(f(0.0), f(cap));
        if (pinned > 0.0) {
            const double v = B * qt / pinned;
            if (v > 0.0 && v < cap) best = std::max(best, f(v));
        }
        return best;
    }

    struct Result {
        double y1, z1, value, stationarity;
    };

    Result maximize(double y1, double z1, int iterations = 20000, double tol = 1e-8) const {
        const auto& yb = s_.y_bounds;
        const auto& zb = s_.z_bounds;
        auto proj = [](double v, const Interval& iv) { return std::min(std::max(v, iv.lo), iv.hi); };
        double f = value(y1, z1);
        double step = 1.0;
        Result r{y1, z1, f, 0.0};
        for (int it = 0; it < iterations; ++it) {
            const double h = 1e-6;
            const double gy = (value(y1 + h, z1) - value(y1 - h, z1)) / (2 * h);
            const double gz = (value(y1, z1 + h) - value(y1, z1 - h)) / (2 * h);
            const double scale = 1.0 + std::abs(f);
            r.stationarity = std::hypot(proj(y1 + gy / scale, yb) - y1, proj(z1 + gz / scale, zb) - z1);
            if (r.stationarity <= tol) break;
            bool moved = false;
            step = std::min(step * 4.0, 1e6);
            for (int ls = 0; ls < 80; ++ls, step *= 0.5) {
                const double ny = proj(y1 + step * gy / scale, yb);
                const double nz = proj(z1 + step * gz / scale, zb);
                const double nf = value(ny, nz);
                if (nf > f) {
                    y1 = ny;
                    z1 = nz;
                    f = nf;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        r.y1 = y1;
        r.z1 = z1;
        r.value = f;
        return r;
    }

private:
    const Scenario& s_;
    const ScaState& x_;
    std::size_t k_;
};

}  // namespace far::testing
