#pragma once

// Successive convex approximation for the port-A location.
//
// Slack rates q and slack SNRs u turn the rate of the surplus user k into a
// difference of convex terms; each outer iteration maximizes the concave
// surrogate
//
//   B (q_k^t)^2 + 2 B q_k^t (q_k - q_k^t) - sum_{n != k} (R_n / q_n) q_k^2
//
// subject to the linearized SNR constraint
//
//   sigma^2 / (p_n rho_0) * L_n(y1, z1)^alpha <= 1/u_n^t - (u_n - u_n^t) / (u_n^t)^2,
//
// q_n <= log2(1 + u_n) (n != k), q_k^2 <= log2(1 + u_k), B - sum R_n / q_n >= 0,
// u >= 0 and the port-A box.
//
// For a fixed (y1, z1) the optimal slacks are explicit: u_n saturates the
// linearized constraint, q_n (n != k) saturates its log bound, and q_k is the
// vertex of a concave quadratic capped at sqrt(log2(1 + u_k)). Partial
// maximization of a jointly concave program keeps concavity, so each convex
// subproblem reduces to a smooth concave maximization over the 2-D box, which
// is solved by a feasible-start projected Newton method with Armijo
// backtracking and a projected-gradient stationarity certificate.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "far/bandwidth.hpp"
#include "far/error.hpp"
#include "far/model.hpp"
#include "far/placement_portb.hpp"

namespace far {

// Which location objective the SCA maximizes.
enum class ScaObjective {
    best_user_rate,   // rate of user k under closed-form bandwidth (proposed scheme)
    equal_bandwidth,  // sum_n (B/N) log2(1 + SNR_n) with frozen equal split
};

struct ScaOptions {
    int max_outer_iterations = 50;
    double outer_tolerance = 1e-6;  // relative change of the true objective
    int max_inner_iterations = 200;
    double inner_tolerance = 1e-11;  // stationarity the Newton loop aims for
    double certificate_tolerance = 1e-6;  // stationarity every subproblem must certify
};

struct ScaState {
    int iterate_index = 0;
    double y1 = 0.0;
    double z1 = 0.0;
    double y2 = 0.0;  // port B, fixed for the whole run
    double z2 = 0.0;
    std::vector<double> q;
    std::vector<double> u;
    double surrogate_value = 0.0;
    double true_objective = 0.0;
    double stationarity = 0.0;  // certificate of the subproblem that produced this state
    int inner_iterations = 0;

    PortPlacement placement() const { return {y1, z1, y2, z2}; }
};

enum class ScaTermination { converged, max_iterations, infeasible_start };

inline const char* to_string(ScaTermination t) {
    switch (t) {
        case ScaTermination::converged: return "converged";
        case ScaTermination::max_iterations: return "max-iterations";
        case ScaTermination::infeasible_start: return "infeasible-start";
    }
    return "unknown";
}

struct ScaTrace {
    std::vector<ScaState> states;
    ScaTermination termination = ScaTermination::converged;

    int outer_iterations() const { return states.empty() ? 0 : static_cast<int>(states.size()) - 1; }
};

// User k's rate b_k* c_k with every other user pinned to its rate floor.
// Negative when the floors alone exceed the budget.
inline double true_objective(const Scenario& s, std::size_t k, const PortPlacement& p) {
    double pinned = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n)
        if (n != k) pinned += s.users[n].min_rate_bps / spectral_efficiency(s, n, p);
    return (s.total_bandwidth_hz - pinned) * spectral_efficiency(s, k, p);
}

inline double equal_bandwidth_objective(const Scenario& s, const PortPlacement& p) {
    const double share = s.total_bandwidth_hz / static_cast<double>(s.size());
    double total = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) total += share * spectral_efficiency(s, n, p);
    return total;
}

inline double location_objective(const Scenario& s, std::size_t k, const PortPlacement& p, ScaObjective mode) {
    return mode == ScaObjective::best_user_rate ? true_objective(s, k, p) : equal_bandwidth_objective(s, p);
}

// Tangent minorant of B q_k^2 - sum_{n != k} (R_n / q_n) q_k^2 at expansion.q.
inline double surrogate_objective(const ScaState& expansion, std::span<const double> q, double total_bandwidth,
                                  std::span<const double> min_rates, std::size_t k) {
    double pinned = 0.0;
    for (std::size_t n = 0; n < q.size(); ++n) {
        if (n == k) continue;
        if (!(q[n] > 0.0)) throw ValidationError("domain violation");
        pinned += min_rates[n] / q[n];
    }
    const double qt = expansion.q[k];
    return total_bandwidth * qt * qt + 2.0 * total_bandwidth * qt * (q[k] - qt) - pinned * q[k] * q[k];
}

// sigma^2 / (p_n rho_0) * L_n^alpha, i.e. 1 / SNR_n.
inline double inverse_snr(const Scenario& s, std::size_t n, const PortPlacement& p) {
    const auto& user = s.users[n];
    return s.noise_power_w / (user.tx_power_w * s.ref_gain) * std::pow(effective_length(s, n, p), s.path_loss_exp);
}

// Residual of the linearized SNR constraint; feasible iff <= 0.
inline double linearized_snr_constraint(const ScaState& expansion, const Scenario& s, std::size_t n, double y1,
                                        double z1, double u_n) {
    const double ut = expansion.u[n];
    if (!(ut > 0.0)) throw ValidationError("invalid expansion point");
    const double lhs = inverse_snr(s, n, {y1, z1, expansion.y2, expansion.z2});
    return lhs - (1.0 / ut - (u_n - ut) / (ut * ut));
}

// Residual of the exact constraint 1/SNR_n <= 1/u_n; feasible iff <= 0.
inline double exact_snr_constraint(const Scenario& s, std::size_t n, const PortPlacement& p, double u_n) {
    return inverse_snr(s, n, p) - 1.0 / u_n;
}

// Hessian of q_k^2 / q_n is (2 / q_n^3) [q_n, -q_k]^T [q_n, -q_k]; checks that
// both eigenvalues are >= -1e-12.
inline bool hessian_psd_check(double q_k, double q_n) {
    if (!(q_n > 0.0)) throw ValidationError("q_n must be positive");
    const double a = 2.0 / q_n;                        // d2/dq_k2
    const double b = -2.0 * q_k / (q_n * q_n);         // d2/dq_k dq_n
    const double c = 2.0 * q_k * q_k / (q_n * q_n * q_n);  // d2/dq_n2
    const double half_trace = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    const double lambda_max = half_trace + radius;
    // det / lambda_max avoids cancellation in half_trace - radius.
    const double lambda_min = lambda_max > 0.0 ? (a * c - b * b) / lambda_max : half_trace - radius;
    return lambda_min >= -1e-12 && lambda_max >= -1e-12;
}

namespace detail {

constexpr double kLn2 = std::numbers::ln2;

// The reduced subproblem: concave in (y1, z1) after maximizing out q and u.
class ReducedSubproblem {
public:
    struct Eval {
        bool feasible = false;
        double value = -std::numeric_limits<double>::infinity();
        std::array<double, 2> grad{0.0, 0.0};
    };

    ReducedSubproblem(const Scenario& s, const ScaState& expansion, std::size_t k, ScaObjective mode)
        : s_(s), x_(expansion), k_(k), mode_(mode), n_(s.size()), ubar_(n_), dubar_(n_) {
        d3_ = dist_port_b_to_bs(s, expansion.y2, expansion.z2);
        kappa_.resize(n_);
        for (std::size_t n = 0; n < n_; ++n)
            kappa_[n] = s.noise_power_w / (s.users[n].tx_power_w * s.ref_gain);
    }

    Eval evaluate(double y1, double z1) {
        Eval e;
        if (!saturate(y1, z1)) return e;
        const double B = s_.total_bandwidth_hz;
        if (mode_ == ScaObjective::equal_bandwidth) {
            const double share = B / static_cast<double>(n_);
            e.value = 0.0;
            for (std::size_t n = 0; n < n_; ++n) {
                e.value += share * std::log2(1.0 + ubar_[n]);
                const double w = share / ((1.0 + ubar_[n]) * kLn2);
                e.grad[0] += w * dubar_[n][0];
                e.grad[1] += w * dubar_[n][1];
            }
            e.feasible = true;
            return e;
        }

        double pinned = 0.0;
        std::array<double, 2> dpinned{0.0, 0.0};
        for (std::size_t n = 0; n < n_; ++n) {
            if (n == k_) continue;
            const double qn = std::log2(1.0 + ubar_[n]);
            if (!(qn > 0.0)) return e;
            const double w = s_.users[n].min_rate_bps / (qn * qn) / ((1.0 + ubar_[n]) * kLn2);
            pinned += s_.users[n].min_rate_bps / qn;
            dpinned[0] -= w * dubar_[n][0];
            dpinned[1] -= w * dubar_[n][1];
        }
        if (pinned > B) return e;
        const double ck = std::log2(1.0 + ubar_[k_]);
        if (!(ck > 0.0)) return e;
        const double cap = std::sqrt(ck);
        const std::array<double, 2> dck{dubar_[k_][0] / ((1.0 + ubar_[k_]) * kLn2),
                                        dubar_[k_][1] / ((1.0 + ubar_[k_]) * kLn2)};
        const double qt = x_.q[k_];
        const double vertex = pinned > 0.0 ? B * qt / pinned : std::numeric_limits<double>::infinity();
        if (vertex < cap) {
            e.value = -B * qt * qt + (B * qt) * (B * qt) / pinned;
            const double w = -(B * qt) * (B * qt) / (pinned * pinned);
            e.grad = {w * dpinned[0], w * dpinned[1]};
        } else {
            e.value = -B * qt * qt + 2.0 * B * qt * cap - pinned * ck;
            const double w = (B * qt - pinned * cap) / cap;
            e.grad = {w * dck[0] - ck * dpinned[0], w * dck[1] - ck * dpinned[1]};
        }
        e.feasible = true;
        return e;
    }

    // Optimal slacks at (y1, z1); only meaningful where evaluate() is feasible.
    void slacks(double y1, double z1, std::vector<double>& q, std::vector<double>& u) {
        saturate(y1, z1);
        q.assign(n_, 0.0);
        u.assign(ubar_.begin(), ubar_.end());
        for (auto& v : u) v = std::max(v, 0.0);
        for (std::size_t n = 0; n < n_; ++n) q[n] = std::log2(1.0 + u[n]);
        if (mode_ == ScaObjective::equal_bandwidth) return;
        double pinned = 0.0;
        for (std::size_t n = 0; n < n_; ++n)
            if (n != k_) pinned += s_.users[n].min_rate_bps / q[n];
        const double cap = std::sqrt(q[k_]);
        const double vertex = pinned > 0.0 ? s_.total_bandwidth_hz * x_.q[k_] / pinned
                                           : std::numeric_limits<double>::infinity();
        q[k_] = std::min(vertex, cap);
    }

private:
    // Fills ubar_ (largest u_n the linearized constraint allows) and its gradient.
    bool saturate(double y1, double z1) {
        const double alpha = s_.path_loss_exp;
        const double A = s_.medium_factor;
        const double d2 = dist_port_a_to_port_b(s_.wall_width_m, y1, z1, x_.y2, x_.z2);
        const std::array<double, 2> dd2{(y1 - x_.y2) / d2, (z1 - x_.z2) / d2};
        bool ok = true;
        for (std::size_t n = 0; n < n_; ++n) {
            const auto& user = s_.users[n];
            const double d1 = dist_user_to_port_a(user, y1, z1);
            std::array<double, 2> dd1{0.0, 0.0};
            if (d1 > 0.0) dd1 = {(y1 - user.position.y) / d1, z1 / d1};
            const double len = d1 + d2 / A + d3_;
            const double g = kappa_[n] * std::pow(len, alpha);
            const double dg = kappa_[n] * alpha * std::pow(len, alpha - 1.0);
            const double ut = x_.u[n];
            ubar_[n] = 2.0 * ut - ut * ut * g;
            dubar_[n] = {-ut * ut * dg * (dd1[0] + dd2[0] / A), -ut * ut * dg * (dd1[1] + dd2[1] / A)};
            if (ubar_[n] < 0.0) ok = false;
        }
        return ok;
    }

    const Scenario& s_;
    const ScaState& x_;
    std::size_t k_;
    ScaObjective mode_;
    std::size_t n_;
    double d3_ = 0.0;
    std::vector<double> kappa_;
    std::vector<double> ubar_;
    std::vector<std::array<double, 2>> dubar_;
};

struct BoxResult {
    double y1 = 0.0;
    double z1 = 0.0;
    double value = 0.0;
    double stationarity = 0.0;
    int iterations = 0;
};

inline double project(double v, const Interval& iv) { return std::min(std::max(v, iv.lo), iv.hi); }

// || y - P(y + grad / (1 + |value|)) ||: a scale-free projected-gradient norm.
inline double projected_gradient_norm(double y1, double z1, const std::array<double, 2>& g, double value,
                                      const Interval& yb, const Interval& zb) {
    const double scale = 1.0 + std::abs(value);
    return std::hypot(project(y1 + g[0] / scale, yb) - y1, project(z1 + g[1] / scale, zb) - z1);
}

// Feasible-start projected Newton ascent over the box.
template <class Model>
BoxResult maximize_over_box(Model& model, double y1, double z1, const Interval& yb, const Interval& zb,
                            const ScaOptions& opt) {
    auto cur = model.evaluate(y1, z1);
    if (!cur.feasible) throw SolverError("subproblem: expansion point is infeasible");
    const double diameter = std::max(std::hypot(yb.length(), zb.length()), 1e-9);
    const std::array<const Interval*, 2> box{&yb, &zb};

    BoxResult r{y1, z1, cur.value, 0.0, 0};
    for (int it = 0; it < opt.max_inner_iterations; ++it) {
        r.iterations = it;
        r.stationarity = projected_gradient_norm(r.y1, r.z1, cur.grad, cur.value, yb, zb);
        if (r.stationarity <= opt.inner_tolerance) return r;

        const std::array<double, 2> y{r.y1, r.z1};
        std::array<bool, 2> free{};
        for (int i = 0; i < 2; ++i) {
            const auto& iv = *box[i];
            free[i] = iv.lo < iv.hi && !(y[i] <= iv.lo && cur.grad[i] < 0.0) && !(y[i] >= iv.hi && cur.grad[i] > 0.0);
        }

        // Finite-difference Hessian of the analytic gradient.
        std::array<std::array<double, 2>, 2> hess{};
        bool have_hessian = true;
        const double h = 1e-5 * std::max(1.0, diameter);
        for (int j = 0; j < 2 && have_hessian; ++j) {
            auto yp = y;
            auto ym = y;
            yp[j] += h;
            ym[j] -= h;
            const auto ep = model.evaluate(yp[0], yp[1]);
            const auto em = model.evaluate(ym[0], ym[1]);
            if (!ep.feasible || !em.feasible) {
                have_hessian = false;
                break;
            }
            for (int i = 0; i < 2; ++i) hess[i][j] = (ep.grad[i] - em.grad[i]) / (2.0 * h);
        }
        const double off = 0.5 * (hess[0][1] + hess[1][0]);
        hess[0][1] = hess[1][0] = off;

        std::array<double, 2> newton{0.0, 0.0};
        bool newton_ok = false;
        if (have_hessian) {
            // Solve (-H_ff) d = g_f on the free coordinates.
            const double a = -hess[0][0];
            const double c = -hess[1][1];
            const double b = -off;
            if (free[0] && free[1]) {
                const double det = a * c - b * b;
                if (a > 0.0 && c > 0.0 && det > 0.0) {
                    newton = {(c * cur.grad[0] - b * cur.grad[1]) / det, (a * cur.grad[1] - b * cur.grad[0]) / det};
                    newton_ok = true;
                }
            } else if (free[0] && a > 0.0) {
                newton = {cur.grad[0] / a, 0.0};
                newton_ok = true;
            } else if (free[1] && c > 0.0) {
                newton = {0.0, cur.grad[1] / c};
                newton_ok = true;
            }
        }
        const double gnorm = std::hypot(free[0] ? cur.grad[0] : 0.0, free[1] ? cur.grad[1] : 0.0);
        std::array<double, 2> steepest{0.0, 0.0};
        if (gnorm > 0.0) {
            steepest = {free[0] ? cur.grad[0] / gnorm * diameter : 0.0, free[1] ? cur.grad[1] / gnorm * diameter : 0.0};
        }

        bool moved = false;
        for (int attempt = 0; attempt < 2 && !moved; ++attempt) {
            const auto& dir = attempt == 0 ? newton : steepest;
            if (attempt == 0 && !newton_ok) continue;
            if (dir[0] == 0.0 && dir[1] == 0.0) continue;
            double t = 1.0;
            for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
                const double ny = project(y[0] + t * dir[0], yb);
                const double nz = project(y[1] + t * dir[1], zb);
                if (ny == y[0] && nz == y[1]) break;
                const auto trial = model.evaluate(ny, nz);
                if (!trial.feasible) continue;
                const double predicted = cur.grad[0] * (ny - y[0]) + cur.grad[1] * (nz - y[1]);
                if (trial.value >= cur.value + 1e-4 * predicted && trial.value > cur.value) {
                    r.y1 = ny;
                    r.z1 = nz;
                    cur = trial;
                    moved = true;
                    break;
                }
            }
        }
        r.value = cur.value;
        if (!moved) break;  // no representable ascent left
    }
    r.stationarity = projected_gradient_norm(r.y1, r.z1, cur.grad, cur.value, yb, zb);
    if (r.stationarity > opt.certificate_tolerance) {
        throw SolverError("subproblem: stationarity " + std::to_string(r.stationarity) + " above certificate " +
                          std::to_string(opt.certificate_tolerance) + " after " + std::to_string(r.iterations) +
                          " inner iterations at (" + std::to_string(r.y1) + ", " + std::to_string(r.z1) + ")");
    }
    return r;
}

}  // namespace detail

// Expansion point with tight slacks: u_n = SNR_n, q_n = log2(1 + u_n), and
// q_k = sqrt(log2(1 + u_k)) in the proposed scheme.
inline ScaState tight_state(const Scenario& s, std::size_t k, const PortPlacement& p, ScaObjective mode,
                            int iterate_index = 0) {
    ScaState st;
    st.iterate_index = iterate_index;
    st.y1 = p.y1;
    st.z1 = p.z1;
    st.y2 = p.y2;
    st.z2 = p.z2;
    st.u = snrs(s, p);
    st.q.resize(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) st.q[n] = std::log2(1.0 + st.u[n]);
    if (mode == ScaObjective::best_user_rate) st.q[k] = std::sqrt(st.q[k]);
    st.true_objective = location_objective(s, k, p, mode);
    st.surrogate_value = st.true_objective;
    return st;
}

// One convex subproblem expanded at `expansion`. Returns the maximizer with its
// optimal slacks; surrogate_value is the subproblem optimum.
inline ScaState solve_subproblem(const ScaState& expansion, const Scenario& s, std::size_t k,
                                 ScaObjective mode = ScaObjective::best_user_rate, const ScaOptions& opt = {}) {
    detail::ReducedSubproblem model(s, expansion, k, mode);
    const auto r = detail::maximize_over_box(model, expansion.y1, expansion.z1, s.y_bounds, s.z_bounds, opt);
    ScaState next;
    next.iterate_index = expansion.iterate_index + 1;
    next.y1 = r.y1;
    next.z1 = r.z1;
    next.y2 = expansion.y2;
    next.z2 = expansion.z2;
    model.slacks(r.y1, r.z1, next.q, next.u);
    next.surrogate_value = r.value;
    next.true_objective = location_objective(s, k, next.placement(), mode);
    next.stationarity = r.stationarity;
    next.inner_iterations = r.iterations;
    return next;
}

// Outer SCA loop from `init`, re-expanding at each new point until the true
// objective stalls or the iteration cap is hit.
inline std::pair<PortPlacement, ScaTrace> sca_optimize_port_a(const Scenario& s, std::size_t k, double y2, double z2,
                                                               PortLocation init,
                                                               ScaObjective mode = ScaObjective::best_user_rate,
                                                               const ScaOptions& opt = {}) {
    if (!s.y_bounds.contains(init.y) || !s.z_bounds.contains(init.z))
        throw ValidationError("initial port-A location outside the feasible rectangle");
    if (k >= s.size()) throw ValidationError("user index out of range");

    ScaTrace trace;
    ScaState expansion = tight_state(s, k, {init.y, init.z, y2, z2}, mode);
    trace.states.push_back(expansion);
    if (mode == ScaObjective::best_user_rate && expansion.true_objective < 0.0) {
        trace.termination = ScaTermination::infeasible_start;
        return {expansion.placement(), std::move(trace)};
    }

    trace.termination = ScaTermination::max_iterations;
    for (int t = 0; t < opt.max_outer_iterations; ++t) {
        ScaState next = solve_subproblem(expansion, s, k, mode, opt);
        const double prev = trace.states.back().true_objective;
        const double change = std::abs(next.true_objective - prev);
        trace.states.push_back(next);
        if (change <= opt.outer_tolerance * (1.0 + std::abs(next.true_objective))) {
            trace.termination = ScaTermination::converged;
            break;
        }
        expansion = tight_state(s, k, next.placement(), mode, next.iterate_index);
    }
    return {trace.states.back().placement(), std::move(trace)};
}

// 3x3 grid over the rectangle, then each user's (u_n2, 0) projected onto it.
// Exact duplicates are dropped, first occurrence wins.
inline std::vector<PortLocation> multi_start_points(const Scenario& s) {
    std::vector<PortLocation> pts;
    auto push = [&](PortLocation p) {
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    };
    const std::array<double, 3> ys{s.y_bounds.lo, s.y_bounds.center(), s.y_bounds.hi};
    const std::array<double, 3> zs{s.z_bounds.lo, s.z_bounds.center(), s.z_bounds.hi};
    for (double y : ys)
        for (double z : zs) push({y, z});
    for (const auto& u : s.users)
        push({clip(u.position.y, s.y_bounds.lo, s.y_bounds.hi), clip(0.0, s.z_bounds.lo, s.z_bounds.hi)});
    return pts;
}

}  // namespace far
