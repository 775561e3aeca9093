#pragma once

// Dense two-phase tableau simplex with Bland's rule, for desk-scale LPs
//
//   maximize c^T x  subject to  A x <= b,  x >= 0.
//
// Used as an independent check of closed-form bandwidth allocations; it knows
// nothing about the structure of those problems.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "far/error.hpp"

namespace far::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
    Status status = Status::infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

namespace detail {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t r, std::size_t e, std::vector<double>& reduced) {
        const double p = at(r, e);
        for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            const double f = at(i, e);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
            at(i, e) = 0.0;
        }
        const double f = reduced[e];
        if (f != 0.0) {
            for (std::size_t j = 0; j <= cols_; ++j) reduced[j] -= f * at(r, j);
            reduced[e] = 0.0;
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

inline std::vector<double> reduced_costs(const Tableau& t, std::span<const double> cost,
                                         std::span<const std::size_t> basis) {
    std::vector<double> d(t.cols() + 1, 0.0);
    for (std::size_t j = 0; j < t.cols(); ++j) d[j] = cost[j];
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const double cb = cost[basis[i]];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= t.cols(); ++j) d[j] -= cb * t.at(i, j);
    }
    return d;
}

// Returns false when unbounded.
inline bool run(Tableau& t, std::vector<double>& d, std::vector<std::size_t>& basis,
                const std::vector<bool>& allowed, double eps) {
    const std::size_t max_pivots = 50 * (t.rows() + t.cols()) + 1000;
    for (std::size_t it = 0; it < max_pivots; ++it) {
        std::size_t enter = t.cols();
        for (std::size_t j = 0; j < t.cols(); ++j) {
            if (allowed[j] && d[j] > eps) {
                enter = j;
                break;
            }
        }
        if (enter == t.cols()) return true;
        std::size_t leave = t.rows();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.rows(); ++i) {
            const double a = t.at(i, enter);
            if (a <= eps) continue;
            const double ratio = t.rhs(i) / a;
            if (ratio < best || (ratio == best && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == t.rows()) return false;
        t.pivot(leave, enter, d);
        basis[leave] = enter;
    }
    throw SolverError("simplex: pivot limit exceeded (cycling or degenerate input)");
}

}  // namespace detail

// a is row-major, a.size() == b.size() rows of c.size() entries each.
inline Result maximize(std::span<const double> c, const std::vector<std::vector<double>>& a,
                       std::span<const double> b, double eps = 1e-12) {
    const std::size_t n = c.size();
    const std::size_t m = b.size();
    if (a.size() != m) throw ValidationError("simplex: constraint matrix and rhs disagree in size");
    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i].size() != n) throw ValidationError("simplex: ragged constraint matrix");
        if (b[i] < 0) ++n_art;
    }

    const std::size_t cols = n + m + n_art;
    detail::Tableau t(m, cols);
    std::vector<std::size_t> basis(m);
    double b_scale = 1.0;
    std::size_t art = n + m;
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = b[i] < 0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * a[i][j];
        t.at(i, n + i) = sign;
        t.rhs(i) = sign * b[i];
        b_scale = std::max(b_scale, std::abs(b[i]));
        if (sign < 0) {
            t.at(i, art) = 1.0;
            basis[i] = art++;
        } else {
            basis[i] = n + i;
        }
    }

    std::vector<bool> allowed(cols, true);
    if (n_art > 0) {
        std::vector<double> phase1(cols, 0.0);
        for (std::size_t j = n + m; j < cols; ++j) phase1[j] = -1.0;
        auto d = detail::reduced_costs(t, phase1, basis);
        detail::run(t, d, basis, allowed, eps);
        double infeas = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] >= n + m) infeas += t.rhs(i);
        if (infeas > 1e-9 * b_scale) return {Status::infeasible, {}, 0.0};
        // Drive zero-valued artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n + m) continue;
            for (std::size_t j = 0; j < n + m; ++j) {
                if (std::abs(t.at(i, j)) > eps) {
                    t.pivot(i, j, d);
                    basis[i] = j;
                    break;
                }
            }
        }
        for (std::size_t j = n + m; j < cols; ++j) allowed[j] = false;
    }

    std::vector<double> phase2(cols, 0.0);
    std::copy(c.begin(), c.end(), phase2.begin());
    auto d = detail::reduced_costs(t, phase2, basis);
    if (!detail::run(t, d, basis, allowed, eps)) return {Status::unbounded, {}, 0.0};

    Result r;
    r.status = Status::optimal;
    r.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) r.x[basis[i]] = t.rhs(i);
    for (std::size_t j = 0; j < n; ++j) r.objective += c[j] * r.x[j];
    return r;
}

}  // namespace far::lp
