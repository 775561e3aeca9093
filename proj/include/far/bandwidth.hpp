#pragma once

// Optimal bandwidth split at a fixed port placement. Every user except the
// strongest one gets exactly the bandwidth that meets its rate floor; the
// strongest user absorbs whatever is left of the budget.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "far/error.hpp"
#include "far/model.hpp"
#include "far/simplex.hpp"

namespace far {

struct BandwidthAllocation {
    std::vector<double> bandwidths_hz;
    std::size_t best_user = 0;  // k, 0-based
    double sum_rate_bps = 0.0;
    bool feasible = false;
    bool operator==(const BandwidthAllocation&) const = default;
};

// Smallest index attaining the maximum.
inline std::size_t best_user_index(std::span<const double> gains) {
    if (gains.empty()) throw ValidationError("no users");
    std::size_t k = 0;
    for (std::size_t n = 1; n < gains.size(); ++n)
        if (gains[n] > gains[k]) k = n;
    return k;
}

namespace detail {

struct ClosedFormResult {
    double sum_rate_bps = 0.0;
    bool feasible = false;
};

// Writes b_n into bandwidths. Shared by allocate() and the grid oracle so both
// produce bit-identical sums.
inline ClosedFormResult closed_form_into(double total_bandwidth, std::span<const double> efficiency,
                                         std::span<const double> min_rates, std::size_t k,
                                         std::span<double> bandwidths) {
    double pinned = 0.0;
    for (std::size_t n = 0; n < efficiency.size(); ++n) {
        if (n == k) continue;
        bandwidths[n] = min_rates[n] / efficiency[n];
        pinned += bandwidths[n];
    }
    bandwidths[k] = total_bandwidth - pinned;
    ClosedFormResult r;
    // The surplus user must also reach its own floor.
    r.feasible = bandwidths[k] >= 0.0 && bandwidths[k] * efficiency[k] >= min_rates[k];
    for (std::size_t n = 0; n < efficiency.size(); ++n) r.sum_rate_bps += bandwidths[n] * efficiency[n];
    return r;
}

}  // namespace detail

// Closed form at explicit spectral efficiencies; k is the index that absorbs
// the surplus.
inline BandwidthAllocation allocate_from_efficiencies(double total_bandwidth, std::span<const double> efficiency,
                                                      std::span<const double> min_rates, std::size_t k) {
    BandwidthAllocation a;
    a.bandwidths_hz.assign(efficiency.size(), 0.0);
    a.best_user = k;
    const auto r = detail::closed_form_into(total_bandwidth, efficiency, min_rates, k, a.bandwidths_hz);
    a.sum_rate_bps = r.sum_rate_bps;
    a.feasible = r.feasible;
    return a;
}

inline std::vector<double> min_rates(const Scenario& s) {
    std::vector<double> r(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) r[n] = s.users[n].min_rate_bps;
    return r;
}

// k is the user with the largest received SNR p_n h_n / sigma^2; with equal
// transmit powers this is the user with the largest channel gain.
inline BandwidthAllocation allocate(const Scenario& s, const PortPlacement& placement) {
    const auto snr_values = snrs(s, placement);
    std::vector<double> eff(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) eff[n] = std::log2(1.0 + snr_values[n]);
    return allocate_from_efficiencies(s.total_bandwidth_hz, eff, min_rates(s), best_user_index(snr_values));
}

// Per-user rates b_n * log2(1 + SNR_n).
inline std::vector<double> user_rates(const Scenario& s, const PortPlacement& placement,
                                      std::span<const double> bandwidths) {
    std::vector<double> r(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) r[n] = achievable_rate(s, n, placement, bandwidths[n]);
    return r;
}

// Generic LP solve of the bandwidth problem at fixed efficiencies:
//   max sum c_n b_n  s.t.  c_n b_n >= R_n,  sum b_n <= B,  b_n >= 0.
inline BandwidthAllocation lp_oracle_from_efficiencies(double total_bandwidth, std::span<const double> efficiency,
                                                       std::span<const double> min_rates) {
    const std::size_t n_users = efficiency.size();
    if (n_users == 0) throw ValidationError("no users");
    if (n_users > 10) throw ValidationError("lp_oracle supports at most 10 users");
    std::vector<std::vector<double>> a(n_users + 1, std::vector<double>(n_users, 0.0));
    std::vector<double> b(n_users + 1, 0.0);
    for (std::size_t n = 0; n < n_users; ++n) {
        a[n][n] = -efficiency[n];
        b[n] = -min_rates[n];
        a[n_users][n] = 1.0;
    }
    b[n_users] = total_bandwidth;
    const auto r = lp::maximize(efficiency, a, b);
    if (r.status == lp::Status::unbounded) throw SolverError("lp_oracle: unbounded bandwidth problem");

    BandwidthAllocation out;
    out.best_user = best_user_index(efficiency);
    if (r.status == lp::Status::infeasible) {
        out.bandwidths_hz.assign(n_users, 0.0);
        out.feasible = false;
        return out;
    }
    out.bandwidths_hz = r.x;
    out.feasible = true;
    for (std::size_t n = 0; n < n_users; ++n) out.sum_rate_bps += r.x[n] * efficiency[n];
    return out;
}

inline BandwidthAllocation lp_oracle(const Scenario& s, std::span<const double> gains) {
    std::vector<double> eff(s.size());
    std::vector<double> snr_values(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) {
        snr_values[n] = s.users[n].tx_power_w * gains[n] / s.noise_power_w;
        eff[n] = std::log2(1.0 + snr_values[n]);
    }
    auto out = lp_oracle_from_efficiencies(s.total_bandwidth_hz, eff, min_rates(s));
    out.best_user = best_user_index(snr_values);
    return out;
}

}  // namespace far
