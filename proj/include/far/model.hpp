#pragma once

// Geometry and deterministic line-of-sight channel of the fluid-antenna-relay
// (FAR) uplink: users -> port A (x = 0) -> through the wall -> port B (x = X) -> BS.
// Everything here is SI: meters, Hz, Watts, bits/s.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "far/error.hpp"

namespace far {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2&) const = default;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool operator==(const Point3&) const = default;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double center() const { return 0.5 * (lo + hi); }
    double length() const { return hi - lo; }
    bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
    bool operator==(const Interval&) const = default;
};

struct UserTerminal {
    Point2 position;          // (u_n1, u_n2); height is zero
    double tx_power_w = 0.0;  // p_n
    double min_rate_bps = 0.0;  // R_n
    bool operator==(const UserTerminal&) const = default;
};

// Radio parameters applied when a scenario omits them.
struct RadioDefaults {
    static constexpr double path_loss_exp = 2.0;
    static constexpr double ref_gain = 1e-4;        // -40 dB at 1 m
    static constexpr double noise_power_w = 1e-12;  // -90 dBm
    static constexpr double medium_factor = 3.0;
    static constexpr double min_rate_bps = 1e5;
};

struct Scenario {
    std::vector<UserTerminal> users;
    Point3 bs_position;  // (s1, s2, H)
    double wall_width_m = 0.0;  // X
    Interval y_bounds;
    Interval z_bounds;
    double total_bandwidth_hz = 0.0;  // B
    double noise_power_w = RadioDefaults::noise_power_w;  // sigma^2
    double ref_gain = RadioDefaults::ref_gain;  // rho_0
    double path_loss_exp = RadioDefaults::path_loss_exp;  // alpha
    double medium_factor = RadioDefaults::medium_factor;  // A
    // Provenance notes: which defaults were filled in, how the scenario was generated.
    std::vector<std::string> provenance;

    std::size_t size() const { return users.size(); }
    bool operator==(const Scenario&) const = default;
};

// Port A sits at (0, y1, z1), port B at (X, y2, z2).
struct PortPlacement {
    double y1 = 0.0;
    double z1 = 0.0;
    double y2 = 0.0;
    double z2 = 0.0;
    bool operator==(const PortPlacement&) const = default;
};

inline double dist_user_to_port_a(const UserTerminal& user, double y1, double z1) {
    return std::hypot(user.position.x, y1 - user.position.y, z1);
}

inline double dist_port_a_to_port_b(double wall_width, double y1, double z1, double y2, double z2) {
    return std::hypot(wall_width, y1 - y2, z1 - z2);
}

inline double dist_port_b_to_bs(const Scenario& s, double y2, double z2) {
    return std::hypot(s.wall_width_m - s.bs_position.x, y2 - s.bs_position.y, z2 - s.bs_position.z);
}

// d_n1 + d2/A + d3: the path length the channel gain decays with.
inline double effective_length(const Scenario& s, std::size_t n, const PortPlacement& p) {
    return dist_user_to_port_a(s.users[n], p.y1, p.z1) +
           dist_port_a_to_port_b(s.wall_width_m, p.y1, p.z1, p.y2, p.z2) / s.medium_factor +
           dist_port_b_to_bs(s, p.y2, p.z2);
}

inline double gain_at_length(double ref_gain, double path_loss_exp, double length) {
    return ref_gain * std::pow(length, -path_loss_exp);
}

inline double channel_gain(const Scenario& s, std::size_t n, const PortPlacement& p) {
    return gain_at_length(s.ref_gain, s.path_loss_exp, effective_length(s, n, p));
}

inline double snr(const Scenario& s, std::size_t n, const PortPlacement& p) {
    return s.users[n].tx_power_w * channel_gain(s, n, p) / s.noise_power_w;
}

// log2(1 + SNR) in bits/s/Hz.
inline double spectral_efficiency(const Scenario& s, std::size_t n, const PortPlacement& p) {
    return std::log2(1.0 + snr(s, n, p));
}

inline double achievable_rate(const Scenario& s, std::size_t n, const PortPlacement& p, double bandwidth_hz) {
    return bandwidth_hz * spectral_efficiency(s, n, p);
}

inline std::vector<double> channel_gains(const Scenario& s, const PortPlacement& p) {
    std::vector<double> out(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) out[n] = channel_gain(s, n, p);
    return out;
}

inline std::vector<double> snrs(const Scenario& s, const PortPlacement& p) {
    std::vector<double> out(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) out[n] = snr(s, n, p);
    return out;
}

inline bool within_bounds(const Scenario& s, const PortPlacement& p, double tol = 0.0) {
    return s.y_bounds.contains(p.y1, tol) && s.y_bounds.contains(p.y2, tol) &&
           s.z_bounds.contains(p.z1, tol) && s.z_bounds.contains(p.z2, tol);
}

inline PortPlacement center_placement(const Scenario& s) {
    const double yc = s.y_bounds.center();
    const double zc = s.z_bounds.center();
    return {yc, zc, yc, zc};
}

namespace detail {
inline void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}
inline bool finite(double v) { return std::isfinite(v); }
}  // namespace detail

// Throws ValidationError naming the first offending field.
inline void validate(const Scenario& s) {
    using detail::finite;
    using detail::require;
    require(!s.users.empty(), "users must contain at least one user");
    require(finite(s.total_bandwidth_hz) && s.total_bandwidth_hz > 0, "total_bandwidth must be positive");
    require(finite(s.noise_power_w) && s.noise_power_w > 0, "noise_power must be positive");
    require(finite(s.ref_gain) && s.ref_gain > 0, "ref_gain must be positive");
    require(finite(s.path_loss_exp) && s.path_loss_exp >= 1, "path_loss_exp must be at least 1");
    require(finite(s.medium_factor) && s.medium_factor > 1, "medium_factor must exceed 1");
    require(finite(s.wall_width_m) && s.wall_width_m > 0, "wall_width must be positive");
    require(finite(s.y_bounds.lo) && finite(s.y_bounds.hi) && s.y_bounds.lo <= s.y_bounds.hi,
            "y_bounds must satisfy lo <= hi");
    require(finite(s.z_bounds.lo) && finite(s.z_bounds.hi) && s.z_bounds.lo <= s.z_bounds.hi,
            "z_bounds must satisfy lo <= hi");
    require(finite(s.bs_position.x) && finite(s.bs_position.y) && finite(s.bs_position.z),
            "bs_position must be finite");
    for (std::size_t n = 0; n < s.users.size(); ++n) {
        const auto& u = s.users[n];
        const std::string tag = "users[" + std::to_string(n) + "].";
        require(finite(u.position.x) && finite(u.position.y), tag + "position must be finite");
        require(finite(u.tx_power_w) && u.tx_power_w > 0, tag + "tx_power must be positive");
        require(finite(u.min_rate_bps) && u.min_rate_bps > 0, tag + "min_rate must be positive");
    }
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace far
