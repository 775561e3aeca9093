#pragma once

// Transmit-power sweeps: every (power, scheme) cell is one solve, written as a
// row of a comma-separated table.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "far/error.hpp"
#include "far/model.hpp"
#include "far/orchestrator.hpp"
#include "far/scenario_io.hpp"

namespace far {

struct SweepSpec {
    std::vector<double> powers_w;  // applied to every user
    std::vector<Scheme> schemes;
};

inline void validate(const SweepSpec& spec) {
    if (spec.powers_w.empty()) throw ValidationError("power list must not be empty");
    for (double p : spec.powers_w)
        if (!(p > 0.0) || !std::isfinite(p)) throw ValidationError("powers must be positive");
    if (spec.schemes.empty()) throw ValidationError("scheme list must not be empty");
}

// -10 dBm to 30 dBm in 5 dB steps.
inline std::vector<double> default_sweep_powers_w() {
    std::vector<double> out;
    for (int dbm = -10; dbm <= 30; dbm += 5) out.push_back(dbm_to_watts(dbm));
    return out;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline double parse_number(const std::string& text, std::string_view what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ValidationError("bad number '" + text + "' in " + std::string(what));
    return v;
}

enum class PowerUnit { dbm, watt, milliwatt };

inline PowerUnit strip_unit(std::string& token) {
    if (ends_with(token, "dBm")) {
        token.resize(token.size() - 3);
        return PowerUnit::dbm;
    }
    if (ends_with(token, "mW")) {
        token.resize(token.size() - 2);
        return PowerUnit::milliwatt;
    }
    if (ends_with(token, "W")) {
        token.resize(token.size() - 1);
        return PowerUnit::watt;
    }
    throw ValidationError("power '" + token + "' needs a unit suffix (dBm, W or mW)");
}

inline double to_watts(double v, PowerUnit unit) {
    switch (unit) {
        case PowerUnit::dbm: return dbm_to_watts(v);
        case PowerUnit::milliwatt: return v * 1e-3;
        case PowerUnit::watt: return v;
    }
    return v;
}

inline std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

// Either a comma list of tagged values ("-10dBm,0dBm,0.5W") or an inclusive
// range start:step:stop with one trailing unit ("-10:5:30dBm").
inline std::vector<double> parse_powers(std::string_view text) {
    std::string spec = detail::trim(text);
    if (spec.empty()) throw ValidationError("power list must not be empty");
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        const auto unit = detail::strip_unit(spec);
        const auto parts = detail::split(spec, ':');
        if (parts.size() != 3) throw ValidationError("power range must be start:step:stop<unit>");
        const double start = detail::parse_number(parts[0], "power range");
        const double step = detail::parse_number(parts[1], "power range");
        const double stop = detail::parse_number(parts[2], "power range");
        if (!(step > 0.0) || stop < start) throw ValidationError("power range needs step > 0 and stop >= start");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 100000) throw ValidationError("power range has too many values");
        for (long i = 0; i < count; ++i) out.push_back(detail::to_watts(start + static_cast<double>(i) * step, unit));
    } else {
        for (auto token : detail::split(spec, ',')) {
            if (token.empty()) throw ValidationError("empty entry in power list");
            const auto unit = detail::strip_unit(token);
            out.push_back(detail::to_watts(detail::parse_number(token, "power list"), unit));
        }
    }
    for (double p : out)
        if (!(p > 0.0)) throw ValidationError("powers must be positive");
    return out;
}

inline std::vector<Scheme> parse_schemes(std::string_view text) {
    const std::string spec = detail::trim(text);
    if (spec.empty()) throw ValidationError("scheme list must not be empty");
    std::vector<Scheme> out;
    for (const auto& token : detail::split(spec, ',')) out.push_back(parse_scheme(token));
    return out;
}

struct SweepRow {
    double power_w = 0.0;
    Scheme scheme = Scheme::proposed;
    double sum_rate_bps = 0.0;
    bool feasible = false;
    std::size_t chosen_k = 0;  // 0-based; the table prints it 1-based
    PortPlacement placement;
    int iterations = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    // Largest proposed / fixed-location ratio over powers where both are feasible.
    std::optional<double> max_proposed_over_fixed;
    double ratio_power_w = 0.0;
};

// Rows come out in (power, scheme) order.
inline SweepResult run_sweep(const Scenario& scenario, const SweepSpec& spec, const SolverConfig& config = {}) {
    validate(scenario);
    validate(spec);
    SweepResult result;
    for (double p : spec.powers_w) {
        const Scenario s = with_uniform_power(scenario, p);
        std::optional<double> proposed, fixed;
        for (Scheme scheme : spec.schemes) {
            const auto report = run_scheme(s, scheme, config);
            result.rows.push_back({p, scheme, report.sum_rate_bps, report.feasible, report.chosen_k,
                                   report.placement, report.iterations});
            if (report.feasible && scheme == Scheme::proposed) proposed = report.sum_rate_bps;
            if (report.feasible && scheme == Scheme::fixed_location) fixed = report.sum_rate_bps;
        }
        if (proposed && fixed && *fixed > 0.0) {
            const double ratio = *proposed / *fixed;
            if (!result.max_proposed_over_fixed || ratio > *result.max_proposed_over_fixed) {
                result.max_proposed_over_fixed = ratio;
                result.ratio_power_w = p;
            }
        }
    }
    return result;
}

inline constexpr const char* kSweepHeader =
    "power_dbm,power_w,scheme,sum_rate_bps,feasible,chosen_k,y1_m,z1_m,y2_m,z2_m,iterations";

inline std::string summary_line(const SweepResult& r) {
    if (!r.max_proposed_over_fixed) return "max proposed/fixed-location sum-rate ratio: n/a";
    return "max proposed/fixed-location sum-rate ratio: " + detail::fmt12(*r.max_proposed_over_fixed) +
           " at power_dbm=" + detail::fmt12(watts_to_dbm(r.ratio_power_w));
}

// The run configuration goes into '#' comment lines ahead of the header row.
inline std::string format_sweep_table(const Scenario& s, const SweepResult& r, const SolverConfig& config) {
    using detail::fmt12;
    std::ostringstream out;
    out << "# far sweep table v1\n";
    out << "# scenario: users=" << s.size() << " total_bandwidth_hz=" << fmt12(s.total_bandwidth_hz)
        << " wall_width_m=" << fmt12(s.wall_width_m) << " bs_position_m=(" << fmt12(s.bs_position.x) << ' '
        << fmt12(s.bs_position.y) << ' ' << fmt12(s.bs_position.z) << ") y_bounds_m=[" << fmt12(s.y_bounds.lo) << ' '
        << fmt12(s.y_bounds.hi) << "] z_bounds_m=[" << fmt12(s.z_bounds.lo) << ' ' << fmt12(s.z_bounds.hi) << "]\n";
    out << "# radio: path_loss_exp=" << fmt12(s.path_loss_exp) << " ref_gain=" << fmt12(s.ref_gain)
        << " noise_power_w=" << fmt12(s.noise_power_w) << " medium_factor=" << fmt12(s.medium_factor) << "\n";
    for (const auto& note : s.provenance) out << "# provenance: " << note << "\n";
    out << "# solver: sca_max_outer=" << config.sca.max_outer_iterations
        << " sca_outer_tol=" << fmt12(config.sca.outer_tolerance)
        << " subproblem_certificate=" << fmt12(config.sca.certificate_tolerance)
        << " equal_bandwidth_location=" << (config.equal_bandwidth_optimize_location ? "optimized" : "center")
        << " oracle_resolution_m=" << fmt12(config.oracle_resolution_m) << "\n";
    out << "# power applied uniformly to every user; chosen_k is 1-based\n";
    out << kSweepHeader << "\n";
    for (const auto& row : r.rows) {
        out << fmt12(watts_to_dbm(row.power_w)) << ',' << fmt12(row.power_w) << ',' << to_string(row.scheme) << ','
            << fmt12(row.sum_rate_bps) << ',' << (row.feasible ? 1 : 0) << ',' << row.chosen_k + 1 << ','
            << fmt12(row.placement.y1) << ',' << fmt12(row.placement.z1) << ',' << fmt12(row.placement.y2) << ','
            << fmt12(row.placement.z2) << ',' << row.iterations << "\n";
    }
    out << "# summary: " << summary_line(r) << "\n";
    return out.str();
}

inline void write_sweep_table(const std::string& path, const std::string& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write result table '" + path + "'");
    out << table;
    if (!out) throw std::runtime_error("failed writing result table '" + path + "'");
}

}  // namespace far
