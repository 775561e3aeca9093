#pragma once

// Scenario files are JSON objects whose keys carry their unit:
//
//   {
//     "bs_position_m": [350, 30, 30],
//     "wall_width_m": 20,
//     "y_bounds_m": [0, 20],
//     "z_bounds_m": [0, 20],
//     "total_bandwidth_hz": 1e7,
//     "noise_power_w": 1e-12,        or "noise_power_dbm": -90
//     "ref_gain": 1e-4,              or "ref_gain_db": -40
//     "path_loss_exp": 2,
//     "medium_factor": 3,
//     "users": [ {"x_m": 10, "y_m": 250, "tx_power_w": 0.01, "min_rate_bps": 1e5}, ... ]
//   }
//
// Radio parameters and min_rate_bps are optional; the defaults used are
// recorded in "provenance". A user's power is tx_power_w or tx_power_dbm.
// Unknown keys are rejected so a missing unit suffix cannot slip through.

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "far/error.hpp"
#include "far/model.hpp"

namespace far {

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ParseError("unknown key '" + where + key + "'");
    }
}

inline double number_at(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing key '" + where + key + "'");
    if (!it->is_number()) throw ParseError("key '" + where + key + "' must be a number");
    return it->get<double>();
}

inline std::vector<double> numbers_at(const json& obj, const char* key, std::size_t count) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'");
    if (!it->is_array() || it->size() != count)
        throw ParseError(std::string("key '") + key + "' must be an array of " + std::to_string(count) + " numbers");
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number())
            throw ParseError(std::string("key '") + key + "' must be an array of " + std::to_string(count) + " numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

// Reads exactly one of `linear` / `log_key` (converted with to_linear), or applies the default.
template <class Convert>
double radio_param(const json& obj, const char* linear, const char* log_key, double fallback, Convert to_linear,
                   std::vector<std::string>& provenance, const std::string& where = "") {
    const bool has_linear = obj.contains(linear);
    const bool has_log = log_key != nullptr && obj.contains(log_key);
    if (has_linear && has_log)
        throw ParseError("keys '" + where + linear + "' and '" + where + log_key + "' are mutually exclusive");
    if (has_linear) return number_at(obj, linear, where);
    if (has_log) return to_linear(number_at(obj, log_key, where));
    std::ostringstream note;
    note.precision(17);
    note << "default " << where << linear << " = " << fallback;
    provenance.push_back(note.str());
    return fallback;
}

inline double identity(double v) { return v; }

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
    detail::reject_unknown(doc,
                           {"bs_position_m", "wall_width_m", "y_bounds_m", "z_bounds_m", "total_bandwidth_hz",
                            "noise_power_w", "noise_power_dbm", "ref_gain", "ref_gain_db", "path_loss_exp",
                            "medium_factor", "users", "provenance"},
                           "");

    Scenario s;
    if (const auto it = doc.find("provenance"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("key 'provenance' must be an array of strings");
        for (const auto& v : *it) {
            if (!v.is_string()) throw ParseError("key 'provenance' must be an array of strings");
            s.provenance.push_back(v.get<std::string>());
        }
    }
    const auto bs = detail::numbers_at(doc, "bs_position_m", 3);
    s.bs_position = {bs[0], bs[1], bs[2]};
    s.wall_width_m = detail::number_at(doc, "wall_width_m", "");
    const auto yb = detail::numbers_at(doc, "y_bounds_m", 2);
    const auto zb = detail::numbers_at(doc, "z_bounds_m", 2);
    s.y_bounds = {yb[0], yb[1]};
    s.z_bounds = {zb[0], zb[1]};
    s.total_bandwidth_hz = detail::number_at(doc, "total_bandwidth_hz", "");
    s.noise_power_w = detail::radio_param(doc, "noise_power_w", "noise_power_dbm", RadioDefaults::noise_power_w,
                                          dbm_to_watts, s.provenance);
    s.ref_gain = detail::radio_param(doc, "ref_gain", "ref_gain_db", RadioDefaults::ref_gain, db_to_linear,
                                     s.provenance);
    s.path_loss_exp = detail::radio_param(doc, "path_loss_exp", nullptr, RadioDefaults::path_loss_exp,
                                          detail::identity, s.provenance);
    s.medium_factor = detail::radio_param(doc, "medium_factor", nullptr, RadioDefaults::medium_factor,
                                          detail::identity, s.provenance);

    const auto users = doc.find("users");
    if (users == doc.end()) throw ParseError("missing key 'users'");
    if (!users->is_array()) throw ParseError("key 'users' must be an array");
    for (std::size_t n = 0; n < users->size(); ++n) {
        const auto& u = (*users)[n];
        const std::string where = "users[" + std::to_string(n) + "].";
        if (!u.is_object()) throw ParseError("'" + where.substr(0, where.size() - 1) + "' must be an object");
        detail::reject_unknown(u, {"x_m", "y_m", "tx_power_w", "tx_power_dbm", "min_rate_bps"}, where);
        UserTerminal user;
        user.position = {detail::number_at(u, "x_m", where), detail::number_at(u, "y_m", where)};
        const bool has_w = u.contains("tx_power_w");
        const bool has_dbm = u.contains("tx_power_dbm");
        if (has_w == has_dbm) throw ParseError("exactly one of '" + where + "tx_power_w' / '" + where + "tx_power_dbm' is required");
        user.tx_power_w = has_w ? detail::number_at(u, "tx_power_w", where)
                                : dbm_to_watts(detail::number_at(u, "tx_power_dbm", where));
        user.min_rate_bps = detail::radio_param(u, "min_rate_bps", nullptr, RadioDefaults::min_rate_bps,
                                                detail::identity, s.provenance, where);
        s.users.push_back(user);
    }
    validate(s);
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// Every value is written in linear SI units with round-trip precision, so
// parse_scenario(format_scenario(s)) == s.
inline std::string format_scenario(const Scenario& s) {
    detail::json doc = detail::json::object();
    doc["bs_position_m"] = {s.bs_position.x, s.bs_position.y, s.bs_position.z};
    doc["wall_width_m"] = s.wall_width_m;
    doc["y_bounds_m"] = {s.y_bounds.lo, s.y_bounds.hi};
    doc["z_bounds_m"] = {s.z_bounds.lo, s.z_bounds.hi};
    doc["total_bandwidth_hz"] = s.total_bandwidth_hz;
    doc["noise_power_w"] = s.noise_power_w;
    doc["ref_gain"] = s.ref_gain;
    doc["path_loss_exp"] = s.path_loss_exp;
    doc["medium_factor"] = s.medium_factor;
    auto users = detail::json::array();
    for (const auto& u : s.users) {
        users.push_back({{"x_m", u.position.x},
                         {"y_m", u.position.y},
                         {"tx_power_w", u.tx_power_w},
                         {"min_rate_bps", u.min_rate_bps}});
    }
    doc["users"] = std::move(users);
    doc["provenance"] = s.provenance;
    return doc.dump(2) + "\n";
}

inline void write_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write scenario file '" + path + "'");
    out << format_scenario(s);
    if (!out) throw std::runtime_error("failed writing scenario file '" + path + "'");
}

// Name and version of the scenario generator. Bumping the version is required
// whenever gen_scenario's output for a given seed changes.
inline constexpr const char* kGeneratorName = "mt19937_64-u53/v1";

// Uniform double in [0, 1) from the top 53 bits of a mt19937_64 draw; unlike
// std::uniform_real_distribution this is identical across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline constexpr double kDefaultTxPowerDbm = 10.0;

// Users uniform over [0, 300] x [0, 300] m; everything else is the reference
// geometry: BS at (350, 30, 30) m, 20 m wall, ports in [0, 20]^2 m, 10 MHz.
inline Scenario gen_scenario(std::uint64_t seed, std::size_t n_users, double tx_power_dbm = kDefaultTxPowerDbm) {
    if (n_users < 1) throw ValidationError("n_users must be at least 1");
    std::mt19937_64 rng(seed);
    Scenario s;
    s.bs_position = {350.0, 30.0, 30.0};
    s.wall_width_m = 20.0;
    s.y_bounds = {0.0, 20.0};
    s.z_bounds = {0.0, 20.0};
    s.total_bandwidth_hz = 10e6;
    const double p = dbm_to_watts(tx_power_dbm);
    for (std::size_t n = 0; n < n_users; ++n) {
        UserTerminal u;
        u.position.x = 300.0 * unit_uniform(rng);
        u.position.y = 300.0 * unit_uniform(rng);
        u.tx_power_w = p;
        u.min_rate_bps = RadioDefaults::min_rate_bps;
        s.users.push_back(u);
    }
    std::ostringstream note;
    note.precision(17);
    note << "generated by " << kGeneratorName << " seed=" << seed << " n_users=" << n_users
         << " tx_power_dbm=" << tx_power_dbm;
    s.provenance.push_back(note.str());
    s.provenance.push_back("default radio parameters: path_loss_exp=2 ref_gain=1e-4 noise_power_w=1e-12 "
                           "medium_factor=3 min_rate_bps=1e5");
    validate(s);
    return s;
}

// Copy of s with every user's transmit power set to p.
inline Scenario with_uniform_power(Scenario s, double tx_power_w) {
    for (auto& u : s.users) u.tx_power_w = tx_power_w;
    return s;
}

}  // namespace far
