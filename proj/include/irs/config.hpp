// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#pragma once

// Flat `key = value` experiment configuration. One key per line, `#` starts
// a comment, unspecified keys keep their defaults. Example:
//
//   m_antennas = 5
//   n_elements = 40
//   user_position = 50, 0
//   sweep = d:20,25,...,55
//   schemes = joint, no_irs

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "irs/experiments.hpp"

namespace irs {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

class ConfigReader {
public:
    ConfigReader(std::string key, std::string_view value, std::size_t line)
        : key_(std::move(key)), value_(value), line_(line) {}

    [[noreturn]] void fail(ConfigErrorCode code, const std::string& msg) const {
        throw ConfigError(code, line_, key_ + ": " + msg);
    }

    double real(std::string_view text) const {
        double x = 0.0;
        const auto* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, x);
        if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(x))
            fail(ConfigErrorCode::type_mismatch, "expected a real number, got '" + std::string(text) + "'");
        return x;
    }
    double real() const { return real(value_); }

    long long integer() const {
        long long x = 0;
        const auto* end = value_.data() + value_.size();
        auto [ptr, ec] = std::from_chars(value_.data(), end, x);
        if (value_.empty() || ec != std::errc{} || ptr != end)
            fail(ConfigErrorCode::type_mismatch, "expected an integer, got '" + std::string(value_) + "'");
        return x;
    }

    std::size_t count(long long min) const {
        const long long x = integer();
        if (x < min) fail(ConfigErrorCode::invariant, "must be >= " + std::to_string(min) + ", got " + std::to_string(x));
        return static_cast<std::size_t>(x);
    }

    std::uint64_t u64() const {
        std::uint64_t x = 0;
        const auto* end = value_.data() + value_.size();
        auto [ptr, ec] = std::from_chars(value_.data(), end, x);
        if (value_.empty() || ec != std::errc{} || ptr != end)
            fail(ConfigErrorCode::type_mismatch, "expected an unsigned 64-bit integer, got '" + std::string(value_) + "'");
        return x;
    }

    double positive() const {
        const double x = real();
        if (!(x > 0.0)) fail(ConfigErrorCode::invariant, "must be > 0");
        return x;
    }

    Point2 point() const {
        const auto parts = split(value_, ',');
        if (parts.size() != 2) fail(ConfigErrorCode::type_mismatch, "expected 'x, y'");
        return {real(parts[0]), real(parts[1])};
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (auto p : split(value_, ',')) {
            if (p.empty()) fail(ConfigErrorCode::type_mismatch, "empty scheme name");
            out.emplace_back(p);
        }
        return out;
    }

    /// `<var>:v1,v2,...` where a literal `...` continues the step of the two
    /// preceding values up to the value that follows it.
    SweepSpec sweep() const {
        const auto colon = value_.find(':');
        if (colon == std::string_view::npos) fail(ConfigErrorCode::type_mismatch, "expected '<d|N>:v1,v2,...'");
        SweepSpec spec{std::string(trim(value_.substr(0, colon))), {}};
        if (spec.variable != "d" && spec.variable != "N")
            fail(ConfigErrorCode::invariant, "sweep variable must be 'd' or 'N', got '" + spec.variable + "'");
        const auto tokens = split(value_.substr(colon + 1), ',');
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i] != "...") {
                spec.values.push_back(real(tokens[i]));
                continue;
            }
            if (spec.values.size() < 2 || i + 1 >= tokens.size() || tokens[i + 1] == "...")
                fail(ConfigErrorCode::syntax, "'...' needs two values before and one after");
            const double a = spec.values[spec.values.size() - 2];
            const double step = spec.values.back() - a;
            const double last = real(tokens[i + 1]);
            if (!(step > 0.0) || !(last > spec.values.back()))
                fail(ConfigErrorCode::invariant, "'...' range must increase");
            const double base = spec.values.back();
            const double span = (last - base) / step;
            const double k_end = std::round(span);
            if (std::abs(span - k_end) > 1e-9 * std::max(1.0, span))
                fail(ConfigErrorCode::invariant, "'...' end value is not on the step lattice");
            for (double k = 1; k < k_end; ++k) spec.values.push_back(base + k * step);
            spec.values.push_back(last);
            ++i;
        }
        for (std::size_t i = 1; i < spec.values.size(); ++i)
            if (!(spec.values[i] > spec.values[i - 1])) fail(ConfigErrorCode::invariant, "values must be strictly increasing");
        return spec;
    }

private:
    std::string key_;
    std::string_view value_;
    std::size_t line_;
};

using KeyHandler = std::function<void(ExperimentConfig&, const ConfigReader&)>;

inline const std::map<std::string, KeyHandler, std::less<>>& config_keys() {
    static const std::map<std::string, KeyHandler, std::less<>> keys{
        {"bs_position", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.bs_position = r.point(); }},
        {"irs_position", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.irs_position = r.point(); }},
        {"user_position", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.user_position = r.point(); }},
        {"m_antennas", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.m_antennas = r.count(1); }},
        {"n_elements", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.n_elements = r.count(0); }},
        {"pl_exponent_bs_irs", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.pl_exponent_bs_irs = r.positive(); }},
        {"pl_exponent_bs_user", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.pl_exponent_bs_user = r.positive(); }},
        {"pl_exponent_irs_user", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.pl_exponent_irs_user = r.positive(); }},
        {"c0_db", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.c0_db = r.real(); }},
        {"noise_power_dbm", [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.noise_power_dbm = r.real(); }},
        {"antenna_spacing_wavelengths",
         [](ExperimentConfig& c, const ConfigReader& r) { c.scenario.antenna_spacing_wavelengths = r.positive(); }},
        {"sweep", [](ExperimentConfig& c, const ConfigReader& r) { c.sweep = r.sweep(); }},
        {"schemes", [](ExperimentConfig& c, const ConfigReader& r) { c.schemes = r.names(); }},
        {"n_realizations", [](ExperimentConfig& c, const ConfigReader& r) { c.n_realizations = r.count(1); }},
        {"master_seed", [](ExperimentConfig& c, const ConfigReader& r) { c.master_seed = r.u64(); }},
        {"snr_target_db", [](ExperimentConfig& c, const ConfigReader& r) { c.snr_target_db = r.real(); }},
        {"interferer_power_dbm", [](ExperimentConfig& c, const ConfigReader& r) { c.interferer_power_dbm = r.real(); }},
    };
    return keys;
}

}  // namespace detail

inline ExperimentConfig parse_config_text(std::string_view text) {
    ExperimentConfig cfg;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(ConfigErrorCode::syntax, line_no, "expected 'key = value', got '" + std::string(line) + "'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value = detail::trim(line.substr(eq + 1));

        const auto& keys = detail::config_keys();
        const auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError(ConfigErrorCode::unknown_key, line_no, "unknown key '" + key + "'");
        if (const auto prev = seen.find(key); prev != seen.end())
            throw ConfigError(ConfigErrorCode::syntax, line_no,
                              key + ": duplicate key (first set on line " + std::to_string(prev->second) + ")");
        seen.emplace(key, line_no);
        it->second(cfg, detail::ConfigReader(key, value, line_no));
    }
    try {
        cfg.scenario.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(ConfigErrorCode::invariant, 0, e.what());
    }
    return cfg;
}

inline ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigErrorCode::missing_file, 0, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Every set key, in a fixed order; parse_config_text(serialize_config(c)) == c.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    using detail::format_double;
    const auto& s = cfg.scenario;
    auto point = [](Point2 p) { return format_double(p.x) + ", " + format_double(p.y); };
    std::ostringstream out;
    out << "bs_position = " << point(s.bs_position) << '\n'
        << "irs_position = " << point(s.irs_position) << '\n'
        << "user_position = " << point(s.user_position) << '\n'
        << "m_antennas = " << s.m_antennas << '\n'
        << "n_elements = " << s.n_elements << '\n'
        << "pl_exponent_bs_irs = " << format_double(s.pl_exponent_bs_irs) << '\n'
        << "pl_exponent_bs_user = " << format_double(s.pl_exponent_bs_user) << '\n'
        << "pl_exponent_irs_user = " << format_double(s.pl_exponent_irs_user) << '\n'
        << "c0_db = " << format_double(s.c0_db) << '\n'
        << "noise_power_dbm = " << format_double(s.noise_power_dbm) << '\n'
        << "antenna_spacing_wavelengths = " << format_double(s.antenna_spacing_wavelengths) << '\n';
    if (cfg.sweep) {
        out << "sweep = " << cfg.sweep->variable << ':';
        for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i)
            out << (i ? "," : "") << format_double(cfg.sweep->values[i]);
        out << '\n';
    }
    if (!cfg.schemes.empty()) {
        out << "schemes = ";
        for (std::size_t i = 0; i < cfg.schemes.size(); ++i) out << (i ? "," : "") << cfg.schemes[i];
        out << '\n';
    }
    if (cfg.n_realizations) out << "n_realizations = " << *cfg.n_realizations << '\n';
    out << "master_seed = " << cfg.master_seed << '\n'
        << "snr_target_db = " << format_double(cfg.snr_target_db) << '\n'
        << "interferer_power_dbm = " << format_double(cfg.interferer_power_dbm) << '\n';
    return out.str();
}

}  // namespace irs
