// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "irs/beamforming.hpp"
#include "irs/config.hpp"
#include "irs/experiments.hpp"

namespace irs {

inline constexpr const char* csv_header = "sweep_value,scheme,metric_value,metric_unit,n_realizations,master_seed";

enum exit_code : int { exit_ok = 0, exit_config_error = 1, exit_runtime_error = 2 };

struct CliInvocation {
    std::string subcommand;  // power-vs-distance | power-vs-n | interference-vs-n | solve-once
    std::string config_path;  // empty: built-in defaults
    std::string out_path;     // empty: CSV to the output stream
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> realizations_override;
    bool quiet = false;
};

inline std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

inline std::string to_csv(const ExperimentResult& result) {
    std::string out = csv_header;
    out += '\n';
    for (const auto& r : result.rows) {
        out += detail::format_double(r.sweep_value);
        out += ',' + r.scheme + ',' + fixed6(r.metric_value) + ',' + r.metric_unit + ',' +
               std::to_string(r.n_realizations) + ',' + std::to_string(r.master_seed) + '\n';
    }
    return out;
}

namespace detail {

inline void print_summary(std::ostream& os, const std::string& variable, const ExperimentResult& result) {
    std::size_t i = 0;
    while (i < result.rows.size()) {
        const double x = result.rows[i].sweep_value;
        os << variable << '=' << format_double(x);
        for (; i < result.rows.size() && result.rows[i].sweep_value == x; ++i)
            os << "  " << result.rows[i].scheme << '=' << fixed6(result.rows[i].metric_value) << ' '
               << result.rows[i].metric_unit;
        os << '\n';
    }
}

inline void solve_once(const ExperimentConfig& cfg, std::ostream& os) {
    const ChannelRealization ch = realize(cfg.scenario, realization_rng(cfg.master_seed, 0));
    const BeamformingSolution sol = alternating_optimize(ch, ConstraintSet::ideal_continuous());
    os << "M=" << ch.m() << " N=" << ch.n() << " seed=" << cfg.master_seed << " iterations=" << sol.trace.size()
       << '\n';
    os << "w:";
    for (const auto& z : sol.w) os << ' ' << fixed6(z.real()) << (z.imag() < 0 ? "-" : "+") << fixed6(std::abs(z.imag())) << 'j';
    os << "\nphases_rad:";
    for (const auto& v : sol.refl.coefficients()) os << ' ' << fixed6(wrap_phase(std::arg(v)));
    os << "\ngain_db: " << fixed6(linear_to_db(sol.gain_linear)) << '\n';
    os << "required_power_dbm: "
       << fixed6(min_power_for_snr(sol.gain_linear, cfg.snr_target_db, cfg.scenario.noise_power_dbm)) << '\n';
}

}  // namespace detail

/// Executes one CLI invocation. Returns 0 on success, 1 on a configuration
/// error, 2 on any other failure. Diagnostics go to `err`.
inline int run(const CliInvocation& inv, std::ostream& out, std::ostream& err, std::size_t workers = 0) {
    try {
        ExperimentConfig cfg = inv.config_path.empty() ? ExperimentConfig{} : parse_config(inv.config_path);
        if (inv.seed_override) cfg.master_seed = *inv.seed_override;
        if (inv.realizations_override) {
            if (*inv.realizations_override < 1)
                throw ConfigError(ConfigErrorCode::invariant, 0, "--realizations: must be >= 1");
            cfg.n_realizations = *inv.realizations_override;
        }

        if (inv.subcommand == "solve-once") {
            detail::solve_once(cfg, out);
            return exit_ok;
        }

        ExperimentResult result;
        std::string variable = "N";
        if (inv.subcommand == "power-vs-distance") {
            result = run_power_vs_distance(cfg, workers);
            variable = "d";
        } else if (inv.subcommand == "power-vs-n") {
            result = run_power_vs_n(cfg, workers);
        } else if (inv.subcommand == "interference-vs-n") {
            result = run_interference_vs_n(cfg, workers);
        } else {
            throw ConfigError(ConfigErrorCode::unsupported_setup, 0, "unknown subcommand '" + inv.subcommand + "'");
        }

        const std::string csv = to_csv(result);
        if (inv.out_path.empty()) {
            out << csv;
        } else {
            std::ofstream file(inv.out_path, std::ios::binary | std::ios::trunc);
            if (!file) throw std::runtime_error("cannot write '" + inv.out_path + "'");
            file << csv;
            if (!file) throw std::runtime_error("write to '" + inv.out_path + "' failed");
        }
        if (!inv.quiet) detail::print_summary(inv.out_path.empty() ? err : out, variable, result);
        return exit_ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime_error;
    }
}

}  // namespace irs
