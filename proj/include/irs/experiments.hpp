// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "irs/beamforming.hpp"
#include "irs/channel.hpp"
#include "irs/numerics.hpp"
#include "irs/reflection.hpp"

namespace irs {

enum class ConfigErrorCode {
    missing_file = 10,
    syntax = 11,
    unknown_key = 12,
    type_mismatch = 13,
    invariant = 14,
    unknown_scheme = 15,
    unsupported_setup = 16,
};

/// Bad configuration. `line` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorCode code, std::size_t line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          code_(code),
          line_(line) {}

    ConfigErrorCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

private:
    ConfigErrorCode code_;
    std::size_t line_;
};

/// Independent variable of a sweep: "d" (user x-position, meters) or "N" (IRS elements).
struct SweepSpec {
    std::string variable;
    std::vector<double> values;
    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Unset optionals resolve to the per-study defaults below.
struct ExperimentConfig {
    ScenarioConfig scenario;
    std::optional<SweepSpec> sweep;
    std::vector<std::string> schemes;  // empty: every scheme of the study
    std::optional<std::size_t> n_realizations;
    std::uint64_t master_seed = 1;
    double snr_target_db = 20.0;
    double interferer_power_dbm = 30.0;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ResultRow {
    double sweep_value = 0.0;
    std::string scheme;
    double metric_value = 0.0;
    std::string metric_unit;  // "dBm" or "dB"
    std::size_t n_realizations = 0;
    std::uint64_t master_seed = 0;
    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Per-realization metric (same unit as the row) before averaging.
struct SampleSeries {
    double sweep_value = 0.0;
    std::string scheme;
    std::vector<double> values;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;  // sorted by (sweep_value, scheme)
    std::vector<SampleSeries> samples;

    const ResultRow* find(double sweep_value, const std::string& scheme) const {
        for (const auto& r : rows)
            if (r.sweep_value == sweep_value && r.scheme == scheme) return &r;
        return nullptr;
    }
    const SampleSeries* find_samples(double sweep_value, const std::string& scheme) const {
        for (const auto& s : samples)
            if (s.sweep_value == sweep_value && s.scheme == scheme) return &s;
        return nullptr;
    }
};

/// Stream of Monte Carlo realization `realization`. The same stream is used at
/// every sweep point and for every scheme (common random numbers), so curves
/// are paired sample by sample.
inline SeededRng realization_rng(std::uint64_t master_seed, std::size_t realization) {
    return {master_seed, static_cast<std::uint64_t>(realization)};
}

namespace detail {

/// Runs body(i) for i in [0, count) on `workers` threads. Each index writes
/// only its own slot, so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

inline double mean(const std::vector<double>& values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

inline std::vector<double> resolve_sweep(const ExperimentConfig& cfg, const std::string& variable,
                                         std::vector<double> fallback) {
    if (!cfg.sweep) return fallback;
    if (cfg.sweep->variable != variable)
        throw ConfigError(ConfigErrorCode::invariant, 0,
                          "sweep: this study sweeps '" + variable + "', got '" + cfg.sweep->variable + "'");
    const auto& v = cfg.sweep->values;
    if (v.empty()) throw ConfigError(ConfigErrorCode::invariant, 0, "sweep: no values");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) throw ConfigError(ConfigErrorCode::invariant, 0, "sweep: values must increase");
    if (variable == "N")
        for (double x : v)
            if (x < 0.0 || x != std::floor(x))
                throw ConfigError(ConfigErrorCode::invariant, 0, "sweep: N values must be non-negative integers");
    if (variable == "d")
        for (double x : v)
            if (x == 0.0 || !std::isfinite(x)) throw ConfigError(ConfigErrorCode::invariant, 0, "sweep: d must be non-zero");
    return v;
}

inline std::vector<std::string> resolve_schemes(const ExperimentConfig& cfg, const std::vector<std::string>& known) {
    if (cfg.schemes.empty()) return known;
    std::vector<std::string> out;
    for (const auto& s : cfg.schemes) {
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw ConfigError(ConfigErrorCode::unknown_scheme, 0, "schemes: unknown scheme '" + s + "'");
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
}

inline void check_common(const ExperimentConfig& cfg) {
    if (cfg.n_realizations && *cfg.n_realizations < 1)
        throw ConfigError(ConfigErrorCode::invariant, 0, "n_realizations: must be >= 1");
    try {
        cfg.scenario.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(ConfigErrorCode::invariant, 0, e.what());
    }
}

/// Shared driver: evaluate(channel) returns one metric per scheme for one
/// realization; the mean is taken in the linear domain and reported in dB.
template <class Evaluate>
ExperimentResult sweep_and_average(const ExperimentConfig& cfg, const std::vector<double>& sweep,
                                   const std::vector<std::string>& schemes, std::size_t n_real,
                                   const std::string& unit, std::size_t workers,
                                   const std::function<ScenarioConfig(double)>& scenario_at, Evaluate evaluate) {
    ExperimentResult result;
    for (std::size_t si = 0; si < sweep.size(); ++si) {
        const ScenarioConfig sc = scenario_at(sweep[si]);
        try {
            sc.validate();
        } catch (const std::domain_error& e) {
            throw ConfigError(ConfigErrorCode::invariant, 0, e.what());
        }
        std::vector<std::vector<double>> per_real(n_real);
        parallel_for(n_real, workers, [&](std::size_t r) {
            const ChannelRealization ch = realize(sc, realization_rng(cfg.master_seed, r));
            per_real[r] = evaluate(ch);
        });
        for (std::size_t k = 0; k < schemes.size(); ++k) {
            SampleSeries series{sweep[si], schemes[k], {}};
            std::vector<double> linear;
            series.values.reserve(n_real);
            linear.reserve(n_real);
            for (std::size_t r = 0; r < n_real; ++r) {
                series.values.push_back(per_real[r][k]);
                linear.push_back(db_to_linear(per_real[r][k]));
            }
            result.rows.push_back({sweep[si], schemes[k], linear_to_db(mean(linear)), unit, n_real, cfg.master_seed});
            result.samples.push_back(std::move(series));
        }
    }
    return result;
}

inline void sort_rows(ExperimentResult& result) {
    auto key = [](const auto& r) { return std::tie(r.sweep_value, r.scheme); };
    std::stable_sort(result.rows.begin(), result.rows.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    std::stable_sort(result.samples.begin(), result.samples.end(),
                     [&](const auto& a, const auto& b) { return key(a) < key(b); });
}

}  // namespace detail

inline const std::vector<std::string>& power_vs_distance_schemes() {
    static const std::vector<std::string> s{"joint", "bs_user_mrt", "bs_irs_mrt", "no_irs"};
    return s;
}
inline const std::vector<std::string>& power_vs_n_schemes() {
    static const std::vector<std::string> s{"continuous", "b1", "b2", "b1_nearest", "b2_nearest"};
    return s;
}
inline const std::vector<std::string>& interference_schemes() {
    static const std::vector<std::string> s{"joint_amp_phase", "phase_only", "no_irs"};
    return s;
}

inline constexpr std::size_t default_power_realizations = 500;
inline constexpr std::size_t default_interference_realizations = 200;

/// Normalised interference reported for exact cancellation, dB.
inline constexpr double interference_floor_db = -300.0;

/// Minimum BS transmit power [dBm] for the SNR target versus user position d.
inline ExperimentResult run_power_vs_distance(const ExperimentConfig& cfg, std::size_t workers = 0) {
    detail::check_common(cfg);
    const auto sweep = detail::resolve_sweep(cfg, "d", {20, 25, 30, 35, 40, 45, 50, 55});
    const auto schemes = detail::resolve_schemes(cfg, power_vs_distance_schemes());
    const std::size_t n_real = cfg.n_realizations.value_or(default_power_realizations);
    const auto snr = cfg.snr_target_db;
    const auto noise = cfg.scenario.noise_power_dbm;

    auto scenario_at = [&](double d) {
        ScenarioConfig sc = cfg.scenario;
        sc.user_position = {d, cfg.scenario.user_position.y};
        return sc;
    };
    auto evaluate = [&](const ChannelRealization& ch) {
        std::vector<double> out;
        out.reserve(schemes.size());
        for (const auto& s : schemes) {
            double gain = 0.0;
            if (s == "joint") gain = alternating_optimize(ch, ConstraintSet::ideal_continuous()).gain_linear;
            else if (s == "bs_user_mrt") gain = bs_user_mrt(ch, ConstraintSet::ideal_continuous()).gain_linear;
            else if (s == "bs_irs_mrt") gain = bs_irs_mrt(ch, ConstraintSet::ideal_continuous()).gain_linear;
            else gain = no_irs_mrt(ch).gain_linear;
            out.push_back(min_power_for_snr(gain, snr, noise));
        }
        return out;
    };
    auto result = detail::sweep_and_average(cfg, sweep, schemes, n_real, "dBm", workers, scenario_at, evaluate);
    detail::sort_rows(result);
    return result;
}

/// Minimum BS transmit power [dBm] versus N for continuous and b-bit phases.
/// b<k> quantizes the continuous solution and refines it element by element;
/// b<k>_nearest stops after quantization. Adds loss_<scheme> rows (dB)
/// relative to the continuous scheme.
inline ExperimentResult run_power_vs_n(const ExperimentConfig& cfg, std::size_t workers = 0) {
    detail::check_common(cfg);
    const auto sweep = detail::resolve_sweep(cfg, "N", {10, 25, 50, 100, 150, 200, 250, 300});
    const auto schemes = detail::resolve_schemes(cfg, power_vs_n_schemes());
    const std::size_t n_real = cfg.n_realizations.value_or(default_power_realizations);
    const auto snr = cfg.snr_target_db;
    const auto noise = cfg.scenario.noise_power_dbm;

    auto scenario_at = [&](double n) {
        ScenarioConfig sc = cfg.scenario;
        sc.n_elements = static_cast<std::size_t>(n);
        return sc;
    };
    auto evaluate = [&](const ChannelRealization& ch) {
        const BeamformingSolution cont = alternating_optimize(ch, ConstraintSet::unit_modulus());
        std::vector<double> out;
        out.reserve(schemes.size());
        for (const auto& s : schemes) {
            double gain = cont.gain_linear;
            if (s == "b1") gain = quantize_and_refine(ch, cont, 1).gain_linear;
            else if (s == "b2") gain = quantize_and_refine(ch, cont, 2).gain_linear;
            else if (s == "b1_nearest") gain = quantize_only(ch, cont, 1).gain_linear;
            else if (s == "b2_nearest") gain = quantize_only(ch, cont, 2).gain_linear;
            out.push_back(min_power_for_snr(gain, snr, noise));
        }
        return out;
    };
    auto result = detail::sweep_and_average(cfg, sweep, schemes, n_real, "dBm", workers, scenario_at, evaluate);

    const bool has_cont = std::find(schemes.begin(), schemes.end(), "continuous") != schemes.end();
    if (has_cont) {
        std::vector<ResultRow> losses;
        for (const auto& row : result.rows) {
            if (row.scheme == "continuous") continue;
            const ResultRow* ref = result.find(row.sweep_value, "continuous");
            losses.push_back({row.sweep_value, "loss_" + row.scheme, row.metric_value - ref->metric_value, "dB",
                              row.n_realizations, row.master_seed});
        }
        result.rows.insert(result.rows.end(), losses.begin(), losses.end());
    }
    detail::sort_rows(result);
    return result;
}

/// Residual co-channel interference normalised by the noise power [dB] versus N.
/// Single-antenna interferer only.
inline ExperimentResult run_interference_vs_n(const ExperimentConfig& cfg, std::size_t workers = 0) {
    detail::check_common(cfg);
    if (cfg.scenario.m_antennas != 1)
        throw ConfigError(ConfigErrorCode::unsupported_setup, 0,
                          "interference-vs-n requires m_antennas = 1 (single-antenna interferer), got " +
                              std::to_string(cfg.scenario.m_antennas));
    const auto sweep = detail::resolve_sweep(cfg, "N", {20, 30, 40, 50, 60, 70, 80, 90, 100});
    const auto schemes = detail::resolve_schemes(cfg, interference_schemes());
    const std::size_t n_real = cfg.n_realizations.value_or(default_interference_realizations);
    const double to_noise_db = cfg.interferer_power_dbm - cfg.scenario.noise_power_dbm;

    auto scenario_at = [&](double n) {
        ScenarioConfig sc = cfg.scenario;
        sc.n_elements = static_cast<std::size_t>(n);
        return sc;
    };
    auto evaluate = [&](const ChannelRealization& ch) {
        std::vector<double> out;
        out.reserve(schemes.size());
        for (const auto& s : schemes) {
            double residual = std::norm(ch.h_bs_user[0]);
            if (s == "joint_amp_phase")
                residual = null_interference(ch, ConstraintSet::ideal_continuous()).residual_power;
            else if (s == "phase_only")
                residual = null_interference(ch, ConstraintSet::unit_modulus()).residual_power;
            out.push_back(std::max(interference_floor_db, to_noise_db + linear_to_db(std::max(residual, 1e-300))));
        }
        return out;
    };
    auto result = detail::sweep_and_average(cfg, sweep, schemes, n_real, "dB", workers, scenario_at, evaluate);
    detail::sort_rows(result);
    return result;
}

}  // namespace irs
