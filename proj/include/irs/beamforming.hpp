// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "irs/channel.hpp"
#include "irs/numerics.hpp"
#include "irs/reflection.hpp"

namespace irs {

/// Transmit beamformer, reflection state and the channel power gain they achieve.
struct BeamformingSolution {
    ComplexVec w;  // unit norm
    ReflectionState refl;
    double gain_linear = 0.0;    // |<h_eff, w>|^2
    std::vector<double> trace;  // objective per iteration, non-decreasing
};

/// Maximum-ratio transmission towards h.
inline ComplexVec mrt(std::span<const cplx> h) {
    const double nh = norm(h);
    if (!(nh > 0.0)) throw std::domain_error("mrt: zero channel");
    return scaled(h, 1.0 / nh);
}

/// For a fixed beamformer the received amplitude is t + sum_n a_n v_n.
struct CascadeTerms {
    cplx direct;          // t = <h_d, w>
    ComplexVec reflected;  // a_n = conj(h_r,n) (G w)_n
};

inline CascadeTerms cascade_terms(const ChannelRealization& ch, std::span<const cplx> w) {
    if (w.size() != ch.m()) throw ContractError("cascade_terms: beamformer length != M");
    CascadeTerms terms{inner(ch.h_bs_user, w), {}};
    if (ch.n() == 0) return terms;
    terms.reflected = ch.g_bs_irs.apply(w);
    for (std::size_t n = 0; n < ch.n(); ++n) terms.reflected[n] *= std::conj(ch.h_irs_user[n]);
    return terms;
}

/// Closed-form passive beamforming: every reflected term is co-phased with the
/// direct term at full amplitude, then projected onto `c`.
inline ReflectionState align_phases(const ChannelRealization& ch, std::span<const cplx> w, const ConstraintSet& c) {
    if (c.kind == ConstraintSet::Kind::absorb) throw ContractError("align_phases: absorbing set has no phases");
    const CascadeTerms terms = cascade_terms(ch, w);
    const double ref = terms.direct == cplx{0.0, 0.0} ? 0.0 : std::arg(terms.direct);
    ComplexVec v(ch.n());
    for (std::size_t n = 0; n < v.size(); ++n) {
        const double an = terms.reflected[n] == cplx{0.0, 0.0} ? 0.0 : std::arg(terms.reflected[n]);
        v[n] = std::polar(1.0, ref - an);
    }
    return project(v, c);
}

/// Fixed-N=0 baseline: plain MRT on the direct link.
inline BeamformingSolution no_irs_mrt(const ChannelRealization& ch) {
    BeamformingSolution sol;
    sol.w = mrt(ch.h_bs_user);
    sol.refl = ReflectionState::absorbing(ch.n());
    sol.gain_linear = norm_sq(ch.h_bs_user);
    sol.trace = {sol.gain_linear};
    return sol;
}

/// Beam towards the direct link, IRS co-phased to that beam.
inline BeamformingSolution bs_user_mrt(const ChannelRealization& ch, const ConstraintSet& c) {
    BeamformingSolution sol;
    sol.w = mrt(ch.h_bs_user);
    sol.refl = align_phases(ch, sol.w, c);
    sol.gain_linear = channel_gain(ch, sol.refl, sol.w);
    sol.trace = {sol.gain_linear};
    return sol;
}

/// Beam along the dominant right singular direction of G, IRS co-phased to that beam.
inline BeamformingSolution bs_irs_mrt(const ChannelRealization& ch, const ConstraintSet& c) {
    if (ch.n() == 0) throw std::domain_error("bs_irs_mrt: no IRS elements");
    BeamformingSolution sol;
    sol.w = principal_right_singular(ch.g_bs_irs);
    sol.refl = align_phases(ch, sol.w, c);
    sol.gain_linear = channel_gain(ch, sol.refl, sol.w);
    sol.trace = {sol.gain_linear};
    return sol;
}

/// Alternates reflection alignment for the current beam with MRT on the
/// resulting effective channel. Starts from the direct-link MRT beam when the
/// direct link is non-zero, otherwise from the BS-IRS beam. Returns the best
/// iterate; stops once the relative gain improvement drops below `tol`.
inline BeamformingSolution alternating_optimize(const ChannelRealization& ch, const ConstraintSet& c,
                                                double tol = 1e-4, std::size_t max_iter = 100) {
    if (max_iter < 1) throw ContractError("alternating_optimize: max_iter must be >= 1");
    if (!(tol > 0.0)) throw ContractError("alternating_optimize: tol must be positive");
    if (ch.n() == 0) {
        BeamformingSolution sol = no_irs_mrt(ch);
        sol.refl = ReflectionState({}, c);
        return sol;
    }

    ComplexVec w = norm(ch.h_bs_user) > 0.0 ? mrt(ch.h_bs_user) : principal_right_singular(ch.g_bs_irs);
    BeamformingSolution best;
    for (std::size_t it = 0; it < max_iter; ++it) {
        ReflectionState refl = align_phases(ch, w, c);
        const ComplexVec h = effective_channel(ch, refl);
        const double objective = norm_sq(h);
        if (!(objective > 0.0)) {
            if (best.trace.empty()) {
                best = {w, std::move(refl), 0.0, {0.0}};
            }
            break;
        }
        if (!best.trace.empty() && objective < best.gain_linear) break;  // quantized alignment can regress
        const double previous = best.trace.empty() ? 0.0 : best.gain_linear;
        std::vector<double> trace = std::move(best.trace);
        trace.push_back(objective);
        best = {mrt(h), std::move(refl), objective, std::move(trace)};
        if (best.trace.size() > 1 && objective - previous < tol * previous) break;
        w = best.w;
    }
    return best;
}

struct RefineResult {
    ReflectionState refl;
    std::vector<double> trace;  // objective after each pass
    std::size_t passes = 0;
};

/// Cyclic coordinate ascent over the 2^bits phase levels of each element with
/// the beamformer and all other elements held fixed. Elements are visited in
/// ascending index; ties keep the lowest level.
inline RefineResult discrete_refine_traced(const ChannelRealization& ch, std::span<const cplx> w,
                                           const ReflectionState& start, unsigned bits, std::size_t passes = 20) {
    const ConstraintSet c = ConstraintSet::discrete_phase(bits);
    if (start.constraint() != c) throw ContractError("discrete_refine: start must satisfy " + c.name());
    if (start.size() != ch.n()) throw ContractError("discrete_refine: start length != N");
    const CascadeTerms terms = cascade_terms(ch, w);
    const std::size_t count = c.levels();
    std::vector<cplx> lattice(count);
    for (std::size_t k = 0; k < count; ++k) lattice[k] = c.level(k);

    std::vector<std::size_t> level(ch.n());
    for (std::size_t n = 0; n < ch.n(); ++n) level[n] = nearest_level(std::arg(start.coefficients()[n]), bits);

    RefineResult out;
    for (std::size_t pass = 0; pass < passes; ++pass) {
        cplx sum = terms.direct;
        for (std::size_t n = 0; n < ch.n(); ++n) sum += terms.reflected[n] * lattice[level[n]];
        bool changed = false;
        for (std::size_t n = 0; n < ch.n(); ++n) {
            const cplx base = sum - terms.reflected[n] * lattice[level[n]];
            std::size_t best_k = level[n];
            double best_val = std::norm(base + terms.reflected[n] * lattice[best_k]);
            for (std::size_t k = 0; k < count; ++k) {
                const double val = std::norm(base + terms.reflected[n] * lattice[k]);
                if (val > best_val || (val == best_val && k < best_k)) {
                    best_val = val;
                    best_k = k;
                }
            }
            if (best_k != level[n]) {
                level[n] = best_k;
                changed = true;
            }
            sum = base + terms.reflected[n] * lattice[level[n]];
        }
        ++out.passes;
        out.trace.push_back(std::norm(sum));
        if (!changed) break;
    }

    ComplexVec v(ch.n());
    for (std::size_t n = 0; n < ch.n(); ++n) v[n] = lattice[level[n]];
    out.refl = ReflectionState(std::move(v), c);
    return out;
}

inline ReflectionState discrete_refine(const ChannelRealization& ch, std::span<const cplx> w,
                                       const ReflectionState& start, unsigned bits, std::size_t passes = 20) {
    return discrete_refine_traced(ch, w, start, bits, passes).refl;
}

/// b-bit design from a continuous solution: nearest-level quantization,
/// coordinate refinement for the continuous beam, then MRT on the result.
inline BeamformingSolution quantize_and_refine(const ChannelRealization& ch, const BeamformingSolution& continuous,
                                               unsigned bits, std::size_t passes = 20) {
    const ConstraintSet c = ConstraintSet::discrete_phase(bits);
    BeamformingSolution sol;
    RefineResult refined = discrete_refine_traced(ch, continuous.w, project(continuous.refl.coefficients(), c),
                                                  bits, passes);
    sol.refl = std::move(refined.refl);
    sol.trace = std::move(refined.trace);
    const ComplexVec h = effective_channel(ch, sol.refl);
    sol.w = norm(h) > 0.0 ? mrt(h) : continuous.w;
    sol.gain_linear = std::norm(inner(h, sol.w));
    return sol;
}

/// Nearest-level quantization only, no refinement.
inline BeamformingSolution quantize_only(const ChannelRealization& ch, const BeamformingSolution& continuous,
                                         unsigned bits) {
    BeamformingSolution sol;
    sol.refl = project(continuous.refl.coefficients(), ConstraintSet::discrete_phase(bits));
    const ComplexVec h = effective_channel(ch, sol.refl);
    sol.w = norm(h) > 0.0 ? mrt(h) : continuous.w;
    sol.gain_linear = std::norm(inner(h, sol.w));
    sol.trace = {sol.gain_linear};
    return sol;
}

// --------------------------------------------------------------------------
// Interference nulling (single-antenna interferer)

struct NullingResult {
    ReflectionState refl;
    double residual_power = 0.0;  // |t + f^T v|^2
    std::vector<double> trace;    // residual after each pass, non-increasing
};

namespace detail {

inline NullingResult null_interference_from(const ChannelRealization& ch, const ConstraintSet& c, ComplexVec v,
                                            double tol, std::size_t max_passes) {
    if (ch.m() != 1) throw ContractError("null_interference: requires a single-antenna transmitter (M = 1)");
    if (c.kind != ConstraintSet::Kind::ideal_continuous && c.kind != ConstraintSet::Kind::unit_modulus)
        throw ContractError("null_interference: unsupported constraint " + c.name());
    const cplx t = std::conj(ch.h_bs_user[0]);  // <h_d, w> for w = 1
    const std::size_t n_el = ch.n();
    if (n_el == 0) return {ReflectionState({}, c), std::norm(t), {std::norm(t)}};

    ComplexVec f(n_el);
    for (std::size_t n = 0; n < n_el; ++n) f[n] = std::conj(ch.h_irs_user[n]) * ch.g_bs_irs(n, 0);

    NullingResult out;
    cplx sum = t;  // running value, carried across passes
    for (std::size_t n = 0; n < n_el; ++n) sum += f[n] * v[n];
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        for (std::size_t n = 0; n < n_el; ++n) {
            if (f[n] == cplx{0.0, 0.0}) {
                if (c.kind == ConstraintSet::Kind::unit_modulus && v[n] == cplx{0.0, 0.0}) v[n] = 1.0;
                continue;
            }
            const cplx rest = sum - f[n] * v[n];
            cplx vn;
            if (c.kind == ConstraintSet::Kind::ideal_continuous) {
                vn = -rest / f[n];
                const double mag = std::abs(vn);
                if (mag > 1.0) vn /= mag;
            } else {
                const double rest_phase = rest == cplx{0.0, 0.0} ? 0.0 : std::arg(rest);
                vn = std::polar(1.0, std::numbers::pi + rest_phase - std::arg(f[n]));
            }
            // keep the old value unless the computed residual strictly drops,
            // so rounding cannot make the trace tick upwards
            const cplx candidate = rest + f[n] * vn;
            if (std::norm(candidate) < std::norm(sum) || !satisfies(v[n], c)) {
                v[n] = vn;
                sum = candidate;
            }
        }
        const double residual = std::norm(sum);
        const double previous = out.trace.empty() ? 0.0 : out.trace.back();
        out.trace.push_back(residual);
        if (residual == 0.0) break;
        if (out.trace.size() > 1 && previous - residual <= tol * previous) break;
    }

    sum = t;
    for (std::size_t n = 0; n < n_el; ++n) sum += f[n] * v[n];
    out.residual_power = std::norm(sum);
    out.refl = project(v, c);
    return out;
}

}  // namespace detail

/// Minimises the received interference |t + sum_n f_n v_n|^2 of a
/// single-antenna transmitter (t = <h_d, 1>, f_n = conj(h_r,n) G[n,0]) by
/// cyclic coordinate descent with the per-element closed-form minimiser,
/// starting from v = 0. Convex for the ideal_continuous set.
inline NullingResult null_interference(const ChannelRealization& ch, const ConstraintSet& c, double tol = 1e-9,
                                       std::size_t max_passes = 1000) {
    return detail::null_interference_from(ch, c, ComplexVec(ch.n()), tol, max_passes);
}

/// Same, restarted from a caller-supplied feasible point.
inline NullingResult null_interference(const ChannelRealization& ch, const ConstraintSet& c,
                                       std::span<const cplx> start, double tol, std::size_t max_passes) {
    if (start.size() != ch.n()) throw ContractError("null_interference: start length != N");
    for (const cplx& z : start)
        if (!satisfies(z, c)) throw ContractError("null_interference: start point infeasible");
    return detail::null_interference_from(ch, c, ComplexVec(start.begin(), start.end()), tol, max_passes);
}

// --------------------------------------------------------------------------
// Codebook beam training

class Codebook {
public:
    explicit Codebook(std::vector<ReflectionState> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw ContractError("Codebook: must be non-empty");
        for (const auto& e : entries_) {
            if (e.constraint() != entries_.front().constraint())
                throw ContractError("Codebook: entries must share one constraint set");
            if (e.size() != entries_.front().size()) throw ContractError("Codebook: entries must share N");
        }
    }

    const std::vector<ReflectionState>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const ConstraintSet& constraint() const noexcept { return entries_.front().constraint(); }

private:
    std::vector<ReflectionState> entries_;
};

/// Codebook of `k` reflection states with i.i.d. uniform phases projected onto `c`.
inline Codebook random_codebook(std::size_t n, const ConstraintSet& c, std::size_t k, const SeededRng& rng) {
    std::vector<ReflectionState> entries;
    entries.reserve(k);
    for (std::size_t i = 0; i < k; ++i) entries.push_back(project(sample_cscg(rng.substream(i), n), c));
    return Codebook(std::move(entries));
}

struct SweepResult {
    std::size_t best_index = 0;
    double gain_linear = 0.0;
};

/// Trains over every codebook entry and keeps the strongest, lowest index on ties.
inline SweepResult codebook_sweep(const ChannelRealization& ch, std::span<const cplx> w, const Codebook& cb) {
    SweepResult best{0, channel_gain(ch, cb.entries()[0], w)};
    for (std::size_t i = 1; i < cb.size(); ++i) {
        const double g = channel_gain(ch, cb.entries()[i], w);
        if (g > best.gain_linear) best = {i, g};
    }
    return best;
}

// --------------------------------------------------------------------------
// Link budget

/// Transmit power [dBm] needed to reach `snr_target_db` over a channel of
/// power gain `gain_linear` with noise `noise_dbm`.
inline double min_power_for_snr(double gain_linear, double snr_target_db, double noise_dbm) {
    if (!(gain_linear > 0.0)) throw std::domain_error("min_power_for_snr: target SNR unreachable for zero gain");
    return snr_target_db + noise_dbm - linear_to_db(gain_linear);
}

/// Large-N coherent-combining power loss [dB] of uniform b-bit phase quantization.
inline double quantization_loss_bound(unsigned bits) {
    if (bits < 1) throw ContractError("quantization_loss_bound: bits must be >= 1");
    const double levels = std::ldexp(1.0, static_cast<int>(bits));
    return -20.0 * std::log10(levels / std::numbers::pi * std::sin(std::numbers::pi / levels));
}

}  // namespace irs
