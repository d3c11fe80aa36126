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
#include <string>
#include <utility>

#include "irs/channel.hpp"
#include "irs/numerics.hpp"

namespace irs {

/// Feasible set for the per-element reflection coefficients v_n = beta_n e^{j theta_n}.
struct ConstraintSet {
    enum class Kind {
        ideal_continuous,  // beta in [0,1], theta continuous
        unit_modulus,      // beta = 1, theta continuous
        discrete_phase,    // beta = 1, theta on the 2^bits lattice anchored at 0
        absorb,            // beta = 0
    };

    Kind kind = Kind::unit_modulus;
    unsigned bits = 0;  // discrete_phase only

    static ConstraintSet ideal_continuous() { return {Kind::ideal_continuous, 0}; }
    static ConstraintSet unit_modulus() { return {Kind::unit_modulus, 0}; }
    static ConstraintSet absorb() { return {Kind::absorb, 0}; }
    static ConstraintSet discrete_phase(unsigned bits) {
        if (bits < 1 || bits > 16) throw ContractError("discrete_phase: bits must be in [1, 16]");
        return {Kind::discrete_phase, bits};
    }

    std::size_t levels() const { return kind == Kind::discrete_phase ? (std::size_t{1} << bits) : 0; }
    double level_step() const { return 2.0 * std::numbers::pi / static_cast<double>(levels()); }
    cplx level(std::size_t k) const { return std::polar(1.0, level_step() * static_cast<double>(k)); }

    std::string name() const {
        switch (kind) {
            case Kind::ideal_continuous: return "ideal_continuous";
            case Kind::unit_modulus: return "unit_modulus";
            case Kind::discrete_phase: return "discrete_phase(" + std::to_string(bits) + ")";
            case Kind::absorb: return "absorb";
        }
        return "?";
    }

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

/// Index of the lattice level nearest to `phase`; exact ties go to the lower level.
inline std::size_t nearest_level(double phase, unsigned bits) {
    const std::size_t count = std::size_t{1} << bits;
    const double x = wrap_phase(phase) / (2.0 * std::numbers::pi / static_cast<double>(count));
    auto k = static_cast<std::size_t>(std::floor(x));
    if (x - static_cast<double>(k) > 0.5) ++k;
    return k % count;
}

inline bool satisfies(cplx v, const ConstraintSet& c, double tol = 1e-9) {
    const double mag = std::abs(v);
    switch (c.kind) {
        case ConstraintSet::Kind::ideal_continuous: return mag <= 1.0 + tol;
        case ConstraintSet::Kind::unit_modulus: return std::abs(mag - 1.0) <= tol;
        case ConstraintSet::Kind::absorb: return v == cplx{0.0, 0.0};
        case ConstraintSet::Kind::discrete_phase:
            return std::abs(mag - 1.0) <= tol &&
                   std::abs(v - c.level(nearest_level(std::arg(v), c.bits))) <= tol;
    }
    return false;
}

/// Reflection coefficients of all N elements together with the set they lie in.
class ReflectionState {
public:
    ReflectionState() = default;
    ReflectionState(ComplexVec coefficients, ConstraintSet constraint)
        : coefficients_(std::move(coefficients)), constraint_(constraint) {
        for (std::size_t n = 0; n < coefficients_.size(); ++n)
            if (!satisfies(coefficients_[n], constraint_))
                throw ContractError("ReflectionState: element " + std::to_string(n) + " violates " +
                                    constraint_.name());
    }

    static ReflectionState absorbing(std::size_t n) { return {ComplexVec(n), ConstraintSet::absorb()}; }

    const ComplexVec& coefficients() const noexcept { return coefficients_; }
    const ConstraintSet& constraint() const noexcept { return constraint_; }
    std::size_t size() const noexcept { return coefficients_.size(); }

    friend bool operator==(const ReflectionState&, const ReflectionState&) = default;

private:
    ComplexVec coefficients_;
    ConstraintSet constraint_;
};

/// Entrywise nearest point of `c`. Continuous-set entries that are already
/// feasible (to the satisfies() tolerance) are kept as is, so project is idempotent.
inline ReflectionState project(std::span<const cplx> v, const ConstraintSet& c) {
    ComplexVec out(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        const cplx z = v[n];
        const double mag = std::abs(z);
        switch (c.kind) {
            case ConstraintSet::Kind::ideal_continuous: out[n] = satisfies(z, c) ? z : z / mag; break;
            case ConstraintSet::Kind::unit_modulus:
                out[n] = satisfies(z, c) ? z : mag > 0.0 ? z / mag : cplx{1.0, 0.0};
                break;
            case ConstraintSet::Kind::discrete_phase:
                out[n] = mag > 0.0 ? c.level(nearest_level(std::arg(z), c.bits)) : cplx{1.0, 0.0};
                break;
            case ConstraintSet::Kind::absorb: out[n] = cplx{0.0, 0.0}; break;
        }
    }
    return {std::move(out), c};
}

/// Composite channel column h_eff = h_d + G^H diag(v)^H h_r, so that the
/// received amplitude for beamformer w is <h_eff, w> = h_d^H w + h_r^H diag(v) G w.
inline ComplexVec effective_channel(const ChannelRealization& ch, const ReflectionState& refl) {
    const std::size_t n = ch.h_irs_user.size();
    if (refl.size() != n) throw ContractError("effective_channel: reflection length != N");
    if (n > 0 && (ch.g_bs_irs.rows() != n || ch.g_bs_irs.cols() != ch.h_bs_user.size()))
        throw ContractError("effective_channel: G must be N x M");
    ComplexVec h = ch.h_bs_user;
    if (refl.constraint().kind == ConstraintSet::Kind::absorb) return h;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx weight = std::conj(refl.coefficients()[k]) * ch.h_irs_user[k];
        if (weight == cplx{0.0, 0.0}) continue;
        const auto g_row = ch.g_bs_irs.row(k);
        for (std::size_t m = 0; m < h.size(); ++m) h[m] += std::conj(g_row[m]) * weight;
    }
    return h;
}

/// |<h_eff, w>|^2
inline double channel_gain(const ChannelRealization& ch, const ReflectionState& refl, std::span<const cplx> w) {
    return std::norm(inner(effective_channel(ch, refl), w));
}

}  // namespace irs
