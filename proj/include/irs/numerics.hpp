// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irs {

using cplx = std::complex<double>;

/// Dense complex column vector. Entries are dimensionless amplitudes.
using ComplexVec = std::vector<cplx>;

/// Raised when a caller breaks a shape or argument contract.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline bool all_finite(std::span<const cplx> v) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

/// Hermitian inner product <a,b> = sum conj(a_i) b_i.
inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw ContractError("inner: length mismatch");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

inline double norm_sq(std::span<const cplx> v) {
    double acc = 0.0;
    for (const auto& z : v) acc += std::norm(z);
    return acc;
}

inline double norm(std::span<const cplx> v) { return std::sqrt(norm_sq(v)); }

inline ComplexVec scaled(std::span<const cplx> v, cplx s) {
    ComplexVec out(v.begin(), v.end());
    for (auto& z : out) z *= s;
    return out;
}

/// Dense complex matrix, row-major.
class ComplexMat {
public:
    ComplexMat() = default;
    ComplexMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ComplexMat(std::size_t rows, std::size_t cols, std::vector<cplx> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) throw ContractError("ComplexMat: entry count != rows*cols");
    }

    /// Outer product u v^H.
    static ComplexMat outer(std::span<const cplx> u, std::span<const cplx> v) {
        ComplexMat m(u.size(), v.size());
        for (std::size_t r = 0; r < u.size(); ++r)
            for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = u[r] * std::conj(v[c]);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> entries() const { return data_; }

    /// A x
    ComplexVec apply(std::span<const cplx> x) const {
        if (x.size() != cols_) throw ContractError("ComplexMat::apply: length mismatch");
        ComplexVec y(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            cplx acc{0.0, 0.0};
            for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
            y[r] = acc;
        }
        return y;
    }

    /// A^H y
    ComplexVec apply_adjoint(std::span<const cplx> y) const {
        if (y.size() != rows_) throw ContractError("ComplexMat::apply_adjoint: length mismatch");
        ComplexVec x(cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) x[c] += std::conj((*this)(r, c)) * y[r];
        return x;
    }

    double frobenius_sq() const { return norm_sq(data_); }

    friend bool operator==(const ComplexMat&, const ComplexMat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Principal right singular vector of A (unit norm), by power iteration on A^H A.
/// The phase is fixed so that the first non-negligible entry is real positive.
inline ComplexVec principal_right_singular(const ComplexMat& a, int max_iter = 500, double tol = 1e-14) {
    if (a.cols() == 0) throw ContractError("principal_right_singular: no columns");
    ComplexVec x(a.cols(), cplx{1.0, 0.0});
    // Seed with the row of largest energy so rank-one inputs converge in one step.
    double best = -1.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double e = norm_sq(a.row(r));
        if (e > best) {
            best = e;
            for (std::size_t c = 0; c < a.cols(); ++c) x[c] = std::conj(a(r, c));
        }
    }
    if (!(norm(x) > 0.0)) throw std::domain_error("principal_right_singular: zero matrix");
    x = scaled(x, 1.0 / norm(x));
    for (int it = 0; it < max_iter; ++it) {
        ComplexVec y = a.apply_adjoint(a.apply(x));
        const double ny = norm(y);
        if (!(ny > 0.0)) throw std::domain_error("principal_right_singular: zero matrix");
        y = scaled(y, 1.0 / ny);
        const double change = std::abs(1.0 - std::abs(inner(x, y)));
        x = std::move(y);
        if (change < tol) break;
    }
    for (const auto& z : x) {
        if (std::abs(z) > 1e-12) {
            const cplx rot = std::conj(z) / std::abs(z);
            for (auto& e : x) e *= rot;
            break;
        }
    }
    return x;
}

// --------------------------------------------------------------------------
// Random streams

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Key of an independent random stream. A stream is fully determined by
/// (master_seed, stream_id); the key is a value and is copied per use.
struct SeededRng {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    /// Child stream, e.g. one per channel link within a realization.
    SeededRng substream(std::uint64_t child) const {
        return {detail::splitmix64(master_seed ^ detail::splitmix64(stream_id + 0x5851f42d4c957f2dULL)), child};
    }

    std::mt19937_64 engine() const {
        const std::uint64_t a = detail::splitmix64(master_seed);
        const std::uint64_t b = detail::splitmix64(a ^ stream_id);
        const std::uint64_t c = detail::splitmix64(b + 0x632be59bd9b4e019ULL);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        return std::mt19937_64(seq);
    }

    friend bool operator==(const SeededRng&, const SeededRng&) = default;
};

/// n i.i.d. CN(0,1) samples: real and imaginary parts each N(0, 1/2).
inline ComplexVec sample_cscg(const SeededRng& rng, std::size_t n) {
    ComplexVec out(n);
    if (n == 0) return out;
    auto eng = rng.engine();
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    for (auto& z : out) {
        const double re = gauss(eng);
        const double im = gauss(eng);
        z = {re, im};
    }
    return out;
}

// --------------------------------------------------------------------------
// Units

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

inline double linear_to_db(double x) {
    if (!(x > 0.0)) throw std::domain_error("linear_to_db: argument must be positive, got " + std::to_string(x));
    return 10.0 * std::log10(x);
}

inline double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

}  // namespace irs
