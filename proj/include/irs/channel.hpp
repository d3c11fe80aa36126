// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include "irs/numerics.hpp"

namespace irs {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Link geometry and propagation parameters. Positions in meters; the user's
/// x-coordinate is the horizontal BS-user distance d.
struct ScenarioConfig {
    Point2 bs_position{0.0, 0.0};
    Point2 irs_position{50.0, 2.0};
    Point2 user_position{50.0, 0.0};
    std::size_t m_antennas = 5;
    std::size_t n_elements = 40;  // 0 means no IRS
    double pl_exponent_bs_irs = 2.2;
    double pl_exponent_bs_user = 3.2;
    double pl_exponent_irs_user = 3.2;
    double c0_db = -30.0;  // path loss at 1 m
    double noise_power_dbm = -80.0;
    double antenna_spacing_wavelengths = 0.5;

    /// Throws std::domain_error naming the first violated field.
    void validate() const {
        if (m_antennas < 1) throw std::domain_error("m_antennas: must be >= 1");
        if (!(pl_exponent_bs_irs > 0.0)) throw std::domain_error("pl_exponent_bs_irs: must be > 0");
        if (!(pl_exponent_bs_user > 0.0)) throw std::domain_error("pl_exponent_bs_user: must be > 0");
        if (!(pl_exponent_irs_user > 0.0)) throw std::domain_error("pl_exponent_irs_user: must be > 0");
        if (!(antenna_spacing_wavelengths > 0.0)) throw std::domain_error("antenna_spacing_wavelengths: must be > 0");
        if (!(distance(bs_position, user_position) > 0.0))
            throw std::domain_error("bs_position/user_position: coincident points");
        if (!(distance(bs_position, irs_position) > 0.0))
            throw std::domain_error("bs_position/irs_position: coincident points");
        if (!(distance(irs_position, user_position) > 0.0))
            throw std::domain_error("irs_position/user_position: coincident points");
    }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// One draw of the three links.
struct ChannelRealization {
    ComplexMat g_bs_irs;    // N x M
    ComplexVec h_irs_user;  // N
    ComplexVec h_bs_user;   // M

    std::size_t m() const noexcept { return h_bs_user.size(); }
    std::size_t n() const noexcept { return h_irs_user.size(); }
};

/// Linear power gain 10^(c0/10) * distance^(-exponent).
inline double path_loss(double distance_m, double exponent, double c0_db) {
    if (!(distance_m > 0.0))
        throw std::domain_error("path_loss: distance must be positive, got " + std::to_string(distance_m));
    return db_to_linear(c0_db) * std::pow(distance_m, -exponent);
}

/// Uniform linear array response exp(-j 2 pi s k cos(psi)), k = 0..n-1.
inline ComplexVec ula_response(std::size_t n, double spacing_wavelengths, double cos_psi) {
    ComplexVec a(n);
    for (std::size_t k = 0; k < n; ++k)
        a[k] = std::polar(1.0, -2.0 * std::numbers::pi * spacing_wavelengths * static_cast<double>(k) * cos_psi);
    return a;
}

/// Line-of-sight BS-IRS channel sqrt(PL) * a_irs * a_bs^H. Both arrays lie
/// along the x-axis; angles are taken from the BS-IRS direction.
inline ComplexMat gen_bs_irs_los(const ScenarioConfig& cfg) {
    if (cfg.n_elements < 1) throw std::domain_error("gen_bs_irs_los: requires at least one element");
    if (cfg.m_antennas < 1) throw std::domain_error("gen_bs_irs_los: requires at least one antenna");
    const double dist = distance(cfg.bs_position, cfg.irs_position);
    if (!(dist > 0.0)) throw std::domain_error("gen_bs_irs_los: BS and IRS coincide");
    const double cos_depart = (cfg.irs_position.x - cfg.bs_position.x) / dist;
    const double cos_arrive = -cos_depart;
    const ComplexVec a_bs = ula_response(cfg.m_antennas, cfg.antenna_spacing_wavelengths, cos_depart);
    const ComplexVec a_irs = ula_response(cfg.n_elements, cfg.antenna_spacing_wavelengths, cos_arrive);
    const double amp = std::sqrt(path_loss(dist, cfg.pl_exponent_bs_irs, cfg.c0_db));
    ComplexMat g = ComplexMat::outer(a_irs, a_bs);
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) *= amp;
    return g;
}

/// Rayleigh-faded link: sqrt(pl) * CN(0, I_n).
inline ComplexVec gen_rayleigh(double pl_linear, std::size_t n, const SeededRng& rng) {
    if (!(pl_linear > 0.0)) throw std::domain_error("gen_rayleigh: path loss must be positive");
    return scaled(sample_cscg(rng, n), std::sqrt(pl_linear));
}

/// Draws (G, h_r, h_d) for one Monte Carlo index. The direct and reflected
/// user links use separate substreams of `rng`.
inline ChannelRealization realize(const ScenarioConfig& cfg, const SeededRng& rng) {
    cfg.validate();
    ChannelRealization ch;
    const double pl_direct =
        path_loss(distance(cfg.bs_position, cfg.user_position), cfg.pl_exponent_bs_user, cfg.c0_db);
    ch.h_bs_user = gen_rayleigh(pl_direct, cfg.m_antennas, rng.substream(0));
    if (cfg.n_elements == 0) {
        ch.g_bs_irs = ComplexMat(0, cfg.m_antennas);
        return ch;
    }
    ch.g_bs_irs = gen_bs_irs_los(cfg);
    const double pl_reflect =
        path_loss(distance(cfg.irs_position, cfg.user_position), cfg.pl_exponent_irs_user, cfg.c0_db);
    ch.h_irs_user = gen_rayleigh(pl_reflect, cfg.n_elements, rng.substream(1));
    return ch;
}

}  // namespace irs
