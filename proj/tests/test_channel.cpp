// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <cmath>

#include "irs/channel.hpp"

namespace {

using irs::ScenarioConfig;

TEST(PathLoss, ReferenceDistanceIdentity) {
    for (double alpha : {2.0, 2.2, 3.2}) EXPECT_NEAR(irs::path_loss(1.0, alpha, -30.0), 1e-3, 1e-18);
}

TEST(PathLoss, DirectFormula) {
    EXPECT_NEAR(irs::path_loss(100.0, 2.0, -30.0), 1e-7, 1e-20);
    EXPECT_NEAR(irs::linear_to_db(irs::path_loss(100.0, 2.0, -30.0)), -70.0, 1e-10);
}

TEST(PathLoss, DoublingDistanceCostsExponentTimesThreeDb) {
    const double ratio_db =
        irs::linear_to_db(irs::path_loss(20.0, 3.2, -30.0)) - irs::linear_to_db(irs::path_loss(40.0, 3.2, -30.0));
    EXPECT_NEAR(ratio_db, 3.2 * 10.0 * std::log10(2.0), 1e-10);
    EXPECT_NEAR(ratio_db, 9.63, 0.005);
}

TEST(PathLoss, RejectsNonPositiveDistance) {
    EXPECT_THROW(irs::path_loss(0.0, 2.0, -30.0), std::domain_error);
    EXPECT_THROW(irs::path_loss(-3.0, 2.0, -30.0), std::domain_error);
}

TEST(LosChannel, ScalarCase) {
    ScenarioConfig cfg;
    cfg.m_antennas = 1;
    cfg.n_elements = 1;
    const auto g = irs::gen_bs_irs_los(cfg);
    ASSERT_EQ(g.rows(), 1u);
    ASSERT_EQ(g.cols(), 1u);
    const double pl = irs::path_loss(irs::distance(cfg.bs_position, cfg.irs_position), 2.2, -30.0);
    EXPECT_NEAR(std::abs(g(0, 0)), std::sqrt(pl), 1e-15);
}

TEST(LosChannel, RankOneWithAnalyticFrobeniusNorm) {
    for (auto [m, n] : {std::pair{5u, 40u}, std::pair{3u, 7u}, std::pair{1u, 300u}, std::pair{8u, 1u}}) {
        ScenarioConfig cfg;
        cfg.m_antennas = m;
        cfg.n_elements = n;
        const auto g = irs::gen_bs_irs_los(cfg);
        ASSERT_EQ(g.rows(), n);
        ASSERT_EQ(g.cols(), m);
        const double pl = irs::path_loss(irs::distance(cfg.bs_position, cfg.irs_position), 2.2, cfg.c0_db);
        EXPECT_NEAR(g.frobenius_sq(), n * m * pl, 1e-9 * n * m * pl);
        // Rank one: every row is a multiple of row 0, so the residual after
        // projecting onto row 0 bounds the second singular value.
        const auto r0 = g.row(0);
        const double r0n = irs::norm(r0);
        double residual = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const auto row = g.row(r);
            const irs::cplx coef = irs::inner(r0, row) / (r0n * r0n);
            for (std::size_t c = 0; c < m; ++c) residual += std::norm(row[c] - coef * r0[c]);
        }
        EXPECT_LT(std::sqrt(residual), 1e-10 * std::sqrt(g.frobenius_sq()));
    }
}

TEST(LosChannel, DegenerateInputs) {
    ScenarioConfig cfg;
    cfg.n_elements = 0;
    EXPECT_THROW(irs::gen_bs_irs_los(cfg), std::domain_error);
    cfg.n_elements = 4;
    cfg.irs_position = cfg.bs_position;
    EXPECT_THROW(irs::gen_bs_irs_los(cfg), std::domain_error);
}

TEST(Rayleigh, UnitMeanPowerPerEntry) {
    constexpr std::size_t draws = 100000;
    const auto h = irs::gen_rayleigh(1.0, draws, {7, 0});
    EXPECT_NEAR(irs::norm_sq(h) / draws, 1.0, 0.01);
}

TEST(Rayleigh, ScalingAndDeterminism) {
    const auto unit = irs::gen_rayleigh(1.0, 64, {7, 1});
    const auto quarter = irs::gen_rayleigh(0.25, 64, {7, 1});
    for (std::size_t i = 0; i < unit.size(); ++i) EXPECT_NEAR(std::abs(quarter[i] - 0.5 * unit[i]), 0.0, 1e-15);
    EXPECT_EQ(irs::gen_rayleigh(0.25, 64, {7, 1}), quarter);
    EXPECT_THROW(irs::gen_rayleigh(0.0, 3, {7, 1}), std::domain_error);
}

TEST(Realize, NoIrsHasOnlyDirectLink) {
    ScenarioConfig cfg;
    cfg.n_elements = 0;
    const auto ch = irs::realize(cfg, {1, 0});
    EXPECT_EQ(ch.h_bs_user.size(), cfg.m_antennas);
    EXPECT_TRUE(ch.h_irs_user.empty());
    EXPECT_TRUE(ch.g_bs_irs.empty());
}

TEST(Realize, ShapesMatchConfig) {
    for (std::size_t m : {1u, 2u, 5u})
        for (std::size_t n : {1u, 3u, 40u}) {
            ScenarioConfig cfg;
            cfg.m_antennas = m;
            cfg.n_elements = n;
            const auto ch = irs::realize(cfg, {m, n});
            EXPECT_EQ(ch.g_bs_irs.rows(), n);
            EXPECT_EQ(ch.g_bs_irs.cols(), m);
            EXPECT_EQ(ch.h_irs_user.size(), n);
            EXPECT_EQ(ch.h_bs_user.size(), m);
        }
}

TEST(Realize, LinkGainsMatchPathLossStatistically) {
    ScenarioConfig cfg;  // M = 5, N = 40, user at d = 50
    constexpr std::size_t reps = 10000;
    double direct = 0.0, reflect = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto ch = irs::realize(cfg, {99, r});
        direct += irs::norm_sq(ch.h_bs_user);
        reflect += irs::norm_sq(ch.h_irs_user);
    }
    const double pl_d = irs::path_loss(irs::distance(cfg.bs_position, cfg.user_position), 3.2, cfg.c0_db);
    const double pl_r = irs::path_loss(irs::distance(cfg.irs_position, cfg.user_position), 3.2, cfg.c0_db);
    EXPECT_NEAR(direct / reps, cfg.m_antennas * pl_d, 0.02 * cfg.m_antennas * pl_d);
    EXPECT_NEAR(reflect / reps, cfg.n_elements * pl_r, 0.02 * cfg.n_elements * pl_r);
}

TEST(Realize, UserPositionDoesNotTouchBsIrsLink) {
    ScenarioConfig near, far;
    far.user_position = {25.0, 0.0};
    const auto a = irs::realize(near, {5, 5});
    const auto b = irs::realize(far, {5, 5});
    EXPECT_EQ(a.g_bs_irs, b.g_bs_irs);
    EXPECT_NE(a.h_bs_user, b.h_bs_user);
}

TEST(Scenario, ValidateRejectsBadGeometry) {
    ScenarioConfig cfg;
    cfg.user_position = cfg.irs_position;
    EXPECT_THROW(cfg.validate(), std::domain_error);
    cfg = {};
    cfg.m_antennas = 0;
    EXPECT_THROW(cfg.validate(), std::domain_error);
    cfg = {};
    cfg.pl_exponent_bs_user = 0.0;
    EXPECT_THROW(cfg.validate(), std::domain_error);
}

}  // namespace
