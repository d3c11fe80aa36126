// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <cmath>

#include "irs/cli.hpp"
#include "irs/experiments.hpp"

namespace {

irs::ExperimentConfig small(std::size_t realizations, std::uint64_t seed = 3) {
    irs::ExperimentConfig cfg;
    cfg.n_realizations = realizations;
    cfg.master_seed = seed;
    return cfg;
}

TEST(PowerVsDistance, RowsCoverEverySchemeAndAreSorted) {
    auto cfg = small(20);
    cfg.sweep = irs::SweepSpec{"d", {20, 40, 50}};
    const auto res = irs::run_power_vs_distance(cfg, 1);
    ASSERT_EQ(res.rows.size(), 12u);
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        const auto& a = res.rows[i - 1];
        const auto& b = res.rows[i];
        EXPECT_TRUE(a.sweep_value < b.sweep_value || (a.sweep_value == b.sweep_value && a.scheme < b.scheme));
    }
    for (const auto& r : res.rows) {
        EXPECT_EQ(r.metric_unit, "dBm");
        EXPECT_EQ(r.n_realizations, 20u);
        EXPECT_EQ(r.master_seed, 3u);
        EXPECT_TRUE(std::isfinite(r.metric_value));
    }
}

TEST(PowerVsDistance, DirectLinkPowerGrowsWithDistance) {
    auto cfg = small(100);
    cfg.schemes = {"no_irs"};
    const auto res = irs::run_power_vs_distance(cfg, 1);
    for (std::size_t i = 1; i < res.rows.size(); ++i) EXPECT_GT(res.rows[i].metric_value, res.rows[i - 1].metric_value);
}

TEST(PowerVsDistance, IrsProximityDip) {
    auto cfg = small(200);
    cfg.sweep = irs::SweepSpec{"d", {25, 40, 50}};
    cfg.schemes = {"joint"};
    const auto res = irs::run_power_vs_distance(cfg, 1);
    EXPECT_LT(res.find(50, "joint")->metric_value, res.find(40, "joint")->metric_value);
    EXPECT_LT(res.find(25, "joint")->metric_value, res.find(40, "joint")->metric_value);
}

TEST(PowerVsDistance, PerRealizationDominance) {
    const auto res = irs::run_power_vs_distance(small(100), 1);
    for (double d : {20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0}) {
        const auto& joint = res.find_samples(d, "joint")->values;
        const auto& bs_user = res.find_samples(d, "bs_user_mrt")->values;
        const auto& none = res.find_samples(d, "no_irs")->values;
        for (std::size_t r = 0; r < joint.size(); ++r) {
            EXPECT_LE(joint[r], bs_user[r] + 1e-9);
            EXPECT_LE(bs_user[r], none[r] + 1e-9);
        }
        EXPECT_LE(res.find(d, "joint")->metric_value, res.find(d, "bs_user_mrt")->metric_value + 1e-6);
        EXPECT_LE(res.find(d, "bs_user_mrt")->metric_value, res.find(d, "no_irs")->metric_value + 1e-6);
    }
}

TEST(PowerVsDistance, UnknownSchemeIsAConfigError) {
    auto cfg = small(2);
    cfg.schemes = {"joint", "magic"};
    try {
        irs::run_power_vs_distance(cfg, 1);
        FAIL() << "expected ConfigError";
    } catch (const irs::ConfigError& e) {
        EXPECT_EQ(e.code(), irs::ConfigErrorCode::unknown_scheme);
    }
}

TEST(PowerVsDistance, SweepVariableMustMatch) {
    auto cfg = small(2);
    cfg.sweep = irs::SweepSpec{"N", {10, 20}};
    EXPECT_THROW(irs::run_power_vs_distance(cfg, 1), irs::ConfigError);
}

TEST(PowerVsN, LossRowsAndAsymptoticBound) {
    auto cfg = small(100);
    cfg.scenario.m_antennas = 1;
    const auto res = irs::run_power_vs_n(cfg, 1);
    for (double n : {10.0, 25.0, 50.0, 100.0, 150.0, 200.0, 250.0, 300.0}) {
        for (unsigned b : {1u, 2u}) {
            const std::string s = "b" + std::to_string(b);
            const auto* loss = res.find(n, "loss_" + s);
            ASSERT_NE(loss, nullptr);
            EXPECT_EQ(loss->metric_unit, "dB");
            EXPECT_NEAR(loss->metric_value, res.find(n, s)->metric_value - res.find(n, "continuous")->metric_value, 1e-12);
            EXPECT_GE(loss->metric_value, 0.0);
            EXPECT_LE(loss->metric_value, irs::quantization_loss_bound(b) + 0.3);
            // refinement never loses against plain quantization, sample by sample
            const auto& refined = res.find_samples(n, s)->values;
            const auto& nearest = res.find_samples(n, s + "_nearest")->values;
            for (std::size_t r = 0; r < refined.size(); ++r) EXPECT_LE(refined[r], nearest[r] + 1e-9);
        }
    }
}

TEST(PowerVsN, ContinuousDoublingGain) {
    auto cfg = small(200);
    cfg.scenario.m_antennas = 1;
    cfg.sweep = irs::SweepSpec{"N", {150, 300}};
    cfg.schemes = {"continuous"};
    const auto res = irs::run_power_vs_n(cfg, 1);
    EXPECT_NEAR(res.find(300, "continuous")->metric_value - res.find(150, "continuous")->metric_value, -6.0, 0.5);
}

TEST(PowerVsN, RejectsFractionalN) {
    auto cfg = small(2);
    cfg.sweep = irs::SweepSpec{"N", {10, 10.5}};
    EXPECT_THROW(irs::run_power_vs_n(cfg, 1), irs::ConfigError);
}

TEST(InterferenceVsN, OrderingAndFlatBaseline) {
    auto cfg = small(100);
    cfg.scenario.m_antennas = 1;
    const auto res = irs::run_interference_vs_n(cfg, 1);
    const double flat = res.find(20, "no_irs")->metric_value;
    for (double n : {20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0}) {
        const double joint = res.find(n, "joint_amp_phase")->metric_value;
        const double phase = res.find(n, "phase_only")->metric_value;
        const double none = res.find(n, "no_irs")->metric_value;
        EXPECT_LE(joint, phase);
        EXPECT_LE(phase, none);
        EXPECT_EQ(none, flat);
        EXPECT_EQ(res.find(n, "no_irs")->metric_unit, "dB");
    }
}

TEST(InterferenceVsN, NearPerfectCancellationAtSixtyElements) {
    auto cfg = small(100);
    cfg.scenario.m_antennas = 1;
    cfg.sweep = irs::SweepSpec{"N", {60}};
    const auto res = irs::run_interference_vs_n(cfg, 1);
    auto joint = res.find_samples(60, "joint_amp_phase")->values;
    const auto& none = res.find_samples(60, "no_irs")->values;
    std::vector<double> rel(joint.size());
    for (std::size_t r = 0; r < joint.size(); ++r) rel[r] = joint[r] - none[r];
    std::nth_element(rel.begin(), rel.begin() + rel.size() / 2, rel.end());
    EXPECT_LT(rel[rel.size() / 2], -60.0);  // median residual < 1e-6 of the direct interference
}

TEST(InterferenceVsN, RequiresSingleAntenna) {
    auto cfg = small(2);
    cfg.scenario.m_antennas = 5;
    try {
        irs::run_interference_vs_n(cfg, 1);
        FAIL() << "expected ConfigError";
    } catch (const irs::ConfigError& e) {
        EXPECT_EQ(e.code(), irs::ConfigErrorCode::unsupported_setup);
        EXPECT_NE(std::string(e.what()).find("m_antennas = 1"), std::string::npos);
    }
}

TEST(Harness, ReproducibleAndIndependentOfWorkerCount) {
    auto cfg = small(40, 11);
    cfg.sweep = irs::SweepSpec{"d", {30, 50}};
    const auto serial = irs::to_csv(irs::run_power_vs_distance(cfg, 1));
    EXPECT_EQ(serial, irs::to_csv(irs::run_power_vs_distance(cfg, 1)));
    EXPECT_EQ(serial, irs::to_csv(irs::run_power_vs_distance(cfg, 4)));
    EXPECT_EQ(serial, irs::to_csv(irs::run_power_vs_distance(cfg, 13)));
    cfg.master_seed = 12;
    EXPECT_NE(serial, irs::to_csv(irs::run_power_vs_distance(cfg, 1)));
}

TEST(Harness, RealizationsArePairedAcrossSweepPoints) {
    // The direct link of realization r is the same draw at every sweep point.
    irs::ScenarioConfig a, b;
    b.n_elements = 300;
    const auto ca = irs::realize(a, irs::realization_rng(5, 17));
    const auto cb = irs::realize(b, irs::realization_rng(5, 17));
    EXPECT_EQ(ca.h_bs_user, cb.h_bs_user);
    EXPECT_TRUE(std::equal(ca.h_irs_user.begin(), ca.h_irs_user.end(), cb.h_irs_user.begin()));
}

}  // namespace
