#include <cmath>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>
#include <json.hpp>

#include "golden.hpp"
#include "pendula/errors.hpp"
#include "pendula/fixed_compare.hpp"
#include "pendula/fixed_point.hpp"
#include "pendula/serialization.hpp"

using namespace pendula;
using namespace pendula::fixed;

namespace {

constexpr double kPi = std::numbers::pi;
const QFormat kQ16{32, 16};

// Max |lut(theta) - sin(theta)| over `points` evenly spaced angles in [-pi, pi).
double sweep_error(const SineLut& lut, int points) {
    const QFormat& q = lut.format();
    double worst = 0.0;
    for (int k = 0; k < points; ++k) {
        const double theta = -kPi + 2.0 * kPi * k / points;
        worst = std::max(worst, std::abs(from_fixed(lut_sin(to_fixed(theta, q), lut), q) - std::sin(theta)));
    }
    return worst;
}

}  // namespace

TEST(QFormat, Conversions) {
    EXPECT_EQ(to_fixed(0.0, kQ16), 0);
    EXPECT_EQ(to_fixed(1.0, kQ16), 65536);
    EXPECT_EQ(to_fixed(kPi, kQ16), 205887);
    EXPECT_EQ(to_fixed(-kPi, kQ16), -205887);
    EXPECT_EQ(from_fixed(65536, kQ16), 1.0);
    EXPECT_EQ(to_fixed(0.5 / 65536.0, kQ16), 1);  // ties away from zero
    EXPECT_EQ(to_fixed(-0.5 / 65536.0, kQ16), -1);
}

TEST(QFormat, SaturatesOnConversion) {
    EXPECT_EQ(to_fixed(1e9, kQ16), kQ16.max_raw());
    EXPECT_EQ(to_fixed(-1e9, kQ16), kQ16.min_raw());
    EXPECT_EQ(to_fixed(INFINITY, kQ16), kQ16.max_raw());
    EXPECT_THROW(to_fixed(NAN, kQ16), std::domain_error);
}

TEST(QFormat, Validation) {
    EXPECT_THROW((QFormat{1, 0}.validate()), ConfigError);
    EXPECT_THROW((QFormat{64, 16}.validate()), ConfigError);
    EXPECT_THROW((QFormat{16, 16}.validate()), ConfigError);
    EXPECT_NO_THROW((QFormat{62, 30}.validate()));
    EXPECT_EQ(kQ16.resolution(), std::ldexp(1.0, -16));
}

TEST(Arithmetic, MultiplyRoundsToNearest) {
    Arithmetic m(kQ16);
    EXPECT_EQ(m.mul(to_fixed(1.5, kQ16), to_fixed(2.0, kQ16)), to_fixed(3.0, kQ16));
    EXPECT_EQ(m.mul(1, 32768), 1);    // 0.5 ulp rounds up
    EXPECT_EQ(m.mul(-1, 32768), -1);  // and away from zero when negative
    EXPECT_EQ(m.mul(1, 32767), 0);
    EXPECT_EQ(m.saturations(), 0u);
}

TEST(Arithmetic, SaturationsAreCounted) {
    Arithmetic m(kQ16);
    EXPECT_EQ(m.add(kQ16.max_raw(), 1), kQ16.max_raw());
    EXPECT_EQ(m.sub(kQ16.min_raw(), 1), kQ16.min_raw());
    EXPECT_EQ(m.neg(kQ16.min_raw()), kQ16.max_raw());
    EXPECT_EQ(m.mul(to_fixed(200.0, kQ16), to_fixed(200.0, kQ16)), kQ16.max_raw());
    EXPECT_EQ(m.saturations(), 4u);
    EXPECT_EQ(m.quantize(1e6), kQ16.max_raw());
    EXPECT_EQ(m.saturations(), 5u);
}

TEST(SineLut, Construction) {
    EXPECT_THROW(SineLut(1000, kQ16), ConfigError);
    EXPECT_THROW(SineLut(1, kQ16), ConfigError);
    EXPECT_THROW(SineLut(256, QFormat{8, 6}), ConfigError);  // cannot hold 2 pi
    const SineLut lut(1024, kQ16);
    EXPECT_EQ(lut.size(), 1024u);
    EXPECT_EQ(lut.pi_raw(), 205887);
}

TEST(LutSin, ZeroIsWithinBinEdge) {
    const SineLut lut(1024, kQ16);
    EXPECT_LE(std::abs(from_fixed(lut_sin(0, lut), kQ16)), std::sin(kPi / 1024) + kQ16.resolution());
    EXPECT_LE(std::abs(from_fixed(lut_sin(0, lut), kQ16)), 0.00307 + kQ16.resolution());
}

TEST(LutSin, QuarterTurn) {
    const SineLut lut(1024, kQ16);
    const double v = from_fixed(lut_sin(to_fixed(kPi / 2, kQ16), lut), kQ16);
    EXPECT_GE(v, 1.0 - 0.0031 - std::ldexp(1.0, -16));
    EXPECT_LE(v, 1.0);
}

TEST(LutSin, WrapIdentity) {
    for (std::size_t size : {256u, 1024u}) {
        const SineLut lut(size, kQ16);
        const Raw three_pi = to_fixed(3 * kPi, kQ16);
        EXPECT_EQ(lut_sin(three_pi, lut), lut_sin(three_pi - lut.two_pi_raw(), lut));
        for (Raw theta : {Raw{0}, Raw{12345}, Raw{-98765}, lut.pi_raw(), -lut.pi_raw()})
            for (int k : {-3, -1, 1, 2, 5})
                EXPECT_EQ(lut_sin(theta, lut), lut_sin(theta + k * lut.two_pi_raw(), lut));
    }
}

TEST(LutSin, ErrorBoundOverSweep) {
    for (const QFormat q : {QFormat{32, 16}, QFormat{32, 24}, QFormat{48, 30}})
        for (std::size_t size : {256u, 1024u, 65536u}) {
            const SineLut lut(size, q);
            const double bound = kPi / static_cast<double>(size) + q.resolution();
            EXPECT_LE(lut.error_bound(), bound);
            EXPECT_LE(sweep_error(lut, 1'000'000), bound) << "size " << size << " frac " << q.frac_bits;
        }
}

TEST(LutSin, WrappedSweepAddsOnlyModulusDrift) {
    // Beyond one turn the integer 2 pi differs from the true period by under
    // half an LSB per wrap.
    const SineLut lut(1024, kQ16);
    double worst = 0.0;
    for (int k = 0; k < 1'000'000; ++k) {
        const double theta = -4.0 * kPi + 8.0 * kPi * k / 1'000'000;
        worst = std::max(worst, std::abs(from_fixed(lut_sin(to_fixed(theta, kQ16), lut), kQ16) - std::sin(theta)));
    }
    EXPECT_LE(worst, kPi / 1024 + kQ16.resolution() * (1.0 + 2 * 0.5));
}

TEST(LutSin, InterpolationIsTighter) {
    const SineLut nearest(256, kQ16);
    const SineLut blended(256, kQ16, true);
    const double e = sweep_error(blended, 200'000);
    EXPECT_LE(e, blended.error_bound());
    EXPECT_LT(e, sweep_error(nearest, 200'000));
}

TEST(FixedStep, NearEquilibrium) {
    const SineLut lut(1024, kQ16);
    Arithmetic m(kQ16);
    const auto fp = FixedParams::quantize(PendulumParams{}, kQ16);
    const auto r = step_pendulum_fixed({0, 0}, fp, 0, to_fixed(0.1, kQ16), lut, m);
    EXPECT_FALSE(r.spiked);
    EXPECT_LE(std::abs(from_fixed(r.state.dtheta, kQ16)), lut.error_bound());
    EXPECT_EQ(m.saturations(), 0u);
}

TEST(FixedStep, ThresholdAndReset) {
    const SineLut lut(1024, kQ16);
    Arithmetic m(kQ16);
    const auto fp = FixedParams::quantize(PendulumParams{}, kQ16);
    const auto r = step_pendulum_fixed({to_fixed(3.2, kQ16), to_fixed(1.0, kQ16)}, fp, 0, to_fixed(0.1, kQ16), lut, m);
    EXPECT_TRUE(r.spiked);
    EXPECT_EQ(r.state, (FixedState{0, 0}));
}

TEST(FixedStep, DisabledThresholdNeverFires) {
    const auto fp = FixedParams::quantize(PendulumParams{}.without_threshold(), kQ16);
    EXPECT_FALSE(fp.threshold_enabled);
    const SineLut lut(1024, kQ16);
    Arithmetic m(kQ16);
    const auto r = step_pendulum_fixed({to_fixed(3.2, kQ16), to_fixed(1.0, kQ16)}, fp, 0, to_fixed(0.1, kQ16), lut, m);
    EXPECT_FALSE(r.spiked);
}

TEST(FixedPath, MirrorsFloatOrdering) {
    // With a fine format and table, the fixed path tracks the float Euler path closely.
    const auto setup = reference_sinusoid_setup();
    const auto report = compare_fixed_vs_float(setup.params, setup.input, setup.sim, QFormat{62, 40}, 1u << 20, true);
    EXPECT_EQ(report.count_diff, 0);
    EXPECT_LT(report.max_theta_err, 1e-3);
}

TEST(FixedPath, Q16Fidelity) {
    const auto setup = reference_sinusoid_setup();
    const auto report = compare_fixed_vs_float(setup.params, setup.input, setup.sim, kQ16, 1024);
    EXPECT_LE(std::abs(report.count_diff), 1);
    EXPECT_LE(report.max_abs_spike_dev(), 2.0);
    EXPECT_EQ(report.saturations, 0u);
}

TEST(FixedPath, CoarserFormatDivergesMore) {
    const auto setup = reference_sinusoid_setup();
    const auto f8 = compare_fixed_vs_float(setup.params, setup.input, setup.sim, QFormat{32, 8}, 1024);
    const auto f16 = compare_fixed_vs_float(setup.params, setup.input, setup.sim, kQ16, 1024);
    EXPECT_GT(f8.max_theta_err, f16.max_theta_err);
}

TEST(FixedPath, NearExactLimit) {
    const auto setup = reference_sinusoid_setup();
    const auto report = compare_fixed_vs_float(setup.params, setup.input, setup.sim, QFormat{62, 30}, 65536);
    EXPECT_EQ(report.count_diff, 0);
    EXPECT_LE(report.max_abs_spike_dev(), setup.sim.dt_ms + 1e-9);
    EXPECT_EQ(report.saturations, 0u);
}

TEST(FixedPath, NarrowFormatSaturates) {
    const auto setup = reference_sinusoid_setup();
    const auto narrow = simulate_fixed(setup.params, setup.input, setup.sim, QFormat{16, 12}, 256);
    const auto wide = simulate_fixed(setup.params, setup.input, setup.sim, QFormat{32, 12}, 256);
    EXPECT_EQ(wide.saturations, 0u);
    EXPECT_GE(narrow.saturations, wide.saturations);
}

TEST(FixedPath, Deterministic) {
    const auto setup = reference_sinusoid_setup();
    const auto a = simulate_fixed(setup.params, setup.input, setup.sim, kQ16, 1024);
    const auto b = simulate_fixed(setup.params, setup.input, setup.sim, kQ16, 1024);
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(a.spikes, b.spikes);
}

TEST(Compare, ControlIsAllZero) {
    const auto setup = reference_sinusoid_setup();
    const auto r = compare_float_vs_float(setup.params, setup.input, setup.sim);
    EXPECT_EQ(r.max_theta_err, 0.0);
    EXPECT_EQ(r.count_diff, 0);
    EXPECT_EQ(r.saturations, 0u);
    for (double d : r.spike_time_devs) EXPECT_EQ(d, 0.0);
    EXPECT_EQ(r.max_abs_spike_dev(), 0.0);
}

TEST(Compare, PairsSpikesByIndex) {
    SpikeTrain a, b;
    a.events = {{0, 1.0, 10}, {0, 3.0, 30}, {0, 5.0, 50}};
    b.events = {{0, 1.2, 12}, {0, 2.9, 29}};
    const std::vector<double> theta(60, 0.0);
    const auto r = compare_runs(theta, a, theta, b);
    ASSERT_EQ(r.spike_time_devs.size(), 2u);
    EXPECT_NEAR(r.spike_time_devs[0], -0.2, 1e-12);
    EXPECT_NEAR(r.spike_time_devs[1], 0.1, 1e-12);
    EXPECT_EQ(r.count_diff, 1);
}

TEST(Compare, MatchesArchivedReport) {
    const auto setup = reference_sinusoid_setup();
    const auto report = compare_fixed_vs_float(setup.params, setup.input, setup.sim, kQ16, 1024);
    std::ifstream in(golden::path("fixed_q16_16_lut1024.json"));
    ASSERT_TRUE(in.good());
    const auto want = nlohmann::json::parse(in);
    EXPECT_EQ(error_report_to_json(report), want);
}
