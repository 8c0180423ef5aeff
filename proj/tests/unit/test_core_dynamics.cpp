#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "golden.hpp"
#include "pendula/errors.hpp"
#include "pendula/neuron_models.hpp"
#include "pendula/simulation.hpp"

using namespace pendula;

namespace {

constexpr double kPi = std::numbers::pi;

PendulumParams free_pendulum(double gamma = 0.05) {
    PendulumParams p;
    p.gamma = gamma;
    return p.without_threshold();
}

SimConfig rk4_fine(double duration) {
    SimConfig s;
    s.duration_ms = duration;
    s.dt_ms = 0.001;
    s.integrator = Integrator::Rk4;
    return s;
}

// Times at which theta crosses zero (linear interpolation between rows).
std::vector<double> zero_crossings(const TraceRecord& tr, double theta0, double dt) {
    std::vector<double> out;
    double prev_t = 0.0, prev = theta0;
    for (const auto& r : tr.rows) {
        if ((prev > 0.0) != (r.theta > 0.0)) out.push_back(prev_t + dt * prev / (prev - r.theta));
        prev_t = r.t;
        prev = r.theta;
    }
    return out;
}

}  // namespace

TEST(PendulumDerivatives, EquilibriumIsZero) {
    const auto d = pendulum_derivatives({0.0, 0.0}, PendulumParams{}, 0.0);
    EXPECT_EQ(d.dtheta, 0.0);
    EXPECT_EQ(d.ddtheta, 0.0);
}

TEST(PendulumDerivatives, QuarterTurnPullsBack) {
    const auto d = pendulum_derivatives({kPi / 2, 0.0}, PendulumParams{}, 0.0);
    EXPECT_EQ(d.dtheta, 0.0);
    EXPECT_DOUBLE_EQ(d.ddtheta, -1.0);
}

TEST(PendulumDerivatives, DampingAndDrive) {
    const auto d = pendulum_derivatives({0.0, 1.0}, PendulumParams{}, 1.2);
    EXPECT_EQ(d.dtheta, 1.0);
    EXPECT_NEAR(d.ddtheta, 1.15, 1e-15);
}

TEST(PendulumDerivatives, RejectsNonFinite) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(pendulum_derivatives({nan, 0.0}, PendulumParams{}, 0.0), std::domain_error);
    EXPECT_THROW(pendulum_derivatives({0.0, 0.0}, PendulumParams{}, INFINITY), std::domain_error);
}

TEST(EulerStep, FirstStepFromRest) {
    const auto r = step_pendulum_euler({0.0, 0.0}, PendulumParams{}, 1.2, 0.1);
    EXPECT_FALSE(r.spiked);
    EXPECT_DOUBLE_EQ(r.state.dtheta, 0.12);
    EXPECT_DOUBLE_EQ(r.state.theta, 0.012);
}

TEST(EulerStep, UsesNewVelocityForPhase) {
    // Explicit Euler would give theta = 0.5 + 1.0 * 0.1.
    const NeuronState s{0.5, 1.0};
    const auto r = step_pendulum_euler(s, PendulumParams{}, 0.0, 0.1);
    const double dd = -0.05 * 1.0 - std::sin(0.5);
    EXPECT_EQ(r.state.dtheta, 1.0 + dd * 0.1);
    EXPECT_EQ(r.state.theta, 0.5 + (1.0 + dd * 0.1) * 0.1);
}

TEST(EulerStep, PastThresholdResets) {
    for (double v : {-5.0, 0.0, 3.0}) {
        const auto r = step_pendulum_euler({3.20, v}, PendulumParams{}, 0.0, 0.1);
        // v = -5 swings back below pi within the step
        if (3.20 + (v + (-0.05 * v - std::sin(3.20)) * 0.1) * 0.1 < kPi) continue;
        EXPECT_TRUE(r.spiked);
        EXPECT_EQ(r.state, (NeuronState{0.0, 0.0}));
    }
}

TEST(EulerStep, ThresholdIsInclusive) {
    PendulumParams p;
    p.gamma = 0.0;
    p.omega0 = 0.0;
    p.threshold_theta = 1.0;
    const auto r = step_pendulum_euler({0.0, 0.0}, p, 100.0, 0.1);  // theta' = 1 exactly
    EXPECT_TRUE(r.spiked);
}

TEST(EulerStep, NegativeSwingNeverSpikes) {
    const auto r = step_pendulum_euler({-3.5, -2.0}, PendulumParams{}, 0.0, 0.1);
    EXPECT_FALSE(r.spiked);
}

TEST(EulerStep, CustomResetState) {
    PendulumParams p;
    p.reset_theta = -0.25;
    p.reset_dtheta = 0.5;
    const auto r = step_pendulum_euler({3.3, 1.0}, p, 0.0, 0.1);
    ASSERT_TRUE(r.spiked);
    EXPECT_EQ(r.state, (NeuronState{-0.25, 0.5}));
}

TEST(EulerStep, EquilibriumForAnyDt) {
    for (double dt : {1e-6, 0.001, 0.1, 1.0, 10.0}) {
        const auto r = step_pendulum_euler({0.0, 0.0}, PendulumParams{}, 0.0, dt);
        EXPECT_FALSE(r.spiked);
        EXPECT_EQ(r.state, (NeuronState{0.0, 0.0}));
    }
}

TEST(EulerStep, OverflowIsBlowup) {
    EXPECT_THROW(step_pendulum_euler({0.0, 0.0}, PendulumParams{}, 1e308, 10.0), IntegrationBlowup);
}

TEST(Rk4Step, Equilibrium) {
    const auto r = step_pendulum_rk4({0.0, 0.0}, PendulumParams{}, InputSignal::zero(), 0.0, 0.1);
    EXPECT_EQ(r.state, (NeuronState{0.0, 0.0}));
    EXPECT_FALSE(r.spiked);
}

TEST(Rk4Step, SmallAngleOnePeriod) {
    const PendulumParams p = free_pendulum(0.0);
    NeuronState s{0.01, 0.0};
    const double dt = 0.001;
    const auto steps = static_cast<std::size_t>(std::llround(2 * kPi / dt));
    for (std::size_t i = 0; i < steps; ++i)
        s = step_pendulum_rk4(s, p, InputSignal::zero(), static_cast<double>(i) * dt, dt).state;
    const double t_end = static_cast<double>(steps) * dt;
    EXPECT_LT(std::abs(s.theta - 0.01), 1e-6);
    EXPECT_NEAR(s.theta, 0.01 * std::cos(t_end), 1e-6);
    EXPECT_NEAR(s.dtheta, -0.01 * std::sin(t_end), 1e-6);
}

TEST(Rk4Step, SamplesDriveAtStageTimes) {
    PendulumParams p = free_pendulum(0.0);
    p.omega0 = 0.0;
    // theta'' = t integrates exactly under RK4: theta(h) = h^3 / 6.
    const auto r = step_pendulum_rk4({0.0, 0.0}, p, InputSignal::sinusoid(1e6, 1e-6, 0.0), 0.0, 0.5);
    EXPECT_NEAR(r.state.dtheta, 0.125, 1e-6);
    EXPECT_NEAR(r.state.theta, 0.5 * 0.5 * 0.5 / 6.0, 1e-6);
}

TEST(Wheel, AdvancesAtConstantRate) {
    const auto r = step_wheel(0.0, WheelParams{}, 0.0, 0.1);
    EXPECT_DOUBLE_EQ(r.state, 0.1);
    EXPECT_FALSE(r.spiked);
}

TEST(Wheel, WrapsAtTwoPi) {
    const auto r = step_wheel(6.2, WheelParams{}, 0.0, 0.1);
    EXPECT_TRUE(r.spiked);
    EXPECT_EQ(r.state, 0.0);
}

TEST(Wheel, NoDriveNoMotion) {
    WheelParams w;
    w.omega = 0.0;
    w.alpha = 1.0;
    const auto r = step_wheel(0.0, w, 0.0, 0.1);
    EXPECT_EQ(r.state, 0.0);
    EXPECT_FALSE(r.spiked);
}

TEST(Wheel, InputAddsToRate) {
    WheelParams w;
    w.omega = 1.0;
    w.alpha = 0.5;
    EXPECT_DOUBLE_EQ(step_wheel(0.0, w, 2.0, 0.1).state, 0.2);
}

TEST(Lif, RestIsFixedPoint) {
    const LifParams p;
    const auto r = step_lif(p.v_rest, p, 0.0, 0.1);
    EXPECT_EQ(r.state, p.v_rest);
    EXPECT_FALSE(r.spiked);
}

TEST(Lif, AtThresholdFiresAndResets) {
    LifParams p;
    p.v_reset = -0.2;
    const auto r = step_lif(p.v_threshold, p, 0.0, 0.1);
    EXPECT_TRUE(r.spiked);
    EXPECT_EQ(r.state, -0.2);
}

TEST(Lif, EulerStep) {
    const auto r = step_lif(0.0, LifParams{}, 2.0, 1.0);
    EXPECT_DOUBLE_EQ(r.state, 0.2);
    EXPECT_FALSE(r.spiked);
}

TEST(Izhikevich, ResetBranch) {
    const IzhikevichParams p;
    const auto r = step_izhikevich({30.0, -10.0}, p, 0.0, 1.0);
    EXPECT_TRUE(r.spiked);
    EXPECT_EQ(r.state.v, p.c);
    EXPECT_EQ(r.state.u, -10.0 + p.d);
}

TEST(Izhikevich, RecoveryNullcline) {
    const IzhikevichParams p;
    const double u0 = p.b * -65.0;
    const auto r = step_izhikevich({-65.0, u0}, p, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(r.state.u, u0);
}

TEST(Izhikevich, EulerStep) {
    const auto r = step_izhikevich({-65.0, -13.0}, IzhikevichParams{}, 10.0, 1.0);
    EXPECT_NEAR(r.state.v, -58.0, 1e-12);
    EXPECT_FALSE(r.spiked);
}

TEST(SimConfig, StepCount) {
    SimConfig s;
    EXPECT_EQ(s.step_count(), 5000u);
    s.duration_ms = 0.3;
    s.dt_ms = 0.1;
    EXPECT_EQ(s.step_count(), 3u);
    s.duration_ms = 0.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s.duration_ms = 1.0;
    s.dt_ms = -0.1;
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(SimConfig, LinspaceClockPinsEndpoint) {
    SimConfig s;
    s.input_clock = InputClock::Linspace;
    EXPECT_EQ(s.input_time(std::size_t{0}), 0.0);
    EXPECT_EQ(s.input_time(std::size_t{4999}), 500.0);
    EXPECT_EQ(s.input_time(std::size_t{1}), 500.0 / 4999.0);
    s.input_clock = InputClock::Step;
    EXPECT_EQ(s.input_time(std::size_t{7}), 7 * 0.1);
}

TEST(SimulateSingle, MatchesListingSpikeTrain) {
    const auto setup = reference_sinusoid_setup();
    const auto run = simulate_single(setup.params, setup.input, setup.sim);
    EXPECT_EQ(run.trace.rows.size(), 5000u);

    const auto golden_spikes = golden::listing_spikes();
    ASSERT_EQ(golden_spikes.size(), 169u);
    ASSERT_EQ(run.spikes.size(), golden_spikes.size());
    for (std::size_t k = 0; k < golden_spikes.size(); ++k) {
        EXPECT_EQ(run.spikes.events[k].step, golden_spikes[k].step) << "spike " << k;
        EXPECT_EQ(run.spikes.events[k].t, static_cast<double>(golden_spikes[k].step) * 0.1);
    }
}

TEST(SimulateSingle, MatchesListingTraceBitwise) {
    const auto setup = reference_sinusoid_setup();
    const auto run = simulate_single(setup.params, setup.input, setup.sim);
    const auto rows = golden::listing_trace();
    ASSERT_EQ(rows.size(), 5000u);
    // The listing stores steps 0..4999; our rows are steps 1..5000.
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_EQ(run.trace.rows[i - 1].theta, rows[i].theta) << "step " << i;
        ASSERT_EQ(run.trace.rows[i - 1].dtheta, rows[i].dtheta) << "step " << i;
    }
}

TEST(SimulateSingle, ZeroInputGivesNoSpikes) {
    SimConfig s;
    s.duration_ms = 100.0;
    for (const ModelParams& m : {ModelParams{PendulumParams{}}, ModelParams{LifParams{}}}) {
        const auto run = simulate_single(m, InputSignal::zero(), s);
        EXPECT_TRUE(run.spikes.empty()) << model_name(m);
    }
    s.integrator = Integrator::Rk4;
    EXPECT_TRUE(simulate_single(PendulumParams{}, InputSignal::zero(), s).spikes.empty());
}

TEST(SimulateSingle, ConstantDriveIsPeriodic) {
    SimConfig s;
    const auto run = simulate_single(PendulumParams{}, InputSignal::constant(2.0), s);
    const auto isi = inter_spike_intervals(run.spikes.times_of(0), 100.0);
    ASSERT_GT(isi.size(), 10u);
    const auto [lo, hi] = std::minmax_element(isi.begin(), isi.end());
    double mean = 0.0;
    for (double x : isi) mean += x;
    mean /= static_cast<double>(isi.size());
    EXPECT_LT((*hi - *lo) / mean, 0.05);
    // RK4 at dt = 0.001 settles at an ISI of 2.025 ms; the Euler grid rounds to whole steps.
    EXPECT_NEAR(mean, 2.025, s.dt_ms);
}

TEST(SimulateSingle, RejectsRk4ForBaselines) {
    SimConfig s;
    s.integrator = Integrator::Rk4;
    EXPECT_THROW(simulate_single(LifParams{}, InputSignal::constant(1.0), s), ConfigError);
}

TEST(SimulateSingle, BlowupCarriesStep) {
    SimConfig s;
    s.duration_ms = 30.0;
    s.dt_ms = 10.0;
    try {
        simulate_single(PendulumParams{}, InputSignal::constant(1e308), s);
        FAIL() << "expected blowup";
    } catch (const IntegrationBlowup& e) {
        ASSERT_TRUE(e.step().has_value());
        EXPECT_EQ(*e.step(), 1u);
        ASSERT_TRUE(e.time_ms().has_value());
        EXPECT_EQ(*e.time_ms(), 10.0);
    }
}

TEST(SimulateSingle, WheelSpikesAtPhaseRate) {
    SimConfig s;
    s.duration_ms = 100.0;
    const auto run = simulate_single(WheelParams{}, InputSignal::zero(), s);
    // One turn takes 2 pi ms; 100 ms holds 15 turns.
    EXPECT_EQ(run.spikes.size(), 15u);
}

TEST(Invariant, EquilibriumOverLongRun) {
    SimConfig s;
    s.duration_ms = 1e4;
    s.dt_ms = 0.1;
    s.record_trace = true;
    for (auto integ : {Integrator::Euler, Integrator::Rk4}) {
        s.integrator = integ;
        const auto run = simulate_single(PendulumParams{}, InputSignal::zero(), s);
        ASSERT_EQ(run.steps, 100000u);
        EXPECT_TRUE(run.spikes.empty());
        for (const auto& r : run.trace.rows) {
            ASSERT_EQ(r.theta, 0.0);
            ASSERT_EQ(r.dtheta, 0.0);
        }
    }
}

TEST(Invariant, ResetContractOverRandomDrives) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        PendulumParams p;
        p.gamma = 0.2 * u(rng);
        p.omega0 = 0.5 + u(rng);
        if (trial % 2) {
            p.reset_theta = -u(rng);
            p.reset_dtheta = u(rng) - 0.5;
        }
        const InputSignal in = InputSignal::sinusoid(2.0 * u(rng), 0.1 * u(rng), 0.5 + 2.0 * u(rng));
        SimConfig s;
        s.duration_ms = 200.0;
        s.dt_ms = 0.05 + 0.1 * u(rng);
        s.integrator = trial % 3 ? Integrator::Euler : Integrator::Rk4;
        const auto run = simulate_single(p, in, s);
        for (const auto& r : run.trace.rows) {
            if (!r.spiked) continue;
            ASSERT_EQ(r.theta, p.reset_theta);
            ASSERT_EQ(r.dtheta, p.reset_dtheta);
        }
    }
}

TEST(Invariant, DampedDecay) {
    const auto run = simulate_single(free_pendulum(), InputSignal::zero(), rk4_fine(100.0), NeuronState{0.5, 0.0});
    std::vector<double> maxima;
    const auto& rows = run.trace.rows;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double a = std::abs(rows[i - 1].theta), b = std::abs(rows[i].theta), c = std::abs(rows[i + 1].theta);
        if (b > a && b >= c) maxima.push_back(b);
    }
    ASSERT_GT(maxima.size(), 20u);
    for (std::size_t k = 1; k < maxima.size(); ++k) EXPECT_LT(maxima[k], maxima[k - 1]) << "maximum " << k;
}

TEST(Invariant, SmallAngleHalfPeriod) {
    const double expected = kPi / std::sqrt(1.0 - 0.05 * 0.05 / 4.0);
    const auto run = simulate_single(free_pendulum(), InputSignal::zero(), rk4_fine(40.0), NeuronState{0.01, 0.0});
    const auto zc = zero_crossings(run.trace, 0.01, 0.001);
    ASSERT_GE(zc.size(), 6u);
    for (std::size_t k = 1; k < zc.size(); ++k) EXPECT_NEAR(zc[k] - zc[k - 1], expected, 0.01 * expected);
}

TEST(Invariant, Determinism) {
    const auto setup = reference_sinusoid_setup();
    const auto a = simulate_single(setup.params, setup.input, setup.sim);
    const auto b = simulate_single(setup.params, setup.input, setup.sim);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.spikes, b.spikes);
}

TEST(Isi, DiscardsEarlySpikes) {
    const auto isi = inter_spike_intervals({1.0, 3.0, 6.0, 10.0}, 2.0);
    ASSERT_EQ(isi.size(), 2u);
    EXPECT_EQ(isi[0], 3.0);
    EXPECT_EQ(isi[1], 4.0);
}
