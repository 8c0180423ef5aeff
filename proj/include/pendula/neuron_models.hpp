#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "pendula/input_signal.hpp"

namespace pendula {

/// Angular phase (rad) and angular velocity (rad/ms) of one pendulum neuron.
struct NeuronState {
    double theta = 0.0;
    double dtheta = 0.0;

    friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

/// Damped driven pendulum:  theta'' = -gamma * theta' - omega0^2 * sin(theta) + I.
/// A spike is emitted when theta >= threshold_theta; the state then resets.
struct PendulumParams {
    double gamma = 0.05;
    double omega0 = 1.0;
    double threshold_theta = std::numbers::pi;
    double reset_theta = 0.0;
    double reset_dtheta = 0.0;

    void validate() const;

    /// Same parameters with the spike threshold removed (free oscillation).
    PendulumParams without_threshold() const {
        PendulumParams p = *this;
        p.threshold_theta = std::numeric_limits<double>::infinity();
        return p;
    }

    friend bool operator==(const PendulumParams&, const PendulumParams&) = default;
};

/// First-order phase wheel:  theta' = omega + alpha * I, spike and reset to 0 at threshold.
struct WheelParams {
    double omega = 1.0;
    double alpha = 0.0;
    double threshold_theta = 2.0 * std::numbers::pi;

    void validate() const;
    friend bool operator==(const WheelParams&, const WheelParams&) = default;
};

/// tau_m * v' = -(v - v_rest) + resistance * I.
struct LifParams {
    double tau_m = 10.0;
    double v_rest = 0.0;
    double v_threshold = 1.0;
    double v_reset = 0.0;
    double resistance = 1.0;

    void validate() const;
    friend bool operator==(const LifParams&, const LifParams&) = default;
};

/// v' = 0.04 v^2 + 5 v + 140 - u + I,  u' = a (b v - u); on v >= v_threshold: v = c, u += d.
/// Defaults are the regular-spiking cortical cell.
struct IzhikevichParams {
    double a = 0.02;
    double b = 0.2;
    double c = -65.0;
    double d = 8.0;
    double v_threshold = 30.0;

    void validate() const;
    friend bool operator==(const IzhikevichParams&, const IzhikevichParams&) = default;
};

using ModelParams = std::variant<PendulumParams, WheelParams, LifParams, IzhikevichParams>;

void validate(const ModelParams& params);
const char* model_name(const ModelParams& params);

struct Derivatives {
    double dtheta = 0.0;
    double ddtheta = 0.0;
};

template <typename State>
struct StepResult {
    State state;
    bool spiked = false;
};

struct IzhikevichState {
    double v = -65.0;
    double u = -13.0;

    friend bool operator==(const IzhikevichState&, const IzhikevichState&) = default;
};

/// Right-hand side of the pendulum ODE. Throws std::domain_error on non-finite arguments.
Derivatives pendulum_derivatives(const NeuronState& state, const PendulumParams& params, double input);

/// Semi-implicit Euler step in the reference ordering: the acceleration is taken
/// from the old state, the velocity is advanced first and the *new* velocity
/// advances the phase. Threshold check and reset follow the update.
StepResult<NeuronState> step_pendulum_euler(const NeuronState& state, const PendulumParams& params,
                                            double input, double dt);

/// Classical RK4 on (theta' = dtheta, dtheta' = rhs). `t` is the start of the step;
/// the drive is sampled at t, t + dt/2 and t + dt. Threshold/reset after the full step.
StepResult<NeuronState> step_pendulum_rk4(const NeuronState& state, const PendulumParams& params,
                                          const InputSignal& input, double t, double dt);

/// RK4 with an arbitrary drive callable; used when the sampling clock is rescaled.
template <typename Drive>
StepResult<NeuronState> step_pendulum_rk4_with(const NeuronState& state, const PendulumParams& params,
                                               Drive&& drive, double t, double dt);

StepResult<double> step_wheel(double theta, const WheelParams& params, double input, double dt);
StepResult<double> step_lif(double v, const LifParams& params, double input, double dt);
StepResult<IzhikevichState> step_izhikevich(const IzhikevichState& state, const IzhikevichParams& params,
                                            double input, double dt);

namespace detail {
// Unchecked right-hand side; finiteness is enforced on the completed step.
inline Derivatives pendulum_rhs(const NeuronState& s, const PendulumParams& p, double input) {
    return {s.dtheta, -p.gamma * s.dtheta - p.omega0 * p.omega0 * std::sin(s.theta) + input};
}
StepResult<NeuronState> finish_pendulum_step(NeuronState next, const PendulumParams& params);
}  // namespace detail

template <typename Drive>
StepResult<NeuronState> step_pendulum_rk4_with(const NeuronState& state, const PendulumParams& params,
                                               Drive&& drive, double t, double dt) {
    const double half = 0.5 * dt;
    const double i0 = drive(t);
    const double i_mid = drive(t + half);
    const double i1 = drive(t + dt);

    const Derivatives k1 = detail::pendulum_rhs(state, params, i0);
    const Derivatives k2 = detail::pendulum_rhs(
        {state.theta + half * k1.dtheta, state.dtheta + half * k1.ddtheta}, params, i_mid);
    const Derivatives k3 = detail::pendulum_rhs(
        {state.theta + half * k2.dtheta, state.dtheta + half * k2.ddtheta}, params, i_mid);
    const Derivatives k4 = detail::pendulum_rhs(
        {state.theta + dt * k3.dtheta, state.dtheta + dt * k3.ddtheta}, params, i1);

    NeuronState next;
    next.theta = state.theta + dt / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta);
    next.dtheta = state.dtheta + dt / 6.0 * (k1.ddtheta + 2.0 * k2.ddtheta + 2.0 * k3.ddtheta + k4.ddtheta);
    return detail::finish_pendulum_step(next, params);
}

}  // namespace pendula
