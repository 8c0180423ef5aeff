#include "pendula/neuron_models.hpp"

#include <cmath>
#include <stdexcept>

#include "pendula/errors.hpp"

namespace pendula {

namespace {

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const char* message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

void PendulumParams::validate() const {
    require(finite(gamma) && gamma >= 0.0, "pendulum: gamma must be >= 0");
    require(finite(omega0) && omega0 > 0.0, "pendulum: omega0 must be > 0");
    require(finite(reset_theta) && finite(reset_dtheta), "pendulum: reset state must be finite");
    require(!std::isnan(threshold_theta) && threshold_theta > reset_theta,
            "pendulum: threshold_theta must exceed reset_theta");
}

void WheelParams::validate() const {
    require(finite(omega) && omega >= 0.0, "wheel: omega must be >= 0");
    require(finite(alpha), "wheel: alpha must be finite");
    require(!std::isnan(threshold_theta) && threshold_theta > 0.0, "wheel: threshold_theta must be > 0");
}

void LifParams::validate() const {
    require(finite(tau_m) && tau_m > 0.0, "lif: tau_m must be > 0");
    require(finite(v_rest) && finite(v_reset) && finite(resistance), "lif: parameters must be finite");
    require(!std::isnan(v_threshold) && v_threshold > v_reset, "lif: v_threshold must exceed v_reset");
}

void IzhikevichParams::validate() const {
    require(finite(a) && a > 0.0, "izhikevich: a must be > 0");
    require(finite(b) && finite(c) && finite(d), "izhikevich: parameters must be finite");
    require(!std::isnan(v_threshold), "izhikevich: v_threshold must not be NaN");
}

void validate(const ModelParams& params) {
    std::visit([](const auto& p) { p.validate(); }, params);
}

const char* model_name(const ModelParams& params) {
    switch (params.index()) {
        case 0: return "pendulum";
        case 1: return "wheel";
        case 2: return "lif";
        default: return "izhikevich";
    }
}

Derivatives pendulum_derivatives(const NeuronState& state, const PendulumParams& params, double input) {
    if (!finite(state.theta) || !finite(state.dtheta) || !finite(input))
        throw std::domain_error("pendulum_derivatives: non-finite argument");
    return detail::pendulum_rhs(state, params, input);
}

namespace detail {

StepResult<NeuronState> finish_pendulum_step(NeuronState next, const PendulumParams& params) {
    if (!finite(next.theta) || !finite(next.dtheta)) throw IntegrationBlowup("non-finite pendulum state");
    if (next.theta >= params.threshold_theta) return {{params.reset_theta, params.reset_dtheta}, true};
    return {next, false};
}

}  // namespace detail

StepResult<NeuronState> step_pendulum_euler(const NeuronState& state, const PendulumParams& params, double input,
                                            double dt) {
    const double ddtheta = detail::pendulum_rhs(state, params, input).ddtheta;
    NeuronState next;
    next.dtheta = state.dtheta + ddtheta * dt;
    next.theta = state.theta + next.dtheta * dt;
    return detail::finish_pendulum_step(next, params);
}

StepResult<NeuronState> step_pendulum_rk4(const NeuronState& state, const PendulumParams& params,
                                          const InputSignal& input, double t, double dt) {
    return step_pendulum_rk4_with(state, params, input, t, dt);
}

StepResult<double> step_wheel(double theta, const WheelParams& params, double input, double dt) {
    const double next = theta + (params.omega + params.alpha * input) * dt;
    if (!finite(next)) throw IntegrationBlowup("non-finite wheel phase");
    if (next >= params.threshold_theta) return {0.0, true};
    return {next, false};
}

// The baselines fire on entry when the incoming state already sits at threshold,
// otherwise integrate and fire on the updated state.
StepResult<double> step_lif(double v, const LifParams& params, double input, double dt) {
    if (v >= params.v_threshold) return {params.v_reset, true};
    const double next = v + dt * (-(v - params.v_rest) + params.resistance * input) / params.tau_m;
    if (!finite(next)) throw IntegrationBlowup("non-finite LIF potential");
    if (next >= params.v_threshold) return {params.v_reset, true};
    return {next, false};
}

StepResult<IzhikevichState> step_izhikevich(const IzhikevichState& state, const IzhikevichParams& params,
                                            double input, double dt) {
    if (state.v >= params.v_threshold) return {{params.c, state.u + params.d}, true};
    const double dv = 0.04 * state.v * state.v + 5.0 * state.v + 140.0 - state.u + input;
    const double du = params.a * (params.b * state.v - state.u);
    IzhikevichState next{state.v + dt * dv, state.u + dt * du};
    if (!finite(next.v) || !finite(next.u)) throw IntegrationBlowup("non-finite Izhikevich state");
    if (next.v >= params.v_threshold) return {{params.c, next.u + params.d}, true};
    return {next, false};
}

}  // namespace pendula
