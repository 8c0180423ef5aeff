#include "pendula/simulation.hpp"

#include <cmath>

#include "pendula/errors.hpp"

namespace pendula {

void SimConfig::validate() const {
    if (!std::isfinite(dt_ms) || !(dt_ms > 0.0)) throw ConfigError("dt_ms must be > 0");
    if (!std::isfinite(duration_ms) || !(duration_ms >= dt_ms)) throw ConfigError("duration_ms must be >= dt_ms");
}

std::size_t SimConfig::step_count() const {
    // 1e-9 absorbs quotients such as 0.3 / 0.1 = 2.9999999999999996
    return static_cast<std::size_t>(std::floor(duration_ms / dt_ms + 1e-9));
}

double SimConfig::input_time(std::size_t step) const {
    if (input_clock == InputClock::Step) return time_of(step);
    const std::size_t n = step_count();
    if (n < 2) return time_of(step);
    if (step == n - 1) return duration_ms;  // linspace pins its last sample to the endpoint
    return static_cast<double>(step) * (duration_ms / static_cast<double>(n - 1));
}

double SimConfig::input_time(double step_position) const {
    const std::size_t n = step_count();
    if (input_clock == InputClock::Step || n < 2) return step_position * dt_ms;
    return step_position * (duration_ms / static_cast<double>(n - 1));
}

std::vector<double> SpikeTrain::times_of(std::size_t neuron) const {
    std::vector<double> out;
    for (const auto& e : events)
        if (e.neuron == neuron) out.push_back(e.t);
    return out;
}

std::vector<std::size_t> SpikeTrain::steps_of(std::size_t neuron) const {
    std::vector<std::size_t> out;
    for (const auto& e : events)
        if (e.neuron == neuron) out.push_back(e.step);
    return out;
}

NeuronState default_initial_state(const ModelParams& params) {
    if (const auto* lif = std::get_if<LifParams>(&params)) return {lif->v_rest, 0.0};
    if (const auto* izh = std::get_if<IzhikevichParams>(&params)) return {izh->c, izh->b * izh->c};
    return {0.0, 0.0};
}

namespace {

struct Recorder {
    const SimConfig& config;
    SingleRun& run;

    void operator()(std::size_t step, double theta, double dtheta, double input, bool spiked) const {
        const double t = config.time_of(step);
        if (config.record_trace) run.trace.rows.push_back({t, theta, dtheta, input, spiked});
        if (spiked) run.spikes.events.push_back({0, t, step});
    }
};

}  // namespace

SingleRun simulate_single(const ModelParams& params, const InputSignal& input, const SimConfig& config,
                          std::optional<NeuronState> initial) {
    validate(params);
    config.validate();
    input.validate(config.duration_ms);
    if (config.integrator == Integrator::Rk4 && !std::holds_alternative<PendulumParams>(params))
        throw ConfigError("rk4 integration is only available for the pendulum model");

    const NeuronState start = initial.value_or(default_initial_state(params));
    if (!std::isfinite(start.theta) || !std::isfinite(start.dtheta))
        throw ConfigError("initial state must be finite");

    SingleRun run;
    run.steps = config.step_count();
    if (config.record_trace) run.trace.rows.reserve(run.steps);
    const Recorder record{config, run};

    std::size_t i = 1;
    try {
        if (const auto* p = std::get_if<PendulumParams>(&params)) {
            NeuronState s = start;
            const auto drive = [&](double step_position) { return input(config.input_time(step_position)); };
            for (; i <= run.steps; ++i) {
                const double in = input(config.input_time(i));
                StepResult<NeuronState> r;
                if (config.integrator == Integrator::Euler) {
                    r = step_pendulum_euler(s, *p, in, config.dt_ms);
                } else {
                    // stage times expressed in step units so both clocks are honoured
                    const double base = static_cast<double>(i - 1);
                    r = step_pendulum_rk4_with(
                        s, *p, [&](double t) { return drive(base + (t - base * config.dt_ms) / config.dt_ms); },
                        base * config.dt_ms, config.dt_ms);
                }
                s = r.state;
                record(i, s.theta, s.dtheta, in, r.spiked);
            }
        } else if (const auto* w = std::get_if<WheelParams>(&params)) {
            double theta = start.theta;
            for (; i <= run.steps; ++i) {
                const double in = input(config.input_time(i));
                const auto r = step_wheel(theta, *w, in, config.dt_ms);
                theta = r.state;
                record(i, theta, w->omega + w->alpha * in, in, r.spiked);
            }
        } else if (const auto* l = std::get_if<LifParams>(&params)) {
            double v = start.theta;
            for (; i <= run.steps; ++i) {
                const double in = input(config.input_time(i));
                const auto r = step_lif(v, *l, in, config.dt_ms);
                v = r.state;
                record(i, v, 0.0, in, r.spiked);
            }
        } else {
            const auto& z = std::get<IzhikevichParams>(params);
            IzhikevichState s{start.theta, start.dtheta};
            for (; i <= run.steps; ++i) {
                const double in = input(config.input_time(i));
                const auto r = step_izhikevich(s, z, in, config.dt_ms);
                s = r.state;
                record(i, s.v, s.u, in, r.spiked);
            }
        }
    } catch (const IntegrationBlowup& e) {
        throw e.with_context(i, config.time_of(i));
    }
    return run;
}

ReferenceSetup reference_sinusoid_setup() {
    ReferenceSetup setup;
    setup.params = PendulumParams{};
    setup.input = InputSignal::sinusoid(1.5, 0.01, 1.2);
    setup.sim.duration_ms = 500.0;
    setup.sim.dt_ms = 0.1;
    setup.sim.integrator = Integrator::Euler;
    setup.sim.record_trace = true;
    setup.sim.input_clock = InputClock::Linspace;
    return setup;
}

std::vector<double> inter_spike_intervals(const std::vector<double>& times, double after_ms) {
    std::vector<double> kept;
    for (double t : times)
        if (t >= after_ms) kept.push_back(t);
    std::vector<double> isi;
    for (std::size_t k = 1; k < kept.size(); ++k) isi.push_back(kept[k] - kept[k - 1]);
    return isi;
}

}  // namespace pendula
