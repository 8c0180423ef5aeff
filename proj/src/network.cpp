#include "pendula/network.hpp"

#include <cmath>

#include "pendula/errors.hpp"

namespace pendula {

void LayerConfig::validate() const {
    if (n < 1) throw ConfigError("layer: n must be >= 1");
    if (params.size() != 1 && params.size() != n) throw ConfigError("layer: params must have 1 or n entries");
    if (inputs.size() != 1 && inputs.size() != n) throw ConfigError("layer: inputs must have 1 or n entries");
    for (const auto& p : params) p.validate();
    if (!std::isfinite(syn_tau) || !(syn_tau > 0.0)) throw ConfigError("layer: syn_tau must be > 0");
    if (!std::isfinite(syn_gain)) throw ConfigError("layer: syn_gain must be finite");
    if (initial_weights.size() != 0 && initial_weights.size() != n) throw ConfigError("layer: initial weight matrix must be n x n");
    if (!delays_ms.empty()) {
        if (delays_ms.size() != n * n) throw ConfigError("layer: delays_ms must have n * n entries");
        for (double d : delays_ms)
            if (d != 0.0) throw ConfigError("layer: synaptic delays are not supported (must be 0)");
    }
    if (plasticity.stdp) plasticity.stdp->validate();
    if (plasticity.hebbian) plasticity.hebbian->validate();
}

void SynapticTraces::decay_and_add(double decay, const std::vector<bool>& spiked) {
    for (std::size_t j = 0; j < s_.size(); ++j) {
        s_[j] *= decay;
        if (spiked[j]) s_[j] += 1.0;
    }
}

double synaptic_current(const SynapticTraces& traces, const WeightMatrix& w, std::size_t i, double gain) {
    double sum = 0.0;
    for (std::size_t j = 0; j < traces.size(); ++j) {
        if (j == i) continue;
        sum += w(i, j) * traces[j];
    }
    return gain * sum;
}

LayerState initial_layer_state(const LayerConfig& config) {
    WeightMatrix w = config.initial_weights.size() == config.n ? config.initial_weights : WeightMatrix(config.n);
    return LayerState{std::vector<NeuronState>(config.n), SynapticTraces(config.n), std::move(w),
                      SpikeHistory(config.n)};
}

std::vector<bool> network_step(const LayerConfig& config, LayerState& state, std::size_t step, double t,
                               double input_t, double dt, std::vector<double>* inputs_out) {
    const std::size_t n = config.n;
    std::vector<double> total(n);
    for (std::size_t i = 0; i < n; ++i)
        total[i] = config.input_of(i)(input_t) + synaptic_current(state.traces, state.weights, i, config.syn_gain);

    std::vector<bool> spiked(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        try {
            const auto r = step_pendulum_euler(state.neurons[i], config.params_of(i), total[i], dt);
            state.neurons[i] = r.state;
            spiked[i] = r.spiked;
        } catch (const IntegrationBlowup& e) {
            throw e.with_context(step, t, i);
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        if (spiked[i]) state.history.record(i, step, t);

    state.traces.decay_and_add(std::exp(-dt / config.syn_tau), spiked);

    if (const auto& stdp = config.plasticity.stdp) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!spiked[k]) continue;
            on_post_spike(k, t, state.history, state.weights, *stdp);
            on_pre_spike(k, t, state.history, state.weights, *stdp);
        }
    }
    if (const auto& hebb = config.plasticity.hebbian) hebbian_step(spiked, state.history, t, state.weights, *hebb);

    if (inputs_out) *inputs_out = std::move(total);
    return spiked;
}

NetworkRun run_network(const LayerConfig& config, const SimConfig& sim) {
    config.validate();
    sim.validate();
    if (sim.integrator != Integrator::Euler) throw ConfigError("layer runs use semi-implicit Euler only");
    for (const auto& in : config.inputs) in.validate(sim.duration_ms);

    NetworkRun run;
    run.steps = sim.step_count();
    run.spike_log.resize(config.n);
    if (config.record_traces) run.traces.resize(config.n);

    LayerState state = initial_layer_state(config);
    std::vector<double> applied;
    for (std::size_t i = 1; i <= run.steps; ++i) {
        const double t = sim.time_of(i);
        const auto spiked = network_step(config, state, i, t, sim.input_time(i), sim.dt_ms,
                                         config.record_traces ? &applied : nullptr);
        for (std::size_t k = 0; k < config.n; ++k) {
            if (spiked[k]) {
                run.spike_log[k].push_back(t);
                run.spikes.events.push_back({k, t, i});
            }
            if (config.record_traces)
                run.traces[k].rows.push_back(
                    {t, state.neurons[k].theta, state.neurons[k].dtheta, applied[k], spiked[k]});
        }
        if (config.snapshot_every > 0 && i % config.snapshot_every == 0)
            run.snapshots.push_back({i, state.weights});
    }
    run.final_weights = std::move(state.weights);
    return run;
}

}  // namespace pendula
