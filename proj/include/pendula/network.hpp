#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pendula/input_signal.hpp"
#include "pendula/neuron_models.hpp"
#include "pendula/plasticity.hpp"
#include "pendula/simulation.hpp"

namespace pendula {

struct PlasticityConfig {
    std::optional<StdpParams> stdp;
    std::optional<HebbianParams> hebbian;

    bool enabled() const { return stdp || hebbian; }
    friend bool operator==(const PlasticityConfig&, const PlasticityConfig&) = default;
};

/// One recurrent layer of pendulum neurons.
struct LayerConfig {
    std::size_t n = 1;
    /// Either one shared parameter set or exactly n.
    std::vector<PendulumParams> params{PendulumParams{}};
    /// Either one shared drive or exactly n.
    std::vector<InputSignal> inputs{InputSignal{}};
    double syn_tau = 5.0;
    double syn_gain = 1.0;
    PlasticityConfig plasticity;
    /// n x n; an empty matrix means all-zero weights in [0, 1].
    WeightMatrix initial_weights;
    /// Per-edge conduction delay (post, pre) in ms. Only 0 is supported; the field
    /// exists so configs can carry it. Empty means all zero.
    std::vector<double> delays_ms;
    /// Write a weight snapshot every k steps (0 disables).
    std::size_t snapshot_every = 0;
    bool record_traces = false;

    void validate() const;

    const PendulumParams& params_of(std::size_t i) const { return params.size() == 1 ? params[0] : params[i]; }
    const InputSignal& input_of(std::size_t i) const { return inputs.size() == 1 ? inputs[0] : inputs[i]; }
};

/// Per-neuron exponentially decaying spike trace.
class SynapticTraces {
public:
    explicit SynapticTraces(std::size_t n = 0) : s_(n, 0.0) {}

    std::size_t size() const { return s_.size(); }
    double operator[](std::size_t j) const { return s_[j]; }
    double& operator[](std::size_t j) { return s_[j]; }

    /// s_j *= decay for all j, then s_j += 1 for each spiker.
    void decay_and_add(double decay, const std::vector<bool>& spiked);

    const std::vector<double>& values() const { return s_; }

private:
    std::vector<double> s_;
};

/// gain * sum_{j != i} w(i, j) * s_j.
double synaptic_current(const SynapticTraces& traces, const WeightMatrix& w, std::size_t i, double gain);

struct WeightSnapshot {
    std::size_t step = 0;
    WeightMatrix weights;
};

/// Mutable state of a layer between steps.
struct LayerState {
    std::vector<NeuronState> neurons;
    SynapticTraces traces;
    WeightMatrix weights;
    SpikeHistory history;
};

LayerState initial_layer_state(const LayerConfig& config);

/// Advances every neuron one step from the same previous snapshot:
///  1. input_i = I_i(t) + synaptic current from the previous traces
///  2. semi-implicit Euler step per neuron
///  3. collect spikes (recorded into the history)
///  4. traces decay by exp(-dt / syn_tau), spikers add 1
///  5. STDP events in ascending neuron index (post then pre role), then Hebbian.
/// Returns the per-neuron spike flags. `inputs_out`, when given, receives the total
/// input applied to each neuron.
std::vector<bool> network_step(const LayerConfig& config, LayerState& state, std::size_t step, double t,
                               double input_t, double dt, std::vector<double>* inputs_out = nullptr);

struct NetworkRun {
    /// spike_log[i] holds neuron i's spike times (ms).
    std::vector<std::vector<double>> spike_log;
    SpikeTrain spikes;
    /// One trace per neuron when LayerConfig::record_traces is set.
    std::vector<TraceRecord> traces;
    std::vector<WeightSnapshot> snapshots;
    WeightMatrix final_weights;
    std::size_t steps = 0;
};

/// Runs steps 1..N. Integration is always semi-implicit Euler; SimConfig::integrator
/// must be Euler.
NetworkRun run_network(const LayerConfig& config, const SimConfig& sim);

}  // namespace pendula
