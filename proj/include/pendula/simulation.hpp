#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pendula/input_signal.hpp"
#include "pendula/neuron_models.hpp"

namespace pendula {

enum class Integrator { Euler, Rk4 };

/// Where the drive is sampled on step i.
///  - Step:     t_i = i * dt.
///  - Linspace: t_i = i * T / (N - 1) with N = step count, i.e. the time axis of
///              np.linspace(0, T, N). The single-neuron NumPy reference samples its
///              input this way; reported times are still i * dt.
enum class InputClock { Step, Linspace };

struct SimConfig {
    double duration_ms = 500.0;
    double dt_ms = 0.1;
    Integrator integrator = Integrator::Euler;
    bool record_trace = true;
    InputClock input_clock = InputClock::Step;

    void validate() const;

    /// floor(duration / dt), tolerant to representation error in the quotient.
    std::size_t step_count() const;

    /// Reported time of step i.
    double time_of(std::size_t step) const { return static_cast<double>(step) * dt_ms; }

    /// Time at which the drive is sampled for step i.
    double input_time(std::size_t step) const;

    /// Drive sampling time for a fractional step position (RK4 stages).
    double input_time(double step_position) const;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct TraceRow {
    double t = 0.0;
    double theta = 0.0;
    double dtheta = 0.0;
    double input = 0.0;
    bool spiked = false;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// Per-step rows, post-reset state on spiking rows. Pendulum rows hold (theta, dtheta);
/// wheel rows hold (theta, instantaneous phase velocity); LIF rows hold (v, 0);
/// Izhikevich rows hold (v, u).
struct TraceRecord {
    std::vector<TraceRow> rows;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SpikeEvent {
    std::size_t neuron = 0;
    double t = 0.0;
    std::size_t step = 0;

    friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

/// Time-ordered spike events; ties at one step are ordered by neuron index.
struct SpikeTrain {
    std::vector<SpikeEvent> events;

    std::size_t size() const { return events.size(); }
    bool empty() const { return events.empty(); }
    std::vector<double> times_of(std::size_t neuron) const;
    std::vector<std::size_t> steps_of(std::size_t neuron) const;

    friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;
};

struct SingleRun {
    TraceRecord trace;
    SpikeTrain spikes;
    std::size_t steps = 0;
};

/// Initial state used when none is given: (0, 0) for the pendulum and wheel,
/// v_rest for LIF and (c, b*c) for Izhikevich.
NeuronState default_initial_state(const ModelParams& params);

/// Runs steps 1..N (N = config.step_count()) from the initial state. Spikes are
/// reported at step * dt. Throws ConfigError on invalid input and IntegrationBlowup
/// (with step and time) on a non-finite state.
SingleRun simulate_single(const ModelParams& params, const InputSignal& input, const SimConfig& config,
                          std::optional<NeuronState> initial = std::nullopt);

/// The single-neuron configuration of the reference listing: gamma = 0.05, omega0 = 1,
/// threshold pi, I(t) = 1.5 sin(0.01 t) + 1.2, T = 500 ms, dt = 0.1 ms, semi-implicit Euler,
/// drive sampled on the linspace clock.
struct ReferenceSetup {
    PendulumParams params;
    InputSignal input;
    SimConfig sim;
};
ReferenceSetup reference_sinusoid_setup();

/// Inter-spike intervals of the given spike times after discarding spikes before `after_ms`.
std::vector<double> inter_spike_intervals(const std::vector<double>& times, double after_ms = 0.0);

}  // namespace pendula
