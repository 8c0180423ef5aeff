#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pendula {

/// Exponential STDP window. Defaults are conventional magnitudes, not fitted values.
struct StdpParams {
    double a_plus = 0.01;
    double a_minus = 0.012;
    double tau_plus = 20.0;
    double tau_minus = 20.0;

    void validate() const;
    friend bool operator==(const StdpParams&, const StdpParams&) = default;
};

/// Co-firing rule: +eta whenever two neurons spike within window_ms of each other
/// (0 means the same step only).
struct HebbianParams {
    double eta = 0.05;
    double window_ms = 0.0;

    void validate() const;
    friend bool operator==(const HebbianParams&, const HebbianParams&) = default;
};

/// Dense n x n synaptic weights indexed (post, pre). The diagonal is pinned to 0
/// and every entry is kept inside [w_min, w_max].
class WeightMatrix {
public:
    WeightMatrix() = default;
    WeightMatrix(std::size_t n, double w_min = 0.0, double w_max = 1.0, double initial = 0.0);

    /// Uniform [0, 0.1 * w_max) off-diagonal entries from a seeded 64-bit Mersenne twister.
    /// The mapping from raw draws to doubles is fixed here so results are portable.
    static WeightMatrix random(std::size_t n, std::uint64_t seed, double w_min = 0.0, double w_max = 1.0);

    std::size_t size() const { return n_; }
    double w_min() const { return w_min_; }
    double w_max() const { return w_max_; }

    double operator()(std::size_t post, std::size_t pre) const { return w_[post * n_ + pre]; }
    /// Raw access; invariants are restored by clip_weights().
    double& at(std::size_t post, std::size_t pre) { return w_[post * n_ + pre]; }

    /// Adds `delta` to (post, pre) and clamps the entry. Diagonal writes are ignored.
    void add_clipped(std::size_t post, std::size_t pre, double delta);

    std::span<const double> row(std::size_t post) const { return {w_.data() + post * n_, n_}; }
    const std::vector<double>& values() const { return w_; }

    friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

private:
    std::size_t n_ = 0;
    double w_min_ = 0.0;
    double w_max_ = 1.0;
    std::vector<double> w_;
};

/// Clamp every entry to [w_min, w_max] and force the diagonal to 0.
WeightMatrix clip_weights(WeightMatrix w);
void clip_weights_in_place(WeightMatrix& w);

struct SpikeStamp {
    std::size_t step = 0;
    double t = 0.0;
};

/// Most recent spike per neuron, with optional full per-neuron lists.
class SpikeHistory {
public:
    explicit SpikeHistory(std::size_t n = 0, bool keep_all = false);

    std::size_t size() const { return last_.size(); }

    /// Throws std::invalid_argument if `t` is earlier than the neuron's last recorded spike.
    void record(std::size_t neuron, std::size_t step, double t);

    const std::optional<SpikeStamp>& last(std::size_t neuron) const { return last_[neuron]; }
    /// Empty unless constructed with keep_all.
    const std::vector<SpikeStamp>& all(std::size_t neuron) const { return all_[neuron]; }

private:
    bool keep_all_ = false;
    std::vector<std::optional<SpikeStamp>> last_;
    std::vector<std::vector<SpikeStamp>> all_;
};

/// Weight change for delta_t = t_post - t_pre:
///   a_plus  * exp(-delta_t / tau_plus)    if delta_t > 0
///  -a_minus * exp( delta_t / tau_minus)   if delta_t < 0
/// delta_t == 0 is not part of the window; the caller applies the simultaneity
/// policy (no STDP change). Throws std::domain_error for 0 or non-finite delta_t.
double stdp_delta(double delta_t, const StdpParams& params);

/// Potentiation when `post` spikes at t: w(post, pre) += stdp_delta(t - t_pre) for each
/// other neuron's most recent spike t_pre < t. A most recent spike at t itself is
/// simultaneous and contributes nothing.
void on_post_spike(std::size_t post, double t, const SpikeHistory& history, WeightMatrix& w,
                   const StdpParams& params);

/// Depression when `pre` spikes at t: w(post, pre) += stdp_delta(t_post - t) for each
/// other neuron's most recent spike t_post < t.
void on_pre_spike(std::size_t pre, double t, const SpikeHistory& history, WeightMatrix& w,
                  const StdpParams& params);

/// One co-firing pass for the current step. `recent` must already contain this
/// step's spikes. For every i that spiked now and every j != i whose last spike lies
/// in [t - window, t], w(i, j) += eta.
void hebbian_step(const std::vector<bool>& spiked_now, const SpikeHistory& recent, double t, WeightMatrix& w,
                  const HebbianParams& params);

}  // namespace pendula
