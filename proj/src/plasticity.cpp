#include "pendula/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pendula/errors.hpp"

namespace pendula {

void StdpParams::validate() const {
    for (double v : {a_plus, a_minus, tau_plus, tau_minus})
        if (!std::isfinite(v) || !(v > 0.0)) throw ConfigError("stdp: a_plus, a_minus, tau_plus, tau_minus must be > 0");
}

void HebbianParams::validate() const {
    if (!std::isfinite(eta) || !(eta > 0.0)) throw ConfigError("hebbian: eta must be > 0");
    if (!std::isfinite(window_ms) || window_ms < 0.0) throw ConfigError("hebbian: window_ms must be >= 0");
}

WeightMatrix::WeightMatrix(std::size_t n, double w_min, double w_max, double initial)
    : n_(n), w_min_(w_min), w_max_(w_max), w_(n * n, initial) {
    if (!std::isfinite(w_min) || !std::isfinite(w_max) || !(w_min <= w_max))
        throw ConfigError("weights: need finite w_min <= w_max");
    if (!std::isfinite(initial)) throw ConfigError("weights: initial value must be finite");
    clip_weights_in_place(*this);
}

WeightMatrix WeightMatrix::random(std::size_t n, std::uint64_t seed, double w_min, double w_max) {
    WeightMatrix w(n, w_min, w_max, 0.0);
    std::mt19937_64 rng(seed);
    const double scale = 0.1 * w_max;
    for (std::size_t post = 0; post < n; ++post)
        for (std::size_t pre = 0; pre < n; ++pre) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
            if (post != pre) w.at(post, pre) = u * scale;
        }
    clip_weights_in_place(w);
    return w;
}

void WeightMatrix::add_clipped(std::size_t post, std::size_t pre, double delta) {
    if (post == pre) return;
    double& v = at(post, pre);
    v = std::clamp(v + delta, w_min_, w_max_);
}

void clip_weights_in_place(WeightMatrix& w) {
    for (std::size_t post = 0; post < w.size(); ++post)
        for (std::size_t pre = 0; pre < w.size(); ++pre) {
            double& v = w.at(post, pre);
            v = post == pre ? 0.0 : std::clamp(v, w.w_min(), w.w_max());
        }
}

WeightMatrix clip_weights(WeightMatrix w) {
    clip_weights_in_place(w);
    return w;
}

SpikeHistory::SpikeHistory(std::size_t n, bool keep_all) : keep_all_(keep_all), last_(n), all_(n) {}

void SpikeHistory::record(std::size_t neuron, std::size_t step, double t) {
    auto& last = last_.at(neuron);
    if (last && t < last->t) throw std::invalid_argument("spike history: times must be non-decreasing");
    last = SpikeStamp{step, t};
    if (keep_all_) all_[neuron].push_back(*last);
}

double stdp_delta(double delta_t, const StdpParams& params) {
    if (!std::isfinite(delta_t)) throw std::domain_error("stdp_delta: non-finite delta_t");
    if (delta_t > 0.0) return params.a_plus * std::exp(-delta_t / params.tau_plus);
    if (delta_t < 0.0) return -params.a_minus * std::exp(delta_t / params.tau_minus);
    throw std::domain_error("stdp_delta: simultaneous spikes have no STDP change");
}

void on_post_spike(std::size_t post, double t, const SpikeHistory& history, WeightMatrix& w,
                   const StdpParams& params) {
    for (std::size_t pre = 0; pre < history.size(); ++pre) {
        if (pre == post) continue;
        const auto& last = history.last(pre);
        if (!last || !(last->t < t)) continue;
        w.add_clipped(post, pre, stdp_delta(t - last->t, params));
    }
}

void on_pre_spike(std::size_t pre, double t, const SpikeHistory& history, WeightMatrix& w,
                  const StdpParams& params) {
    for (std::size_t post = 0; post < history.size(); ++post) {
        if (post == pre) continue;
        const auto& last = history.last(post);
        if (!last || !(last->t < t)) continue;
        w.add_clipped(post, pre, stdp_delta(last->t - t, params));
    }
}

void hebbian_step(const std::vector<bool>& spiked_now, const SpikeHistory& recent, double t, WeightMatrix& w,
                  const HebbianParams& params) {
    // window comparisons tolerate the representation error of i * dt differences
    constexpr double kSlack = 1e-9;
    for (std::size_t i = 0; i < spiked_now.size(); ++i) {
        if (!spiked_now[i]) continue;
        for (std::size_t j = 0; j < spiked_now.size(); ++j) {
            if (j == i) continue;
            const auto& last = recent.last(j);
            if (!last) continue;
            const double lag = t - last->t;
            if (lag >= -kSlack && lag <= params.window_ms + kSlack) w.add_clipped(i, j, params.eta);
        }
    }
}

}  // namespace pendula
