#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pendula/fixed_point.hpp"
#include "pendula/simulation.hpp"

namespace pendula::fixed {

/// Divergence of a candidate run from the floating-point reference.
struct ErrorReport {
    /// Max |theta_candidate - theta_reference| over steps where neither path spikes
    /// and both have emitted the same number of spikes so far.
    double max_theta_err = 0.0;
    /// candidate - reference for the k-th spike of each run, k < min(counts).
    std::vector<double> spike_time_devs;
    /// candidate count - reference count.
    long long count_diff = 0;
    std::uint64_t saturations = 0;
    QFormat q_format;
    std::size_t lut_size = 0;
    bool interpolated = false;

    double max_abs_spike_dev() const;
    friend bool operator==(const ErrorReport&, const ErrorReport&) = default;
};

/// Compares two per-step phase traces (same length, same grid) and their spike trains.
ErrorReport compare_runs(const std::vector<double>& candidate_theta, const SpikeTrain& candidate_spikes,
                         const std::vector<double>& reference_theta, const SpikeTrain& reference_spikes);

/// Runs the float Euler path and the fixed-point path on the same setup and compares them.
ErrorReport compare_fixed_vs_float(const PendulumParams& params, const InputSignal& input, const SimConfig& sim,
                                   const QFormat& q, std::size_t lut_size, bool interpolate = false);

/// Float path against itself; the all-zero control.
ErrorReport compare_float_vs_float(const PendulumParams& params, const InputSignal& input, const SimConfig& sim);

}  // namespace pendula::fixed
