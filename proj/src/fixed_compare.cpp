#include "pendula/fixed_compare.hpp"

#include <algorithm>
#include <cmath>

#include "pendula/errors.hpp"

namespace pendula::fixed {

double ErrorReport::max_abs_spike_dev() const {
    double m = 0.0;
    for (double d : spike_time_devs) m = std::max(m, std::abs(d));
    return m;
}

namespace {

std::vector<bool> spike_flags(const SpikeTrain& spikes, std::size_t steps) {
    std::vector<bool> flags(steps, false);
    for (const auto& e : spikes.events)
        if (e.step >= 1 && e.step <= steps) flags[e.step - 1] = true;
    return flags;
}

std::vector<double> trace_theta(const TraceRecord& trace) {
    std::vector<double> out;
    out.reserve(trace.rows.size());
    for (const auto& row : trace.rows) out.push_back(row.theta);
    return out;
}

}  // namespace

ErrorReport compare_runs(const std::vector<double>& candidate_theta, const SpikeTrain& candidate_spikes,
                         const std::vector<double>& reference_theta, const SpikeTrain& reference_spikes) {
    if (candidate_theta.size() != reference_theta.size())
        throw std::invalid_argument("compare_runs: traces cover different step counts");
    const std::size_t steps = reference_theta.size();
    const auto cand_flags = spike_flags(candidate_spikes, steps);
    const auto ref_flags = spike_flags(reference_spikes, steps);

    ErrorReport report;
    std::size_t cand_count = 0;
    std::size_t ref_count = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        cand_count += cand_flags[k];
        ref_count += ref_flags[k];
        if (cand_flags[k] || ref_flags[k] || cand_count != ref_count) continue;
        report.max_theta_err = std::max(report.max_theta_err, std::abs(candidate_theta[k] - reference_theta[k]));
    }

    const std::size_t matched = std::min(candidate_spikes.size(), reference_spikes.size());
    report.spike_time_devs.reserve(matched);
    for (std::size_t k = 0; k < matched; ++k)
        report.spike_time_devs.push_back(candidate_spikes.events[k].t - reference_spikes.events[k].t);
    report.count_diff =
        static_cast<long long>(candidate_spikes.size()) - static_cast<long long>(reference_spikes.size());
    return report;
}

ErrorReport compare_fixed_vs_float(const PendulumParams& params, const InputSignal& input, const SimConfig& sim,
                                   const QFormat& q, std::size_t lut_size, bool interpolate) {
    SimConfig reference_sim = sim;
    reference_sim.integrator = Integrator::Euler;
    reference_sim.record_trace = true;
    const SingleRun reference = simulate_single(params, input, reference_sim);
    const FixedRun candidate = simulate_fixed(params, input, reference_sim, q, lut_size, interpolate);

    ErrorReport report = compare_runs(candidate.theta, candidate.spikes, trace_theta(reference.trace), reference.spikes);
    report.saturations = candidate.saturations;
    report.q_format = q;
    report.lut_size = lut_size;
    report.interpolated = interpolate;
    return report;
}

ErrorReport compare_float_vs_float(const PendulumParams& params, const InputSignal& input, const SimConfig& sim) {
    SimConfig reference_sim = sim;
    reference_sim.integrator = Integrator::Euler;
    reference_sim.record_trace = true;
    const SingleRun a = simulate_single(params, input, reference_sim);
    const SingleRun b = simulate_single(params, input, reference_sim);
    ErrorReport report = compare_runs(trace_theta(a.trace), a.spikes, trace_theta(b.trace), b.spikes);
    report.lut_size = 0;
    return report;
}

}  // namespace pendula::fixed
