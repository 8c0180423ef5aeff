#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pendula/input_signal.hpp"
#include "pendula/neuron_models.hpp"
#include "pendula/simulation.hpp"

namespace pendula::fixed {

/// Raw two's-complement fixed-point value. Only the low total_bits are meaningful.
using Raw = std::int64_t;
/// Intermediate width for products and sums before saturation.
__extension__ typedef __int128 Wide;

/// Signed Q format with total_bits in [2, 63] and 1 <= frac_bits < total_bits.
struct QFormat {
    int total_bits = 32;
    int frac_bits = 16;

    void validate() const;
    Raw max_raw() const { return (Raw{1} << (total_bits - 1)) - 1; }
    Raw min_raw() const { return -(Raw{1} << (total_bits - 1)); }
    double resolution() const;
    double max_value() const;

    friend bool operator==(const QFormat&, const QFormat&) = default;
};

/// Round to nearest (ties away from zero), saturating at the format range.
/// Throws std::domain_error for NaN.
Raw to_fixed(double x, const QFormat& q);
double from_fixed(Raw v, const QFormat& q);

/// Saturating arithmetic in one Q format. Every clamped result bumps the
/// saturation counter.
class Arithmetic {
public:
    explicit Arithmetic(QFormat q) : q_(q) { q_.validate(); }

    const QFormat& format() const { return q_; }

    Raw add(Raw a, Raw b);
    Raw sub(Raw a, Raw b);
    Raw neg(Raw a);
    /// Product rounded to nearest, ties away from zero.
    Raw mul(Raw a, Raw b);
    Raw saturate(Wide v);
    /// to_fixed() that counts out-of-range values as saturations.
    Raw quantize(double x);

    std::uint64_t saturations() const { return saturations_; }
    void reset_saturations() { saturations_ = 0; }

private:
    QFormat q_;
    std::uint64_t saturations_ = 0;
};

/// Table of sin over [-pi, pi), sampled at bin centres:
/// entry k = sin(-pi + (k + 0.5) * 2 pi / size), quantized to the Q format.
class SineLut {
public:
    SineLut(std::size_t size, QFormat q, bool interpolate = false);

    std::size_t size() const { return table_.size(); }
    const QFormat& format() const { return q_; }
    bool interpolating() const { return interpolate_; }
    const std::vector<Raw>& entries() const { return table_; }

    /// to_fixed(pi) and to_fixed(2 pi) in this format.
    Raw pi_raw() const { return pi_; }
    Raw two_pi_raw() const { return two_pi_; }

    /// Bound on |from_fixed(lookup(theta)) - sin(theta)| for nearest-entry lookup.
    double error_bound() const;

    /// Wraps theta into [-pi, pi) by integer reduction modulo to_fixed(2 pi), then
    /// returns the entry whose bin contains it (or the linear blend of the two
    /// neighbouring entries when interpolating). Bin edges sit at -pi + k * 2 pi / size
    /// computed from a high-precision pi.
    Raw lookup(Raw theta) const;

private:
    QFormat q_;
    bool interpolate_;
    Raw pi_;
    Raw two_pi_;
    std::vector<Raw> table_;
};

Raw lut_sin(Raw theta, const SineLut& lut);

struct FixedState {
    Raw theta = 0;
    Raw dtheta = 0;

    friend bool operator==(const FixedState&, const FixedState&) = default;
};

/// Pendulum parameters quantized once.
struct FixedParams {
    Raw gamma = 0;
    Raw omega0_sq = 0;
    Raw threshold = 0;
    Raw reset_theta = 0;
    Raw reset_dtheta = 0;
    bool threshold_enabled = true;

    static FixedParams quantize(const PendulumParams& p, const QFormat& q);
};

struct FixedStepResult {
    FixedState state;
    bool spiked = false;
};

/// Fixed-point mirror of the semi-implicit Euler step: acceleration from the old state
/// (LUT sine, rounded products, saturating sums), velocity first, then phase from the
/// new velocity, then threshold compare and reset.
FixedStepResult step_pendulum_fixed(const FixedState& state, const FixedParams& params, Raw input, Raw dt,
                                    const SineLut& lut, Arithmetic& math);

struct FixedRun {
    /// Per step 1..N, post-reset, converted back to real.
    std::vector<double> theta;
    std::vector<double> dtheta;
    SpikeTrain spikes;
    std::uint64_t saturations = 0;
    std::size_t steps = 0;
};

/// Same step loop and time grid as simulate_single; time is an integer step count.
FixedRun simulate_fixed(const PendulumParams& params, const InputSignal& input, const SimConfig& sim,
                        const QFormat& q, std::size_t lut_size, bool interpolate = false);

}  // namespace pendula::fixed
