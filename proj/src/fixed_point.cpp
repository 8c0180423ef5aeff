#include "pendula/fixed_point.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pendula/errors.hpp"

namespace pendula::fixed {

namespace {

__extension__ typedef unsigned __int128 UWide;

// floor(pi * 2^124); bin edges are placed against this rather than the rounded pi
// of the Q format, so quantizing pi does not shift them.
constexpr UWide kPiQ124 = (static_cast<UWide>(0x3243f6a8885a308dULL) << 64) | 0x313198a2e0370734ULL;
constexpr int kEdgeBits = 96;
constexpr UWide kPiEdge = kPiQ124 >> (124 - kEdgeBits);
constexpr std::size_t kMaxLutSize = std::size_t{1} << 24;

}  // namespace

void QFormat::validate() const {
    if (total_bits < 2 || total_bits > 63) throw ConfigError("q format: total_bits must be in [2, 63]");
    if (frac_bits < 1 || frac_bits >= total_bits) throw ConfigError("q format: need 1 <= frac_bits < total_bits");
}

double QFormat::resolution() const { return std::ldexp(1.0, -frac_bits); }

double QFormat::max_value() const { return std::ldexp(static_cast<double>(max_raw()), -frac_bits); }

Raw to_fixed(double x, const QFormat& q) {
    if (std::isnan(x)) throw std::domain_error("to_fixed: NaN");
    const double scaled = std::ldexp(x, q.frac_bits);
    if (scaled >= static_cast<double>(q.max_raw())) return q.max_raw();
    if (scaled <= static_cast<double>(q.min_raw())) return q.min_raw();
    return static_cast<Raw>(std::llround(scaled));  // ties away from zero
}

double from_fixed(Raw v, const QFormat& q) { return std::ldexp(static_cast<double>(v), -q.frac_bits); }

Raw Arithmetic::saturate(Wide v) {
    if (v > q_.max_raw()) {
        ++saturations_;
        return q_.max_raw();
    }
    if (v < q_.min_raw()) {
        ++saturations_;
        return q_.min_raw();
    }
    return static_cast<Raw>(v);
}

Raw Arithmetic::quantize(double x) {
    const double scaled = std::ldexp(x, q_.frac_bits);
    if (scaled > static_cast<double>(q_.max_raw()) || scaled < static_cast<double>(q_.min_raw())) ++saturations_;
    return to_fixed(x, q_);
}

Raw Arithmetic::add(Raw a, Raw b) { return saturate(static_cast<Wide>(a) + b); }
Raw Arithmetic::sub(Raw a, Raw b) { return saturate(static_cast<Wide>(a) - b); }
Raw Arithmetic::neg(Raw a) { return saturate(-static_cast<Wide>(a)); }

Raw Arithmetic::mul(Raw a, Raw b) {
    const Wide p = static_cast<Wide>(a) * b;
    const Wide half = static_cast<Wide>(1) << (q_.frac_bits - 1);
    const Wide r = p >= 0 ? (p + half) >> q_.frac_bits : -((-p + half) >> q_.frac_bits);
    return saturate(r);
}

SineLut::SineLut(std::size_t size, QFormat q, bool interpolate) : q_(q), interpolate_(interpolate) {
    q_.validate();
    if (size < 2 || size > kMaxLutSize || !std::has_single_bit(size))
        throw ConfigError("sine lut: size must be a power of two in [2, 2^24]");
    if (q_.max_value() <= 2.0 * std::numbers::pi) throw ConfigError("sine lut: q format cannot represent 2 pi");
    pi_ = to_fixed(std::numbers::pi, q_);
    two_pi_ = to_fixed(2.0 * std::numbers::pi, q_);
    table_.resize(size);
    const double bin = 2.0 * std::numbers::pi / static_cast<double>(size);
    for (std::size_t k = 0; k < size; ++k)
        table_[k] = to_fixed(std::sin(-std::numbers::pi + (static_cast<double>(k) + 0.5) * bin), q_);
}

double SineLut::error_bound() const {
    const double n = static_cast<double>(table_.size());
    if (interpolate_) {
        const double h = 2.0 * std::numbers::pi / n;
        return h * h / 8.0 + 2.0 * q_.resolution();
    }
    return std::numbers::pi / n + q_.resolution();
}

Raw SineLut::lookup(Raw theta) const {
    // shifted phase in [0, 2 pi)
    Wide s = (static_cast<Wide>(theta) + pi_) % two_pi_;
    if (s < 0) s += two_pi_;
    const auto n = static_cast<Wide>(table_.size());
    if (!interpolate_) {
        // bin of the wrapped phase, measured from an exact -pi
        const Wide w = s - pi_;
        const Wide x = w * (Wide{1} << (kEdgeBits - q_.frac_bits)) + static_cast<Wide>(kPiEdge);
        if (x <= 0) return table_.front();
        const UWide idx = static_cast<UWide>(x) * static_cast<UWide>(n) / (2 * kPiEdge);
        return table_[static_cast<std::size_t>(std::min<UWide>(idx, static_cast<UWide>(n - 1)))];
    }

    // position in bins relative to the first bin centre: u = s * n / two_pi - 1/2
    const Wide num = 2 * s * n - two_pi_;
    const Wide den = 2 * static_cast<Wide>(two_pi_);
    Wide k0 = num / den;
    Wide rem = num % den;
    if (rem < 0) {
        rem += den;
        --k0;
    }
    const auto i0 = static_cast<std::size_t>((k0 % n + n) % n);
    const auto i1 = (i0 + 1) % table_.size();
    const Wide diff = static_cast<Wide>(table_[i1]) - table_[i0];
    const Wide prod = diff * rem;
    const Wide step = prod >= 0 ? (2 * prod + den) / (2 * den) : -((-2 * prod + den) / (2 * den));
    return static_cast<Raw>(table_[i0] + step);
}

Raw lut_sin(Raw theta, const SineLut& lut) { return lut.lookup(theta); }

FixedParams FixedParams::quantize(const PendulumParams& p, const QFormat& q) {
    p.validate();
    FixedParams f;
    f.gamma = to_fixed(p.gamma, q);
    f.omega0_sq = to_fixed(p.omega0 * p.omega0, q);
    f.threshold_enabled = std::isfinite(p.threshold_theta);
    f.threshold = f.threshold_enabled ? to_fixed(p.threshold_theta, q) : q.max_raw();
    f.reset_theta = to_fixed(p.reset_theta, q);
    f.reset_dtheta = to_fixed(p.reset_dtheta, q);
    return f;
}

FixedStepResult step_pendulum_fixed(const FixedState& state, const FixedParams& params, Raw input, Raw dt,
                                    const SineLut& lut, Arithmetic& math) {
    const Raw damping = math.neg(math.mul(params.gamma, state.dtheta));
    const Raw restoring = math.mul(params.omega0_sq, lut_sin(state.theta, lut));
    const Raw accel = math.add(math.sub(damping, restoring), input);

    FixedState next;
    next.dtheta = math.add(state.dtheta, math.mul(accel, dt));
    next.theta = math.add(state.theta, math.mul(next.dtheta, dt));
    if (params.threshold_enabled && next.theta >= params.threshold)
        return {{params.reset_theta, params.reset_dtheta}, true};
    return {next, false};
}

FixedRun simulate_fixed(const PendulumParams& params, const InputSignal& input, const SimConfig& sim,
                        const QFormat& q, std::size_t lut_size, bool interpolate) {
    sim.validate();
    input.validate(sim.duration_ms);
    const SineLut lut(lut_size, q, interpolate);
    const FixedParams fp = FixedParams::quantize(params, q);
    Arithmetic math(q);
    const Raw dt = to_fixed(sim.dt_ms, q);
    if (dt <= 0) throw ConfigError("fixed point: dt quantizes to zero");

    FixedRun run;
    run.steps = sim.step_count();
    run.theta.reserve(run.steps);
    run.dtheta.reserve(run.steps);
    FixedState s{};
    for (std::size_t i = 1; i <= run.steps; ++i) {
        const double drive = input(sim.input_time(i));
        const Raw in = math.quantize(drive);
        const auto r = step_pendulum_fixed(s, fp, in, dt, lut, math);
        s = r.state;
        run.theta.push_back(from_fixed(s.theta, q));
        run.dtheta.push_back(from_fixed(s.dtheta, q));
        if (r.spiked) run.spikes.events.push_back({0, sim.time_of(i), i});
    }
    run.saturations = math.saturations();
    return run;
}

}  // namespace pendula::fixed
