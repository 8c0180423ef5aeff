#pragma once

#include <variant>
#include <vector>

namespace pendula {

namespace input {

struct Zero {
    friend bool operator==(const Zero&, const Zero&) = default;
};

struct Constant {
    double value = 0.0;

    friend bool operator==(const Constant&, const Constant&) = default;
};

/// amplitude * sin(angular_freq * t) + bias, t in ms.
struct Sinusoid {
    double amplitude = 0.0;
    double angular_freq = 0.0;
    double bias = 0.0;

    friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
};

/// Uniformly sampled waveform starting at t = 0; evaluated by nearest sample.
struct Sampled {
    double step_ms = 1.0;
    std::vector<double> values;

    friend bool operator==(const Sampled&, const Sampled&) = default;
};

}  // namespace input

/// External drive I(t) for one neuron.
class InputSignal {
public:
    using Variant = std::variant<input::Zero, input::Constant, input::Sinusoid, input::Sampled>;

    InputSignal() = default;
    InputSignal(input::Zero v) : v_(v) {}
    InputSignal(input::Constant v) : v_(v) {}
    InputSignal(input::Sinusoid v) : v_(v) {}
    InputSignal(input::Sampled v) : v_(std::move(v)) {}

    static InputSignal zero() { return input::Zero{}; }
    static InputSignal constant(double c) { return input::Constant{c}; }
    static InputSignal sinusoid(double amplitude, double angular_freq, double bias) {
        return input::Sinusoid{amplitude, angular_freq, bias};
    }
    static InputSignal sampled(double step_ms, std::vector<double> values) {
        return input::Sampled{step_ms, std::move(values)};
    }

    /// Value at time t (ms). Sampled signals clamp to their first/last sample
    /// outside the covered range.
    double operator()(double t_ms) const;

    /// Throws ConfigError if the signal is malformed or does not cover [0, duration].
    void validate(double duration_ms) const;

    const Variant& variant() const { return v_; }
    bool is_zero() const { return std::holds_alternative<input::Zero>(v_); }

    friend bool operator==(const InputSignal&, const InputSignal&) = default;

private:
    Variant v_;
};

/// Copy of `base` delayed by `delay_ms`: zero drive before the delay, base(t - delay) after.
/// Sampled on a grid of `step_ms` up to `duration_ms`.
InputSignal delayed_sampled(const InputSignal& base, double delay_ms, double step_ms, double duration_ms);

}  // namespace pendula
