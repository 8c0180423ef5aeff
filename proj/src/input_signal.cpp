#include "pendula/input_signal.hpp"

#include <algorithm>
#include <cmath>

#include "pendula/errors.hpp"

namespace pendula {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double InputSignal::operator()(double t_ms) const {
    return std::visit(
        overloaded{
            [](const input::Zero&) { return 0.0; },
            [](const input::Constant& c) { return c.value; },
            [t_ms](const input::Sinusoid& s) { return s.amplitude * std::sin(s.angular_freq * t_ms) + s.bias; },
            [t_ms](const input::Sampled& s) {
                const double pos = std::round(t_ms / s.step_ms);
                if (!(pos > 0.0)) return s.values.front();
                const auto last = static_cast<double>(s.values.size() - 1);
                return s.values[static_cast<std::size_t>(std::min(pos, last))];
            },
        },
        v_);
}

void InputSignal::validate(double duration_ms) const {
    std::visit(overloaded{
                   [](const input::Zero&) {},
                   [](const input::Constant& c) {
                       if (!std::isfinite(c.value)) throw ConfigError("constant input must be finite");
                   },
                   [](const input::Sinusoid& s) {
                       if (!std::isfinite(s.amplitude) || !std::isfinite(s.angular_freq) || !std::isfinite(s.bias))
                           throw ConfigError("sinusoid input parameters must be finite");
                   },
                   [duration_ms](const input::Sampled& s) {
                       if (!(s.step_ms > 0.0) || !std::isfinite(s.step_ms))
                           throw ConfigError("sampled input step must be positive");
                       if (s.values.empty()) throw ConfigError("sampled input has no values");
                       for (double v : s.values)
                           if (!std::isfinite(v)) throw ConfigError("sampled input values must be finite");
                       const double covered = static_cast<double>(s.values.size() - 1) * s.step_ms;
                       // half a sample of slack: nearest-sample lookup is defined up to there
                       if (covered + 0.5 * s.step_ms < duration_ms)
                           throw ConfigError("sampled input does not cover the simulated duration");
                   },
               },
               v_);
}

InputSignal delayed_sampled(const InputSignal& base, double delay_ms, double step_ms, double duration_ms) {
    if (!(step_ms > 0.0)) throw ConfigError("sample step must be positive");
    const auto count = static_cast<std::size_t>(std::floor(duration_ms / step_ms + 1e-9)) + 1;
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) * step_ms;
        values[k] = t < delay_ms - 1e-9 ? 0.0 : base(t - delay_ms);
    }
    return InputSignal::sampled(step_ms, std::move(values));
}

}  // namespace pendula
