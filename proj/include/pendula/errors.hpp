#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pendula {

/// Invalid parameters or configuration. Raised before any simulation work starts.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A step produced a non-finite state. Carries as much location context as
/// the raising layer knows; outer loops fill in the rest via with_context().
class IntegrationBlowup : public std::runtime_error {
public:
    explicit IntegrationBlowup(std::string what,
                               std::optional<std::size_t> step = std::nullopt,
                               std::optional<double> time_ms = std::nullopt,
                               std::optional<std::size_t> neuron = std::nullopt);

    [[nodiscard]] IntegrationBlowup with_context(std::optional<std::size_t> step,
                                                 std::optional<double> time_ms,
                                                 std::optional<std::size_t> neuron = std::nullopt) const;

    std::optional<std::size_t> step() const { return step_; }
    std::optional<double> time_ms() const { return time_ms_; }
    std::optional<std::size_t> neuron() const { return neuron_; }
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
    std::optional<std::size_t> step_;
    std::optional<double> time_ms_;
    std::optional<std::size_t> neuron_;
};

}  // namespace pendula
