#include "pendula/errors.hpp"

#include <sstream>

namespace pendula {

namespace {

std::string describe(const std::string& reason, std::optional<std::size_t> step, std::optional<double> time_ms,
                     std::optional<std::size_t> neuron) {
    std::ostringstream os;
    os << "integration blowup: " << reason;
    if (neuron) os << " (neuron " << *neuron << ")";
    if (step) os << " at step " << *step;
    if (time_ms) os << " t=" << *time_ms << " ms";
    return os.str();
}

}  // namespace

IntegrationBlowup::IntegrationBlowup(std::string what, std::optional<std::size_t> step,
                                     std::optional<double> time_ms, std::optional<std::size_t> neuron)
    : std::runtime_error(describe(what, step, time_ms, neuron)),
      reason_(std::move(what)),
      step_(step),
      time_ms_(time_ms),
      neuron_(neuron) {}

IntegrationBlowup IntegrationBlowup::with_context(std::optional<std::size_t> step, std::optional<double> time_ms,
                                                  std::optional<std::size_t> neuron) const {
    return IntegrationBlowup(reason_, step ? step : step_, time_ms ? time_ms : time_ms_,
                             neuron ? neuron : neuron_);
}

}  // namespace pendula
