#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pendula/fixed_compare.hpp"
#include "pendula/fixed_point.hpp"
#include "pendula/input_signal.hpp"
#include "pendula/network.hpp"
#include "pendula/neuron_models.hpp"
#include "pendula/plasticity.hpp"
#include "pendula/simulation.hpp"

namespace pendula {

/// "%.9g" formatting used for every time and state column.
std::string format_real(double x);

/// Header `t,theta,dtheta,input,spike`.
void write_trace_csv(std::ostream& out, const TraceRecord& trace);
/// Header `neuron,t`.
void write_spikes_csv(std::ostream& out, const SpikeTrain& spikes);
/// First line n, then n rows of n comma-separated weights (post-major), 17 significant digits.
void write_weights_csv(std::ostream& out, const WeightMatrix& w);
/// LUT dump: `index,angle,raw,value`.
void write_lut_csv(std::ostream& out, const fixed::SineLut& lut);

SpikeTrain read_spikes_csv(std::istream& in);
/// Reads the bounds-free CSV form; bounds come from the arguments.
WeightMatrix read_weights_csv(std::istream& in, double w_min, double w_max);

/// List of [neuron, t] pairs.
nlohmann::json spikes_to_json(const SpikeTrain& spikes);
nlohmann::json weights_to_json(const WeightMatrix& w);
nlohmann::json error_report_to_json(const fixed::ErrorReport& report);

// Config fragments. Parsers reject unknown keys with ConfigError.
nlohmann::json to_json(const InputSignal& s);
InputSignal input_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ModelParams& p);
ModelParams model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SimConfig& s);
/// Missing keys keep the values already in `base`.
SimConfig sim_from_json(const nlohmann::json& j, SimConfig base = {});

nlohmann::json to_json(const StdpParams& p);
StdpParams stdp_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HebbianParams& p);
HebbianParams hebbian_from_json(const nlohmann::json& j);

nlohmann::json to_json(const fixed::QFormat& q);

}  // namespace pendula
