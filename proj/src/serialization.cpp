#include "pendula/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "pendula/errors.hpp"

namespace pendula {

using nlohmann::json;

namespace {

std::string format_with(const char* fmt, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, x);
    return buf;
}

void expect_object(const json& j, const char* what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(std::string(what) + ": unknown field '" + key + "'");
    }
}

double get_real(const json& j, const char* key, double fallback, const char* what) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(std::string(what) + ": '" + key + "' must be a number");
    return v.get<double>();
}

// null encodes +infinity (a disabled threshold)
double get_threshold(const json& j, const char* key, double fallback, const char* what) {
    if (j.contains(key) && j.at(key).is_null()) return std::numeric_limits<double>::infinity();
    return get_real(j, key, fallback, what);
}

json threshold_json(double x) { return std::isinf(x) && x > 0 ? json(nullptr) : json(x); }

std::string get_string(const json& j, const char* key, const char* what) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw ConfigError(std::string(what) + ": '" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

}  // namespace

std::string format_real(double x) { return format_with("%.9g", x); }

void write_trace_csv(std::ostream& out, const TraceRecord& trace) {
    out << "t,theta,dtheta,input,spike\n";
    for (const auto& r : trace.rows)
        out << format_real(r.t) << ',' << format_real(r.theta) << ',' << format_real(r.dtheta) << ','
            << format_real(r.input) << ',' << (r.spiked ? 1 : 0) << '\n';
}

void write_spikes_csv(std::ostream& out, const SpikeTrain& spikes) {
    out << "neuron,t\n";
    for (const auto& e : spikes.events) out << e.neuron << ',' << format_real(e.t) << '\n';
}

void write_weights_csv(std::ostream& out, const WeightMatrix& w) {
    out << w.size() << '\n';
    for (std::size_t post = 0; post < w.size(); ++post) {
        for (std::size_t pre = 0; pre < w.size(); ++pre) {
            if (pre) out << ',';
            out << format_with("%.17g", w(post, pre));
        }
        out << '\n';
    }
}

void write_lut_csv(std::ostream& out, const fixed::SineLut& lut) {
    out << "index,angle,raw,value\n";
    const double bin = 2.0 * std::numbers::pi / static_cast<double>(lut.size());
    for (std::size_t k = 0; k < lut.size(); ++k) {
        const fixed::Raw raw = lut.entries()[k];
        out << k << ',' << format_real(-std::numbers::pi + (static_cast<double>(k) + 0.5) * bin) << ',' << raw << ','
            << format_real(fixed::from_fixed(raw, lut.format())) << '\n';
    }
}

SpikeTrain read_spikes_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "neuron,t") throw std::runtime_error("spikes csv: bad header");
    SpikeTrain train;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("spikes csv: malformed row");
        SpikeEvent e;
        e.neuron = std::stoul(line.substr(0, comma));
        e.t = std::stod(line.substr(comma + 1));
        train.events.push_back(e);
    }
    return train;
}

WeightMatrix read_weights_csv(std::istream& in, double w_min, double w_max) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("weights csv: missing size line");
    const std::size_t n = std::stoul(line);
    WeightMatrix w(n, w_min, w_max);
    for (std::size_t post = 0; post < n; ++post) {
        if (!std::getline(in, line)) throw std::runtime_error("weights csv: missing row");
        std::istringstream row(line);
        std::string cell;
        for (std::size_t pre = 0; pre < n; ++pre) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("weights csv: short row");
            w.at(post, pre) = std::stod(cell);
        }
    }
    return w;
}

json spikes_to_json(const SpikeTrain& spikes) {
    json out = json::array();
    for (const auto& e : spikes.events) out.push_back(json::array({e.neuron, e.t}));
    return out;
}

json weights_to_json(const WeightMatrix& w) {
    json rows = json::array();
    for (std::size_t post = 0; post < w.size(); ++post) {
        const auto r = w.row(post);
        rows.push_back(json(std::vector<double>(r.begin(), r.end())));
    }
    return {{"n", w.size()}, {"w_min", w.w_min()}, {"w_max", w.w_max()}, {"w", rows}};
}

json to_json(const fixed::QFormat& q) { return {{"total_bits", q.total_bits}, {"frac_bits", q.frac_bits}}; }

json error_report_to_json(const fixed::ErrorReport& r) {
    return {{"max_theta_err", r.max_theta_err},
            {"spike_time_devs", r.spike_time_devs},
            {"count_diff", r.count_diff},
            {"saturations", r.saturations},
            {"q_format", to_json(r.q_format)},
            {"lut_size", r.lut_size},
            {"interpolated", r.interpolated}};
}

json to_json(const InputSignal& s) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, input::Zero>) return {{"kind", "zero"}};
            else if constexpr (std::is_same_v<T, input::Constant>) return {{"kind", "constant"}, {"value", v.value}};
            else if constexpr (std::is_same_v<T, input::Sinusoid>)
                return {{"kind", "sinusoid"}, {"amplitude", v.amplitude}, {"angular_freq", v.angular_freq}, {"bias", v.bias}};
            else return {{"kind", "sampled"}, {"step_ms", v.step_ms}, {"values", v.values}};
        },
        s.variant());
}

InputSignal input_from_json(const json& j) {
    constexpr const char* what = "input";
    expect_object(j, what);
    const std::string kind = get_string(j, "kind", what);
    if (kind == "zero") {
        reject_unknown(j, {"kind"}, what);
        return InputSignal::zero();
    }
    if (kind == "constant") {
        reject_unknown(j, {"kind", "value"}, what);
        return InputSignal::constant(get_real(j, "value", 0.0, what));
    }
    if (kind == "sinusoid") {
        reject_unknown(j, {"kind", "amplitude", "angular_freq", "bias"}, what);
        return InputSignal::sinusoid(get_real(j, "amplitude", 0.0, what), get_real(j, "angular_freq", 0.0, what),
                                     get_real(j, "bias", 0.0, what));
    }
    if (kind == "sampled") {
        reject_unknown(j, {"kind", "step_ms", "values"}, what);
        if (!j.contains("values") || !j.at("values").is_array()) throw ConfigError("input: sampled needs 'values'");
        std::vector<double> values;
        for (const auto& v : j.at("values")) {
            if (!v.is_number()) throw ConfigError("input: sampled values must be numbers");
            values.push_back(v.get<double>());
        }
        return InputSignal::sampled(get_real(j, "step_ms", 1.0, what), std::move(values));
    }
    throw ConfigError("input: unknown kind '" + kind + "'");
}

json to_json(const ModelParams& p) {
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PendulumParams>)
                return {{"kind", "pendulum"},          {"gamma", m.gamma},           {"omega0", m.omega0},
                        {"threshold_theta", threshold_json(m.threshold_theta)},
                        {"reset_theta", m.reset_theta}, {"reset_dtheta", m.reset_dtheta}};
            else if constexpr (std::is_same_v<T, WheelParams>)
                return {{"kind", "wheel"}, {"omega", m.omega}, {"alpha", m.alpha},
                        {"threshold_theta", threshold_json(m.threshold_theta)}};
            else if constexpr (std::is_same_v<T, LifParams>)
                return {{"kind", "lif"},       {"tau_m", m.tau_m},     {"v_rest", m.v_rest},
                        {"v_threshold", threshold_json(m.v_threshold)}, {"v_reset", m.v_reset},
                        {"resistance", m.resistance}};
            else
                return {{"kind", "izhikevich"}, {"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d},
                        {"v_threshold", threshold_json(m.v_threshold)}};
        },
        p);
}

ModelParams model_from_json(const json& j) {
    constexpr const char* what = "model";
    expect_object(j, what);
    const std::string kind = get_string(j, "kind", what);
    if (kind == "pendulum") {
        reject_unknown(j, {"kind", "gamma", "omega0", "threshold_theta", "reset_theta", "reset_dtheta"}, what);
        PendulumParams p;
        p.gamma = get_real(j, "gamma", p.gamma, what);
        p.omega0 = get_real(j, "omega0", p.omega0, what);
        p.threshold_theta = get_threshold(j, "threshold_theta", p.threshold_theta, what);
        p.reset_theta = get_real(j, "reset_theta", p.reset_theta, what);
        p.reset_dtheta = get_real(j, "reset_dtheta", p.reset_dtheta, what);
        return p;
    }
    if (kind == "wheel") {
        reject_unknown(j, {"kind", "omega", "alpha", "threshold_theta"}, what);
        WheelParams p;
        p.omega = get_real(j, "omega", p.omega, what);
        p.alpha = get_real(j, "alpha", p.alpha, what);
        p.threshold_theta = get_threshold(j, "threshold_theta", p.threshold_theta, what);
        return p;
    }
    if (kind == "lif") {
        reject_unknown(j, {"kind", "tau_m", "v_rest", "v_threshold", "v_reset", "resistance"}, what);
        LifParams p;
        p.tau_m = get_real(j, "tau_m", p.tau_m, what);
        p.v_rest = get_real(j, "v_rest", p.v_rest, what);
        p.v_threshold = get_threshold(j, "v_threshold", p.v_threshold, what);
        p.v_reset = get_real(j, "v_reset", p.v_reset, what);
        p.resistance = get_real(j, "resistance", p.resistance, what);
        return p;
    }
    if (kind == "izhikevich") {
        reject_unknown(j, {"kind", "a", "b", "c", "d", "v_threshold"}, what);
        IzhikevichParams p;
        p.a = get_real(j, "a", p.a, what);
        p.b = get_real(j, "b", p.b, what);
        p.c = get_real(j, "c", p.c, what);
        p.d = get_real(j, "d", p.d, what);
        p.v_threshold = get_threshold(j, "v_threshold", p.v_threshold, what);
        return p;
    }
    throw ConfigError("model: unknown kind '" + kind + "'");
}

json to_json(const SimConfig& s) {
    return {{"duration_ms", s.duration_ms},
            {"dt_ms", s.dt_ms},
            {"integrator", s.integrator == Integrator::Euler ? "euler" : "rk4"},
            {"record_trace", s.record_trace},
            {"input_clock", s.input_clock == InputClock::Step ? "step" : "linspace"}};
}

SimConfig sim_from_json(const json& j, SimConfig base) {
    constexpr const char* what = "sim";
    expect_object(j, what);
    reject_unknown(j, {"duration_ms", "dt_ms", "integrator", "record_trace", "input_clock"}, what);
    base.duration_ms = get_real(j, "duration_ms", base.duration_ms, what);
    base.dt_ms = get_real(j, "dt_ms", base.dt_ms, what);
    if (j.contains("integrator")) {
        const std::string v = get_string(j, "integrator", what);
        if (v == "euler") base.integrator = Integrator::Euler;
        else if (v == "rk4") base.integrator = Integrator::Rk4;
        else throw ConfigError("sim: integrator must be 'euler' or 'rk4'");
    }
    if (j.contains("record_trace")) {
        if (!j.at("record_trace").is_boolean()) throw ConfigError("sim: 'record_trace' must be a boolean");
        base.record_trace = j.at("record_trace").get<bool>();
    }
    if (j.contains("input_clock")) {
        const std::string v = get_string(j, "input_clock", what);
        if (v == "step") base.input_clock = InputClock::Step;
        else if (v == "linspace") base.input_clock = InputClock::Linspace;
        else throw ConfigError("sim: input_clock must be 'step' or 'linspace'");
    }
    return base;
}

json to_json(const StdpParams& p) {
    return {{"a_plus", p.a_plus}, {"a_minus", p.a_minus}, {"tau_plus", p.tau_plus}, {"tau_minus", p.tau_minus}};
}

StdpParams stdp_from_json(const json& j) {
    constexpr const char* what = "stdp";
    expect_object(j, what);
    reject_unknown(j, {"a_plus", "a_minus", "tau_plus", "tau_minus"}, what);
    StdpParams p;
    p.a_plus = get_real(j, "a_plus", p.a_plus, what);
    p.a_minus = get_real(j, "a_minus", p.a_minus, what);
    p.tau_plus = get_real(j, "tau_plus", p.tau_plus, what);
    p.tau_minus = get_real(j, "tau_minus", p.tau_minus, what);
    return p;
}

json to_json(const HebbianParams& p) { return {{"eta", p.eta}, {"window_ms", p.window_ms}}; }

HebbianParams hebbian_from_json(const json& j) {
    constexpr const char* what = "hebbian";
    expect_object(j, what);
    reject_unknown(j, {"eta", "window_ms"}, what);
    HebbianParams p;
    p.eta = get_real(j, "eta", p.eta, what);
    p.window_ms = get_real(j, "window_ms", p.window_ms, what);
    return p;
}

}  // namespace pendula
