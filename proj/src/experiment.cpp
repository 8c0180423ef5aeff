#include "pendula/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pendula/errors.hpp"
#include "pendula/serialization.hpp"

namespace pendula::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::pair<Kind, std::string_view> kKindNames[] = {
    {Kind::Single, "single"},
    {Kind::Layer, "layer"},
    {Kind::Stdp, "stdp"},
    {Kind::Hebbian, "hebbian"},
    {Kind::CompareModels, "compare-models"},
    {Kind::FixedpointReport, "fixedpoint-report"},
};

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + ": expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(what + ": unknown field '" + key + "'");
}

template <typename T>
T get_number(const json& j, const char* key, T fallback, const std::string& what) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(what + ": '" + key + "' must be a number");
    } else {
        if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0 && std::is_unsigned_v<T>))
            throw ConfigError(what + ": '" + key + "' must be a non-negative integer");
    }
    return v.get<T>();
}

bool get_bool(const json& j, const char* key, bool fallback, const std::string& what) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw ConfigError(what + ": '" + key + "' must be a boolean");
    return j.at(key).get<bool>();
}

PendulumParams pendulum_from_json(const json& j, const std::string& what) {
    const ModelParams m = model_from_json(j);
    if (!std::holds_alternative<PendulumParams>(m)) throw ConfigError(what + ": expected a pendulum model");
    return std::get<PendulumParams>(m);
}

template <typename T, typename F>
std::vector<T> one_or_many(const json& j, F&& parse) {
    std::vector<T> out;
    if (j.is_array()) {
        for (const auto& e : j) out.push_back(parse(e));
    } else {
        out.push_back(parse(j));
    }
    return out;
}

std::string_view weight_init_name(WeightInit w) {
    switch (w) {
        case WeightInit::Zero: return "zero";
        case WeightInit::Constant: return "constant";
        default: return "random";
    }
}

void parse_network(const json& j, NetworkSpec& net) {
    const std::string what = "network";
    reject_unknown(j, {"n", "params", "inputs", "syn_tau", "syn_gain", "weights", "delay_ms", "snapshot_every",
                       "record_traces"},
                   what);
    net.n = get_number<std::size_t>(j, "n", net.n, what);
    if (j.contains("params"))
        net.params = one_or_many<PendulumParams>(j.at("params"), [](const json& e) {
            return pendulum_from_json(e, "network.params");
        });
    if (j.contains("inputs"))
        net.inputs = one_or_many<InputSignal>(j.at("inputs"), [](const json& e) { return input_from_json(e); });
    net.syn_tau = get_number<double>(j, "syn_tau", net.syn_tau, what);
    net.syn_gain = get_number<double>(j, "syn_gain", net.syn_gain, what);
    net.delay_ms = get_number<double>(j, "delay_ms", net.delay_ms, what);
    net.snapshot_every = get_number<std::size_t>(j, "snapshot_every", net.snapshot_every, what);
    net.record_traces = get_bool(j, "record_traces", net.record_traces, what);
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        reject_unknown(w, {"init", "value", "w_min", "w_max"}, "network.weights");
        if (w.contains("init")) {
            if (!w.at("init").is_string()) throw ConfigError("network.weights: 'init' must be a string");
            const auto name = w.at("init").get<std::string>();
            if (name == "zero") net.weight_init = WeightInit::Zero;
            else if (name == "constant") net.weight_init = WeightInit::Constant;
            else if (name == "random") net.weight_init = WeightInit::Random;
            else throw ConfigError("network.weights: init must be zero, constant or random");
        }
        net.weight_value = get_number<double>(w, "value", net.weight_value, "network.weights");
        net.w_min = get_number<double>(w, "w_min", net.w_min, "network.weights");
        net.w_max = get_number<double>(w, "w_max", net.w_max, "network.weights");
    }
}

void parse_plasticity(const json& j, PlasticityConfig& p) {
    reject_unknown(j, {"stdp", "hebbian"}, "plasticity");
    if (j.contains("stdp")) {
        if (j.at("stdp").is_null()) p.stdp.reset();
        else p.stdp = stdp_from_json(j.at("stdp"));
    }
    if (j.contains("hebbian")) {
        if (j.at("hebbian").is_null()) p.hebbian.reset();
        else p.hebbian = hebbian_from_json(j.at("hebbian"));
    }
}

void parse_compare(const json& j, CompareSettings& c) {
    const std::string what = "compare";
    reject_unknown(j, {"pendulum", "lif", "izhikevich", "pendulum_input", "lif_input", "izhikevich_input",
                       "timing_repeats"},
                   what);
    if (j.contains("pendulum")) c.pendulum = pendulum_from_json(j.at("pendulum"), "compare.pendulum");
    if (j.contains("lif")) {
        const auto m = model_from_json(j.at("lif"));
        if (!std::holds_alternative<LifParams>(m)) throw ConfigError("compare.lif: expected a lif model");
        c.lif = std::get<LifParams>(m);
    }
    if (j.contains("izhikevich")) {
        const auto m = model_from_json(j.at("izhikevich"));
        if (!std::holds_alternative<IzhikevichParams>(m))
            throw ConfigError("compare.izhikevich: expected an izhikevich model");
        c.izhikevich = std::get<IzhikevichParams>(m);
    }
    c.pendulum_input = get_number<double>(j, "pendulum_input", c.pendulum_input, what);
    c.lif_input = get_number<double>(j, "lif_input", c.lif_input, what);
    c.izhikevich_input = get_number<double>(j, "izhikevich_input", c.izhikevich_input, what);
    c.timing_repeats = get_number<int>(j, "timing_repeats", c.timing_repeats, what);
}

void parse_fixedpoint(const json& j, FixedpointSpec& f) {
    const std::string what = "fixedpoint";
    reject_unknown(j, {"total_bits", "frac_bits", "lut_sizes", "interpolate"}, what);
    f.total_bits = get_number<int>(j, "total_bits", f.total_bits, what);
    f.interpolate = get_bool(j, "interpolate", f.interpolate, what);
    const auto int_list = [&](const char* key, auto& out) {
        if (!j.contains(key)) return;
        const auto& a = j.at(key);
        if (!a.is_array()) throw ConfigError(what + ": '" + key + "' must be an array");
        out.clear();
        for (const auto& e : a) {
            if (!e.is_number_integer() || e.get<long long>() < 0)
                throw ConfigError(what + ": '" + key + "' entries must be non-negative integers");
            out.push_back(e.get<typename std::decay_t<decltype(out)>::value_type>());
        }
    };
    int_list("frac_bits", f.frac_bits);
    int_list("lut_sizes", f.lut_sizes);
}

void write_file(const fs::path& dir, const fs::path& name, const std::string& content, RunOutputs& outputs) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + (dir / name).string());
    outputs.files.push_back(name);
}

template <typename F>
std::string render(F&& f) {
    std::ostringstream os;
    f(os);
    return os.str();
}

void prepare_out_dir(const ExperimentConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + config.out_dir.string() + ": " + ec.message());
}

void write_run_record(const ExperimentConfig& config, RunOutputs& outputs) {
    write_file(config.out_dir, "run.json", run_record(config).dump(2) + "\n", outputs);
}

void write_spikes(const ExperimentConfig& config, const SpikeTrain& spikes, RunOutputs& outputs) {
    if (config.format == OutputFormat::Json)
        write_file(config.out_dir, "spikes.json", spikes_to_json(spikes).dump() + "\n", outputs);
    else
        write_file(config.out_dir, "spikes.csv", render([&](std::ostream& os) { write_spikes_csv(os, spikes); }), outputs);
}

void write_weights(const ExperimentConfig& config, const std::string& stem, const WeightMatrix& w, RunOutputs& outputs) {
    if (config.format == OutputFormat::Json)
        write_file(config.out_dir, stem + ".json", weights_to_json(w).dump() + "\n", outputs);
    else
        write_file(config.out_dir, stem + ".csv", render([&](std::ostream& os) { write_weights_csv(os, w); }), outputs);
}

}  // namespace

std::string_view kind_name(Kind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "unknown";
}

std::optional<Kind> kind_from_name(std::string_view name) {
    for (const auto& [kind, n] : kKindNames)
        if (n == name) return kind;
    return std::nullopt;
}

ExperimentConfig default_config(Kind kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.out_dir = "pendula-out";
    const ReferenceSetup reference = reference_sinusoid_setup();
    switch (kind) {
        case Kind::Single:
        case Kind::FixedpointReport:
            c.model = reference.params;
            c.input = reference.input;
            c.sim = reference.sim;
            break;
        case Kind::Layer:
            c.sim.input_clock = InputClock::Step;
            c.sim.record_trace = false;
            c.network.n = 5;
            c.network.inputs = {InputSignal::constant(1.5)};
            c.network.weight_init = WeightInit::Constant;
            c.network.weight_value = 0.1;
            break;
        case Kind::Stdp:
            c.sim.input_clock = InputClock::Step;
            c.sim.record_trace = false;
            c.network.n = 2;
            c.network.inputs = {InputSignal::constant(2.0),
                                delayed_sampled(InputSignal::constant(2.0), 5.0, c.sim.dt_ms, c.sim.duration_ms)};
            c.network.plasticity.stdp = StdpParams{};
            break;
        case Kind::Hebbian:
            c.sim.input_clock = InputClock::Step;
            c.sim.record_trace = false;
            c.network.n = 2;
            c.network.inputs = {InputSignal::constant(1.5)};
            c.network.plasticity.hebbian = HebbianParams{0.001, 0.0};
            break;
        case Kind::CompareModels:
            c.sim.input_clock = InputClock::Step;
            c.sim.record_trace = false;
            break;
    }
    return c;
}

void ExperimentConfig::validate() const {
    if (version != kConfigVersion) throw ConfigError("config: unsupported version " + std::to_string(version));
    if (out_dir.empty()) throw ConfigError("config: out_dir must not be empty");
    sim.validate();
    switch (kind) {
        case Kind::Single:
            pendula::validate(model);
            input.validate(sim.duration_ms);
            if (sim.integrator == Integrator::Rk4 && !std::holds_alternative<PendulumParams>(model))
                throw ConfigError("config: rk4 is only available for the pendulum model");
            if (initial_state && (!std::isfinite(initial_state->theta) || !std::isfinite(initial_state->dtheta)))
                throw ConfigError("config: initial_state must be finite");
            break;
        case Kind::Layer:
        case Kind::Stdp:
        case Kind::Hebbian: {
            if (sim.integrator != Integrator::Euler) throw ConfigError("config: network runs support euler only");
            if (network.n < 1) throw ConfigError("network: n must be >= 1");
            if (!std::isfinite(network.w_min) || !std::isfinite(network.w_max) || network.w_min > network.w_max)
                throw ConfigError("network.weights: need finite w_min <= w_max");
            if (network.delay_ms != 0.0) throw ConfigError("network: delay_ms must be 0 (delays are not modelled)");
            const LayerConfig layer = make_layer_config(*this);
            layer.validate();
            for (const auto& in : layer.inputs) in.validate(sim.duration_ms);
            if (kind == Kind::Stdp && !network.plasticity.stdp) throw ConfigError("stdp experiment needs plasticity.stdp");
            if (kind == Kind::Hebbian && !network.plasticity.hebbian)
                throw ConfigError("hebbian experiment needs plasticity.hebbian");
            break;
        }
        case Kind::CompareModels:
            compare.pendulum.validate();
            compare.lif.validate();
            compare.izhikevich.validate();
            if (sim.integrator != Integrator::Euler) throw ConfigError("compare-models runs all models with euler");
            if (compare.timing_repeats < 1) throw ConfigError("compare: timing_repeats must be >= 1");
            for (double v : {compare.pendulum_input, compare.lif_input, compare.izhikevich_input})
                if (!std::isfinite(v)) throw ConfigError("compare: inputs must be finite");
            break;
        case Kind::FixedpointReport:
            if (!std::holds_alternative<PendulumParams>(model))
                throw ConfigError("fixedpoint-report: model must be a pendulum");
            pendula::validate(model);
            input.validate(sim.duration_ms);
            if (sim.integrator != Integrator::Euler) throw ConfigError("fixedpoint-report mirrors the euler path only");
            if (fixedpoint.frac_bits.empty() || fixedpoint.lut_sizes.empty())
                throw ConfigError("fixedpoint: grid must not be empty");
            for (int f : fixedpoint.frac_bits) {
                const fixed::QFormat q{fixedpoint.total_bits, f};
                q.validate();
                for (std::size_t size : fixedpoint.lut_sizes) fixed::SineLut(size, q, fixedpoint.interpolate);
            }
            break;
    }
}

ExperimentConfig parse_config(const json& doc, Kind kind) {
    const json* body = &doc;
    if (doc.is_object() && doc.contains("format_version") && doc.contains("config")) body = &doc.at("config");
    const json& j = *body;
    reject_unknown(j, {"version", "experiment", "seed", "format", "out_dir", "model", "input", "initial_state", "sim",
                       "network", "plasticity", "compare", "fixedpoint"},
                   "config");

    if (j.contains("experiment")) {
        if (!j.at("experiment").is_string()) throw ConfigError("config: 'experiment' must be a string");
        const auto named = kind_from_name(j.at("experiment").get<std::string>());
        if (!named) throw ConfigError("config: unknown experiment '" + j.at("experiment").get<std::string>() + "'");
        if (*named != kind)
            throw ConfigError("config: file is for '" + std::string(kind_name(*named)) + "', not '" +
                              std::string(kind_name(kind)) + "'");
    }

    ExperimentConfig c = default_config(kind);
    c.version = get_number<int>(j, "version", c.version, "config");
    c.seed = get_number<std::uint64_t>(j, "seed", c.seed, "config");
    if (j.contains("format")) {
        const auto f = j.at("format").is_string() ? j.at("format").get<std::string>() : std::string{};
        if (f == "csv") c.format = OutputFormat::Csv;
        else if (f == "json") c.format = OutputFormat::Json;
        else throw ConfigError("config: format must be 'csv' or 'json'");
    }
    if (j.contains("out_dir")) {
        if (!j.at("out_dir").is_string()) throw ConfigError("config: 'out_dir' must be a string");
        c.out_dir = j.at("out_dir").get<std::string>();
    }
    if (j.contains("model")) c.model = model_from_json(j.at("model"));
    if (j.contains("input")) c.input = input_from_json(j.at("input"));
    if (j.contains("initial_state")) {
        const auto& s = j.at("initial_state");
        if (s.is_null()) {
            c.initial_state.reset();
        } else {
            reject_unknown(s, {"theta", "dtheta"}, "initial_state");
            c.initial_state = NeuronState{get_number<double>(s, "theta", 0.0, "initial_state"),
                                          get_number<double>(s, "dtheta", 0.0, "initial_state")};
        }
    }
    if (j.contains("sim")) c.sim = sim_from_json(j.at("sim"), c.sim);
    if (j.contains("network")) parse_network(j.at("network"), c.network);
    if (j.contains("plasticity")) parse_plasticity(j.at("plasticity"), c.network.plasticity);
    if (j.contains("compare")) parse_compare(j.at("compare"), c.compare);
    if (j.contains("fixedpoint")) parse_fixedpoint(j.at("fixedpoint"), c.fixedpoint);
    return c;
}

json to_json(const ExperimentConfig& c) {
    json net = {
        {"n", c.network.n},
        {"syn_tau", c.network.syn_tau},
        {"syn_gain", c.network.syn_gain},
        {"delay_ms", c.network.delay_ms},
        {"snapshot_every", c.network.snapshot_every},
        {"record_traces", c.network.record_traces},
        {"weights",
         {{"init", weight_init_name(c.network.weight_init)},
          {"value", c.network.weight_value},
          {"w_min", c.network.w_min},
          {"w_max", c.network.w_max}}},
    };
    net["params"] = json::array();
    for (const auto& p : c.network.params) net["params"].push_back(pendula::to_json(ModelParams{p}));
    net["inputs"] = json::array();
    for (const auto& in : c.network.inputs) net["inputs"].push_back(pendula::to_json(in));

    const auto& pl = c.network.plasticity;
    json plasticity = {{"stdp", pl.stdp ? pendula::to_json(*pl.stdp) : json(nullptr)},
                       {"hebbian", pl.hebbian ? pendula::to_json(*pl.hebbian) : json(nullptr)}};

    json compare = {
        {"pendulum", pendula::to_json(ModelParams{c.compare.pendulum})},
        {"lif", pendula::to_json(ModelParams{c.compare.lif})},
        {"izhikevich", pendula::to_json(ModelParams{c.compare.izhikevich})},
        {"pendulum_input", c.compare.pendulum_input},
        {"lif_input", c.compare.lif_input},
        {"izhikevich_input", c.compare.izhikevich_input},
        {"timing_repeats", c.compare.timing_repeats},
    };
    json fixedpoint = {{"total_bits", c.fixedpoint.total_bits},
                       {"frac_bits", c.fixedpoint.frac_bits},
                       {"lut_sizes", c.fixedpoint.lut_sizes},
                       {"interpolate", c.fixedpoint.interpolate}};

    return {
        {"version", c.version},
        {"experiment", kind_name(c.kind)},
        {"seed", c.seed},
        {"format", c.format == OutputFormat::Csv ? "csv" : "json"},
        {"out_dir", c.out_dir.string()},
        {"model", pendula::to_json(c.model)},
        {"input", pendula::to_json(c.input)},
        {"initial_state",
         c.initial_state ? json{{"theta", c.initial_state->theta}, {"dtheta", c.initial_state->dtheta}} : json(nullptr)},
        {"sim", pendula::to_json(c.sim)},
        {"network", net},
        {"plasticity", plasticity},
        {"compare", compare},
        {"fixedpoint", fixedpoint},
    };
}

json run_record(const ExperimentConfig& config) {
    return {{"format_version", kRunFormatVersion},
            {"tool", "pendula"},
            {"tool_version", kToolVersion},
            {"command", kind_name(config.kind)},
            {"seed", config.seed},
            {"config", to_json(config)}};
}

LayerConfig make_layer_config(const ExperimentConfig& config) {
    const NetworkSpec& net = config.network;
    LayerConfig layer;
    layer.n = net.n;
    layer.params = net.params;
    layer.inputs = net.inputs;
    layer.syn_tau = net.syn_tau;
    layer.syn_gain = net.syn_gain;
    layer.plasticity = net.plasticity;
    layer.snapshot_every = net.snapshot_every;
    layer.record_traces = net.record_traces;
    switch (net.weight_init) {
        case WeightInit::Zero: layer.initial_weights = WeightMatrix(net.n, net.w_min, net.w_max, 0.0); break;
        case WeightInit::Constant:
            layer.initial_weights = WeightMatrix(net.n, net.w_min, net.w_max, net.weight_value);
            break;
        case WeightInit::Random:
            layer.initial_weights = WeightMatrix::random(net.n, config.seed, net.w_min, net.w_max);
            break;
    }
    return layer;
}

std::vector<ModelStats> compare_models(const ExperimentConfig& config) {
    const CompareSettings& cmp = config.compare;
    SimConfig sim = config.sim;
    sim.record_trace = false;
    sim.integrator = Integrator::Euler;

    const std::pair<ModelParams, double> protocol[] = {
        {cmp.pendulum, cmp.pendulum_input},
        {cmp.lif, cmp.lif_input},
        {cmp.izhikevich, cmp.izhikevich_input},
    };

    std::vector<ModelStats> out;
    for (const auto& [params, drive] : protocol) {
        const InputSignal input = InputSignal::constant(drive);
        const SingleRun run = simulate_single(params, input, sim);

        double best_ns = std::numeric_limits<double>::infinity();
        for (int r = 0; r < cmp.timing_repeats; ++r) {
            const auto start = std::chrono::steady_clock::now();
            const SingleRun timed = simulate_single(params, input, sim);
            const auto stop = std::chrono::steady_clock::now();
            const double ns = std::chrono::duration<double, std::nano>(stop - start).count();
            best_ns = std::min(best_ns, ns / static_cast<double>(std::max<std::size_t>(timed.steps, 1)));
        }

        ModelStats stats;
        stats.model = model_name(params);
        stats.steps = run.steps;
        stats.spike_count = run.spikes.size();
        const auto isi = inter_spike_intervals(run.spikes.times_of(0));
        stats.mean_isi_ms = isi.empty() ? 0.0 : std::accumulate(isi.begin(), isi.end(), 0.0) / static_cast<double>(isi.size());
        // guard against clocks too coarse to resolve a short run
        stats.ns_per_step = std::max(best_ns, 1e-3);
        out.push_back(std::move(stats));
    }
    return out;
}

std::vector<FixedpointCell> fixedpoint_grid(const ExperimentConfig& config) {
    const auto& params = std::get<PendulumParams>(config.model);
    std::vector<std::size_t> luts = config.fixedpoint.lut_sizes;
    std::vector<int> fracs = config.fixedpoint.frac_bits;
    std::sort(luts.begin(), luts.end());
    std::sort(fracs.begin(), fracs.end());

    std::vector<FixedpointCell> cells;
    for (std::size_t lut : luts)
        for (int f : fracs) {
            const fixed::QFormat q{config.fixedpoint.total_bits, f};
            FixedpointCell cell;
            cell.label = "f" + std::to_string(f) + "_lut" + std::to_string(lut);
            cell.report = fixed::compare_fixed_vs_float(params, config.input, config.sim, q, lut,
                                                        config.fixedpoint.interpolate);
            cells.push_back(std::move(cell));
        }
    FixedpointCell control;
    control.label = "control";
    control.control = true;
    control.report = fixed::compare_float_vs_float(params, config.input, config.sim);
    cells.push_back(std::move(control));
    return cells;
}

RunOutputs cmd_single(const ExperimentConfig& config) {
    const SingleRun run = simulate_single(config.model, config.input, config.sim, config.initial_state);
    prepare_out_dir(config);
    RunOutputs outputs;
    if (config.sim.record_trace)
        write_file(config.out_dir, "trace.csv", render([&](std::ostream& os) { write_trace_csv(os, run.trace); }), outputs);
    write_spikes(config, run.spikes, outputs);
    write_run_record(config, outputs);
    return outputs;
}

RunOutputs cmd_network(const ExperimentConfig& config) {
    const NetworkRun run = run_network(make_layer_config(config), config.sim);
    prepare_out_dir(config);
    RunOutputs outputs;
    write_spikes(config, run.spikes, outputs);
    for (const auto& snap : run.snapshots) write_weights(config, "weights_" + std::to_string(snap.step), snap.weights, outputs);
    write_weights(config, "weights_final", run.final_weights, outputs);
    for (std::size_t k = 0; k < run.traces.size(); ++k)
        write_file(config.out_dir, "trace_" + std::to_string(k) + ".csv",
                   render([&](std::ostream& os) { write_trace_csv(os, run.traces[k]); }), outputs);
    write_run_record(config, outputs);
    return outputs;
}

RunOutputs cmd_compare_models(const ExperimentConfig& config) {
    const auto stats = compare_models(config);
    prepare_out_dir(config);
    RunOutputs outputs;
    // Wall-clock cost lives only in the JSON report so every CSV stays reproducible.
    write_file(config.out_dir, "compare.csv", render([&](std::ostream& os) {
                   os << "model,steps,spike_count,mean_isi_ms\n";
                   for (const auto& s : stats)
                       os << s.model << ',' << s.steps << ',' << s.spike_count << ',' << format_real(s.mean_isi_ms) << '\n';
               }),
               outputs);
    json rows = json::array();
    for (const auto& s : stats)
        rows.push_back({{"model", s.model},
                        {"steps", s.steps},
                        {"spike_count", s.spike_count},
                        {"mean_isi_ms", s.mean_isi_ms},
                        {"ns_per_step", s.ns_per_step}});
    write_file(config.out_dir, "compare.json", json{{"models", rows}}.dump(2) + "\n", outputs);
    write_run_record(config, outputs);
    return outputs;
}

RunOutputs cmd_fixedpoint_report(const ExperimentConfig& config) {
    const auto cells = fixedpoint_grid(config);
    prepare_out_dir(config);
    RunOutputs outputs;
    for (const auto& cell : cells) {
        write_file(config.out_dir, (cell.control ? std::string("control") : "fixed_" + cell.label) + ".json",
                   error_report_to_json(cell.report).dump(2) + "\n", outputs);
        if (!cell.control) {
            const fixed::SineLut lut(cell.report.lut_size, cell.report.q_format, cell.report.interpolated);
            write_file(config.out_dir, "lut_" + cell.label + ".csv",
                       render([&](std::ostream& os) { write_lut_csv(os, lut); }), outputs);
        }
    }
    write_file(config.out_dir, "summary.csv", render([&](std::ostream& os) {
                   os << "label,total_bits,frac_bits,lut_size,max_theta_err,max_abs_spike_dev_ms,count_diff,saturations\n";
                   for (const auto& cell : cells) {
                       const auto& r = cell.report;
                       os << cell.label << ',' << (cell.control ? 0 : r.q_format.total_bits) << ','
                          << (cell.control ? 0 : r.q_format.frac_bits) << ',' << r.lut_size << ','
                          << format_real(r.max_theta_err) << ',' << format_real(r.max_abs_spike_dev()) << ','
                          << r.count_diff << ',' << r.saturations << '\n';
                   }
               }),
               outputs);
    write_run_record(config, outputs);
    return outputs;
}

RunOutputs run(const ExperimentConfig& config) {
    config.validate();
    switch (config.kind) {
        case Kind::Single: return cmd_single(config);
        case Kind::Layer:
        case Kind::Stdp:
        case Kind::Hebbian: return cmd_network(config);
        case Kind::CompareModels: return cmd_compare_models(config);
        case Kind::FixedpointReport: return cmd_fixedpoint_report(config);
    }
    throw ConfigError("unknown experiment kind");
}

}  // namespace pendula::experiment
