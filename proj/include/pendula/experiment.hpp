#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pendula/fixed_compare.hpp"
#include "pendula/network.hpp"
#include "pendula/neuron_models.hpp"
#include "pendula/simulation.hpp"

namespace pendula::experiment {

inline constexpr int kConfigVersion = 1;
inline constexpr int kRunFormatVersion = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Kind { Single, Layer, Stdp, Hebbian, CompareModels, FixedpointReport };
enum class OutputFormat { Csv, Json };

std::string_view kind_name(Kind k);
std::optional<Kind> kind_from_name(std::string_view name);

enum class WeightInit { Zero, Constant, Random };

struct NetworkSpec {
    std::size_t n = 2;
    std::vector<PendulumParams> params{PendulumParams{}};
    std::vector<InputSignal> inputs{InputSignal{}};
    double syn_tau = 5.0;
    double syn_gain = 1.0;
    WeightInit weight_init = WeightInit::Zero;
    double weight_value = 0.0;
    double w_min = 0.0;
    double w_max = 1.0;
    double delay_ms = 0.0;
    std::size_t snapshot_every = 0;
    bool record_traces = false;
    PlasticityConfig plasticity;
};

struct CompareSettings {
    PendulumParams pendulum;
    LifParams lif;
    IzhikevichParams izhikevich;
    double pendulum_input = 1.5;
    double lif_input = 1.5;
    double izhikevich_input = 10.0;
    /// Timed repetitions per model; the fastest is reported.
    int timing_repeats = 5;
};

struct FixedpointSpec {
    int total_bits = 32;
    std::vector<int> frac_bits{8, 16, 24};
    std::vector<std::size_t> lut_sizes{256, 1024};
    bool interpolate = false;
};

/// Everything needed to reproduce one run. `model`, `input` and `initial_state`
/// drive single and fixedpoint-report (pendulum only for the latter); `network`
/// drives layer/stdp/hebbian; `compare` drives compare-models.
struct ExperimentConfig {
    int version = kConfigVersion;
    Kind kind = Kind::Single;
    ModelParams model = PendulumParams{};
    InputSignal input;
    std::optional<NeuronState> initial_state;
    SimConfig sim;
    NetworkSpec network;
    CompareSettings compare;
    FixedpointSpec fixedpoint;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Csv;
    std::filesystem::path out_dir = "pendula-out";

    /// Throws ConfigError on the first violated constraint.
    void validate() const;
};

/// Built-in configuration for each experiment:
///  - single: the reference sinusoidal drive trace
///  - layer: 5 neurons, all-to-all 0.1, constant drive 1.5
///  - stdp: 2 neurons at I = 2.0, neuron 1's drive delayed by 5 ms
///  - hebbian: 2 neurons with identical constant drive
///  - compare-models: pendulum / LIF / Izhikevich at constant drive
///  - fixedpoint-report: the reference listing over a Q-format x LUT-size grid
ExperimentConfig default_config(Kind kind);

/// Applies a JSON document on top of default_config(kind). Accepts either a config
/// object or a run.json record (whose "config" member is used). Unknown keys and an
/// experiment kind different from `kind` are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc, Kind kind);

nlohmann::json to_json(const ExperimentConfig& config);

/// The run.json record: format version, tool version, seed and full config echo.
nlohmann::json run_record(const ExperimentConfig& config);

LayerConfig make_layer_config(const ExperimentConfig& config);

struct ModelStats {
    std::string model;
    std::size_t steps = 0;
    std::size_t spike_count = 0;
    double mean_isi_ms = 0.0;
    double ns_per_step = 0.0;
};

std::vector<ModelStats> compare_models(const ExperimentConfig& config);

struct FixedpointCell {
    std::string label;
    fixed::ErrorReport report;
    bool control = false;
};

/// One cell per (frac_bits, lut_size), sorted by lut size then frac_bits, followed
/// by the float-vs-float control.
std::vector<FixedpointCell> fixedpoint_grid(const ExperimentConfig& config);

/// Files written by one experiment, relative to out_dir.
struct RunOutputs {
    std::vector<std::filesystem::path> files;
};

RunOutputs cmd_single(const ExperimentConfig& config);
RunOutputs cmd_network(const ExperimentConfig& config);
RunOutputs cmd_compare_models(const ExperimentConfig& config);
RunOutputs cmd_fixedpoint_report(const ExperimentConfig& config);

/// Validates, then dispatches on config.kind.
RunOutputs run(const ExperimentConfig& config);

/// Command-line entry point. Returns 0 on success, 2 on configuration errors,
/// 3 on numerical blowup, 1 on any other failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace pendula::experiment
