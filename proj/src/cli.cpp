#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pendula/errors.hpp"
#include "pendula/experiment.hpp"

namespace pendula::experiment {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Pendulum spiking-neuron simulator and experiment runner", "pendula"};

    std::string command;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<double> dt;
    std::optional<double> duration;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> integrator;
    std::optional<std::string> format;

    app.add_option("command", command, "single | layer | stdp | hebbian | compare-models | fixedpoint-report")
        ->required()
        ->check(CLI::IsMember({"single", "layer", "stdp", "hebbian", "compare-models", "fixedpoint-report"}));
    app.add_option("--config", config_path, "JSON config file (or a previous run.json)");
    app.add_option("--out-dir", out_dir, "Output directory (default: $PENDULA_OUT, then the config's out_dir)");
    app.add_option("--dt", dt, "Time step in ms");
    app.add_option("--duration", duration, "Simulated duration in ms");
    app.add_option("--seed", seed, "Seed for random weight initialization");
    app.add_option("--integrator", integrator, "euler | rk4")->check(CLI::IsMember({"euler", "rk4"}));
    app.add_option("--format", format, "Spike/weight output format: csv | json")->check(CLI::IsMember({"csv", "json"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const Kind kind = *kind_from_name(command);
        ExperimentConfig config =
            config_path.empty() ? default_config(kind) : parse_config(read_json_file(config_path), kind);

        if (dt) config.sim.dt_ms = *dt;
        if (duration) config.sim.duration_ms = *duration;
        if (seed) config.seed = *seed;
        if (integrator) config.sim.integrator = *integrator == "rk4" ? Integrator::Rk4 : Integrator::Euler;
        if (format) config.format = *format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        if (out_dir) {
            config.out_dir = *out_dir;
        } else if (const char* env = std::getenv("PENDULA_OUT"); env && *env) {
            config.out_dir = env;
        }

        const RunOutputs outputs = run(config);
        for (const auto& f : outputs.files) std::cout << (config.out_dir / f).string() << '\n';
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "pendula: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IntegrationBlowup& e) {
        std::cerr << "pendula: " << e.what() << '\n';
        return kExitBlowup;
    } catch (const std::exception& e) {
        std::cerr << "pendula: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace pendula::experiment
