#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "decohere/config.hpp"
#include "decohere/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

void print_config_error(const decohere::ConfigError& e) {
    std::fprintf(stderr, "config error:\n");
    for (const auto& msg : e.errors()) std::fprintf(stderr, "  %s\n", msg.c_str());
}

int cmd_run(const std::string& config_path) {
    decohere::ExperimentConfig cfg;
    try {
        cfg = decohere::load_config(config_path);
    } catch (const decohere::ConfigError& e) {
        print_config_error(e);
        return kExitConfigError;
    }
    if (const char* dir = std::getenv("DECOHERE_OUTPUT_DIR"); dir && *dir) cfg.output_dir = dir;

    decohere::RunReport report;
    try {
        report = decohere::run_scenario(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return kExitRuntimeError;
    }

    std::printf("scenario %s (config %s)\n", report.scenario.c_str(), report.config_hash.c_str());
    for (const auto& check : report.checks)
        std::printf("  [%s] %-32s measured %.6e  threshold %.6e\n", check.pass ? "PASS" : "FAIL",
                    check.name.c_str(), check.measured, check.threshold);
    std::printf("%zu checks, %s, %.2f s\n", report.checks.size(),
                report.all_pass() ? "all passed" : "FAILURES present", report.wall_time);
    return report.all_pass() ? kExitOk : kExitCheckFailure;
}

int cmd_validate(const std::string& config_path) {
    try {
        const auto cfg = decohere::load_config(config_path);
        std::printf("ok: scenario %s, config hash %s\n", decohere::scenario_name(cfg.scenario),
                    cfg.config_hash.c_str());
        return kExitOk;
    } catch (const decohere::ConfigError& e) {
        print_config_error(e);
        return kExitConfigError;
    }
}

int cmd_scenarios() {
    for (const auto s : decohere::all_scenarios())
        std::printf("%-22s %s\n", decohere::scenario_name(s), decohere::scenario_description(s));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decohere: environment-induced decoherence experiment harness"};
    app.require_subcommand(1);

    std::string run_config, validate_config;
    auto* run = app.add_subcommand("run", "execute a scenario from a config file");
    run->add_option("config", run_config, "path to the JSON config")->required();
    auto* validate = app.add_subcommand("validate", "check a config file without running");
    validate->add_option("config", validate_config, "path to the JSON config")->required();
    auto* scenarios = app.add_subcommand("scenarios", "list available scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (run->parsed()) return cmd_run(run_config);
        if (validate->parsed()) return cmd_validate(validate_config);
        if (scenarios->parsed()) return cmd_scenarios();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return kExitRuntimeError;
    }
    return kExitConfigError;
}
