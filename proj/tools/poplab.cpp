// poplab: runs opacity scenarios, the closed-form theory sweep and the
// invariant suites.
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "poplab/config.hpp"
#include "poplab/error.hpp"
#include "poplab/scenario.hpp"
#include "poplab/validation.hpp"

namespace {

struct OutputFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool timing = false;
};

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Override the master seed");
    cmd->add_option("--threads", flags.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out", flags.out, "Output path (stdout when omitted)");
    cmd->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--timing", flags.timing, "Append a wall_seconds column");
}

poplab::ScenarioConfig load_with_overrides(const std::string& path, const OutputFlags& flags) {
    poplab::ScenarioConfig cfg = poplab::load_config(path);
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;
    if (flags.out) cfg.output.path = *flags.out;
    if (flags.format) cfg.output.format = *flags.format == "json" ? poplab::OutputFormat::json : poplab::OutputFormat::csv;
    if (flags.timing) cfg.output.include_timing = true;
    poplab::validate(cfg);
    return cfg;
}

int run_validate(const std::string& suite, std::size_t threads) {
    const auto names = suite == "all" ? poplab::validation::suite_names() : std::vector<std::string>{suite};
    bool ok = true;
    for (const auto& name : names) {
        const auto r = poplab::validation::run_suite(name, threads);
        std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.cases << " cases, " << r.checks
                  << " checks, " << r.violations << " violations, " << r.seconds << " s\n";
        for (const auto& note : r.notes) std::cout << "  " << note << '\n';
        ok = ok && r.passed();
    }
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Price-of-opacity simulations for strategic classification"};
    app.require_subcommand(1);

    std::string config_path;
    OutputFlags run_flags;
    bool inequity = false;
    auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
    run->add_option("--config", config_path, "Scenario config (JSON)")->required();
    run->add_flag("--inequity", inequity, "Emit only the wrongful-denial columns");
    add_output_flags(run, run_flags);

    std::string theory_path;
    OutputFlags theory_flags;
    auto* theory = app.add_subcommand("theory", "Evaluate the 1D Gaussian theory over a parameter grid");
    theory->add_option("--config", theory_path, "Config with a theory grid (JSON)")->required();
    add_output_flags(theory, theory_flags);

    std::string suite;
    std::size_t suite_threads = 0;
    auto* validate = app.add_subcommand("validate", "Run invariant suites");
    validate->add_option("--suite", suite, "partition, sign, identity, condition or all")->required();
    validate->add_option("--threads", suite_threads, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            const auto cfg = load_with_overrides(config_path, run_flags);
            poplab::ScenarioResult result;
            if (inequity) result.table = poplab::run_inequity(cfg);
            else result = poplab::run_scenario(cfg);
            poplab::emit_results(result, cfg.output, std::cout);
        } else if (*theory) {
            const auto cfg = load_with_overrides(theory_path, theory_flags);
            poplab::emit_results({poplab::run_theory_sweep(cfg), {}}, cfg.output, std::cout);
        } else if (*validate) {
            return run_validate(suite, suite_threads);
        }
    } catch (const poplab::Error& e) {
        std::cerr << "poplab: " << poplab::to_string(e.kind()) << ": " << e.what() << '\n';
        return poplab::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "poplab: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
