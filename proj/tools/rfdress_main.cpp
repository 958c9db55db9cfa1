#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "rfdress/scenario.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    int jobs = 0;
    double tol = 0.0;
    bool tol_set = false;
};

rfdress::scenario::RunOptions make_options(const CommonOpts& c) {
    rfdress::scenario::RunOptions opt;
    opt.jobs = c.jobs;
    if (c.tol_set) opt.tol = c.tol;
    if (!c.out.empty()) opt.out_path = c.out;
    return opt;
}

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config, "scenario configuration file")->required();
    cmd->add_option("--out", c.out, "output CSV path (overrides the config's `out` key)");
    cmd->add_option("--jobs", c.jobs, "worker threads for grid sweeps")
        ->envname("RFDRESS_JOBS");
    cmd->add_option("--tol", c.tol, "numerical tolerance override")
        ->each([&c](const std::string&) { c.tol_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rf-dressed spin simulator: scenario runner emitting CSV curves"};
    app.require_subcommand(1);

    std::map<std::string, CommonOpts> opts;
    for (const std::string& name : rfdress::scenario::scenario_names()) {
        CLI::App* cmd = app.add_subcommand(name, "compute the '" + name + "' scenario");
        add_common(cmd, opts[name]);
    }
    CommonOpts validate_opts;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "dry-run a config: resolved values and warnings");
    add_common(validate_cmd, validate_opts);
    std::string validate_scenario_name;
    validate_cmd->add_option("--scenario", validate_scenario_name,
                             "scenario the config belongs to")
        ->required();

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (name == "validate") {
            auto cfg = rfdress::scenario::Config::load(validate_opts.config);
            cfg.text_or("out", "");  // consumed by the runner, not the scenario
            const auto report =
                rfdress::scenario::validate_scenario(validate_scenario_name, cfg);
            for (const auto& [what, value] : report.values)
                std::printf("%-24s %s\n", what.c_str(), value.c_str());
            for (const auto& warning : report.warnings)
                std::printf("warning: %s\n", warning.c_str());
            std::printf("ok\n");
            return 0;
        }
        const auto out = rfdress::scenario::run_scenario(name, opts[name].config,
                                                         make_options(opts[name]));
        std::fprintf(stderr, "wrote %s\n", out.c_str());
        return 0;
    } catch (const rfdress::scenario::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
}
