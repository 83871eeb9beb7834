#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "gridrisk/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gridrisk: dispatch-simulation risk assessment with ML surrogates"};
    app.require_subcommand(1);
    app.fallthrough();  // `gridrisk <command> --config ...` style

    std::string config_path;
    std::string out_override;
    std::string case_name = "high";
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    unsigned parallelism_override = 0;

    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_override, "output directory (overrides config)");
    auto* seed_opt = app.add_option("--seed", seed_override, "RNG seed (overrides config)");
    app.add_option("--parallelism", parallelism_override,
                   "worker threads (overrides config)");

    auto* gen = app.add_subcommand("gen-fixtures", "write the desk-scale system fixtures");
    auto* da = app.add_subcommand("da-assess", "day-ahead oracle risk assessment");
    auto* train = app.add_subcommand("train", "train and validate the surrogate banks");
    auto* rt = app.add_subcommand("rt-assess", "real-time oracle-vs-surrogate assessment");
    rt->add_option("--case", case_name, "risk regime: high|medium|low");
    auto* report = app.add_subcommand("report", "bundle plot-data CSVs");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        gridrisk::RunConfig config =
            config_path.empty() ? gridrisk::RunConfig{} : gridrisk::load_config(config_path);
        if (!out_override.empty()) config.out_dir = out_override;
        if (seed_set) config.seed = seed_override;
        if (parallelism_override > 0) config.parallelism = parallelism_override;

        if (gen->parsed()) gridrisk::cmd_gen_fixtures(config);
        if (da->parsed()) gridrisk::cmd_da_assess(config);
        if (train->parsed()) gridrisk::cmd_train(config);
        if (rt->parsed())
            gridrisk::cmd_rt_assess(config, gridrisk::risk_case_from_name(case_name));
        if (report->parsed()) gridrisk::cmd_report(config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
