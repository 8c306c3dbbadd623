#include <string>

#include "CLI11.hpp"
#include "sib/commands.hpp"

#ifdef EIGEN_HAS_OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
    CLI::App app{"Supervised integrative biclustering of multi-view data"};
    app.require_subcommand(1);

    sib::CommonOptions options;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "Output directory");
        cmd->add_option("--seed", seed, "Random seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--threads", options.threads, "Worker threads")
            ->check(CLI::PositiveNumber);
        cmd->add_flag("--quiet", options.quiet, "Suppress progress output");
    };

    std::string config_path;
    std::string model_dir;
    std::string estimated_dir;
    std::string truth_dir;
    std::string setting;
    int reps = 10;

    CLI::App* fit = app.add_subcommand("fit", "Fit the model to data files");
    fit->add_option("--config", config_path, "Config file")->required();
    add_common(fit);

    CLI::App* predict =
        app.add_subcommand("predict", "Score new samples with a saved model");
    predict->add_option("--model", model_dir, "Fitted model directory")
        ->required();
    predict->add_option("--config", config_path, "Config file with test views")
        ->required();
    add_common(predict);

    CLI::App* simulate =
        app.add_subcommand("simulate", "Generate synthetic train/test data");
    simulate->add_option("--config", config_path, "Config file")->required();
    add_common(simulate);

    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Compare estimated biclusters against known truth");
    evaluate->add_option("--estimated", estimated_dir, "Fit output directory")
        ->required();
    evaluate->add_option("--truth", truth_dir, "Truth directory")->required();
    add_common(evaluate);

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "Run a named simulation benchmark end to end");
    reproduce->add_option("--setting", setting, "e.g. g150x100, b150x100")
        ->required();
    reproduce->add_option("--reps", reps, "Replications")
        ->check(CLI::PositiveNumber);
    add_common(reproduce);

    CLI11_PARSE(app, argc, argv);

    if (!out_dir.empty()) options.out_dir = out_dir;
    if (seed_set) options.seed = seed;

    return sib::run_command(
        [&]() {
            if (fit->parsed()) {
                sib::run_fit(config_path, options);
            } else if (predict->parsed()) {
                sib::run_predict(model_dir, config_path, options);
            } else if (simulate->parsed()) {
                sib::run_simulate(config_path, options);
            } else if (evaluate->parsed()) {
                sib::run_evaluate(estimated_dir, truth_dir, options);
            } else if (reproduce->parsed()) {
                sib::run_reproduce(setting, reps, options);
            }
        },
        options.quiet);
}
