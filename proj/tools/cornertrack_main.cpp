#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cornertrack/cli_commands.hpp"
#include "cornertrack/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"corner-pair Siamese tracker"};
    app.require_subcommand(0, 1);

    bool dump_config = false;
    app.add_flag("--dump-config", dump_config, "print the default config as JSON and exit");

    cornertrack::TrackArgs track_args;
    std::uint64_t seed = 0;
    CLI::App* track = app.add_subcommand("track", "track one sequence directory");
    track->add_option("sequence", track_args.sequence_dir, "sequence directory")->required();
    track->add_option("--config", track_args.config_path, "JSON config file");
    track->add_option("--out", track_args.out_dir, "output directory")->required();
    track->add_option("--extractor", track_args.extractor_override, "toy | oracle");
    CLI::Option* track_seed = track->add_option("--seed", seed, "override the config seed");

    cornertrack::EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "score stored results against a dataset");
    eval->add_option("dataset", eval_args.dataset_dir, "dataset directory")->required();
    eval->add_option("results", eval_args.results_dir, "results directory")->required();
    eval->add_option("--out", eval_args.out_dir, "report directory")->required();

    cornertrack::SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic sequence");
    synth->add_option("--config", synth_args.spec_path, "JSON sequence spec");
    synth->add_option("--out", synth_args.out_dir, "output directory")->required();
    CLI::Option* synth_seed = synth->add_option("--seed", seed, "override the spec seed");

    cornertrack::TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "overfit the heads on synthetic pairs");
    train->add_option("--config", train_args.config_path, "JSON training config");
    train->add_option("--out", train_args.out_params, "parameter file to write")->required();
    CLI::Option* train_seed = train->add_option("--seed", seed, "override the config seed");

    CLI::App* selftest = app.add_subcommand("selftest", "run the numeric health checks");

    CLI11_PARSE(app, argc, argv);

    if (dump_config) {
        std::cout << cornertrack::dump_config(cornertrack::Config{});
        return 0;
    }
    if (track->parsed()) {
        if (!track_seed->empty()) track_args.seed_override = seed;
        return cornertrack::cmd_track(track_args);
    }
    if (eval->parsed()) {
        return cornertrack::cmd_eval(eval_args);
    }
    if (synth->parsed()) {
        if (!synth_seed->empty()) synth_args.seed_override = seed;
        return cornertrack::cmd_synth(synth_args);
    }
    if (train->parsed()) {
        if (!train_seed->empty()) train_args.seed_override = seed;
        return cornertrack::cmd_train(train_args);
    }
    if (selftest->parsed()) {
        return cornertrack::cmd_selftest();
    }
    std::cout << app.help();
    return 0;
}
