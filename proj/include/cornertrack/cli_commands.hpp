#pragma once

#include <optional>
#include <string>

namespace cornertrack {

// Exit codes: 0 success, 2 bad/missing input, 1 anything else. Heavy lifting
// for the CLI binary; tests drive these directly so tool behaviour and the
// library stay one code path.

struct TrackArgs {
    std::string sequence_dir;
    std::string config_path;  // empty: defaults
    std::string out_dir;
    std::string extractor_override;  // empty: from config
    std::optional<std::uint64_t> seed_override;
};
int cmd_track(const TrackArgs& args);

struct EvalArgs {
    std::string dataset_dir;  // sequence subdirectories
    std::string results_dir;  // <name>.txt or <name>/boxes.txt box files
    std::string out_dir;
};
int cmd_eval(const EvalArgs& args);

struct SynthArgs {
    std::string spec_path;  // empty: default spec
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
};
int cmd_synth(const SynthArgs& args);

struct TrainArgs {
    std::string config_path;  // empty: defaults
    std::string out_params;
    std::optional<std::uint64_t> seed_override;
};
int cmd_train(const TrainArgs& args);

int cmd_selftest();

}  // namespace cornertrack
