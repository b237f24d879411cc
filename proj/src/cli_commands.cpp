#include "cornertrack/cli_commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cornertrack/config.hpp"
#include "cornertrack/errors.hpp"
#include "cornertrack/evaluation.hpp"
#include "cornertrack/extractor.hpp"
#include "cornertrack/image_io.hpp"
#include "cornertrack/selftest.hpp"
#include "cornertrack/serialize.hpp"
#include "cornertrack/synth.hpp"
#include "cornertrack/tracker.hpp"
#include "cornertrack/train.hpp"

namespace fs = std::filesystem;

namespace cornertrack {

namespace {

constexpr std::array<double, 3> kOverlayColor{0.15, 0.95, 0.25};

int report_error(const std::exception& e, int code) {
    std::cerr << "error: " << e.what() << "\n";
    return code;
}

Config config_for(const std::string& config_path, const std::string& extractor_override,
                  std::optional<std::uint64_t> seed_override) {
    Config config = config_path.empty() ? Config{} : load_config(config_path);
    if (!extractor_override.empty()) config.extractor = extractor_override;
    if (seed_override) config.seed = *seed_override;
    validate(config);
    return config;
}

std::string frame_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04zu.ppm", index + 1);
    return buf;
}

}  // namespace

int cmd_track(const TrackArgs& args) {
    SequenceOnDisk seq;
    Config config;
    try {
        seq = open_sequence(args.sequence_dir);
        config = config_for(args.config_path, args.extractor_override, args.seed_override);
    } catch (const InputError& e) {
        return report_error(e, 2);
    } catch (const std::exception& e) {
        return report_error(e, 1);
    }

    try {
        Tracker tracker = make_tracker(config);
        fs::create_directories(fs::path(args.out_dir) / "overlays");

        std::vector<BBox> boxes;
        boxes.reserve(seq.frame_paths.size());
        const auto started = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < seq.frame_paths.size(); ++i) {
            Tensor frame = load_ppm(seq.frame_paths[i]);
            if (i == 0) {
                tracker.init(frame, seq.groundtruth[0]);
                boxes.push_back(tracker.current_box());
            } else {
                boxes.push_back(tracker.track(frame));
            }
            draw_box(frame, boxes.back(), kOverlayColor);
            save_ppm((fs::path(args.out_dir) / "overlays" / frame_name(i)).string(), frame);
        }
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - started;

        save_boxes((fs::path(args.out_dir) / "boxes.txt").string(), boxes);
        std::ofstream timing((fs::path(args.out_dir) / "timing.txt").string());
        const double fps =
            elapsed.count() > 0.0 ? seq.frame_paths.size() / elapsed.count() : 0.0;
        char line[96];
        std::snprintf(line, sizeof(line), "frames %zu\nseconds %.3f\nfps %.2f\n",
                      seq.frame_paths.size(), elapsed.count(), fps);
        timing << line;
        return 0;
    } catch (const std::exception& e) {
        return report_error(e, 1);
    }
}

int cmd_eval(const EvalArgs& args) {
    std::vector<std::pair<std::string, SequenceOnDisk>> sequences;
    try {
        if (!fs::is_directory(args.dataset_dir)) {
            throw InputError("cmd_eval: " + args.dataset_dir + " is not a directory");
        }
        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(args.dataset_dir)) {
            if (entry.is_directory()) names.push_back(entry.path().filename().string());
        }
        std::sort(names.begin(), names.end());
        for (const std::string& name : names) {
            try {
                sequences.emplace_back(
                    name, open_sequence((fs::path(args.dataset_dir) / name).string()));
            } catch (const InputError& e) {
                std::cerr << "skip " << name << ": " << e.what() << "\n";
            }
        }
        if (sequences.empty()) {
            throw InputError("cmd_eval: no usable sequences in " + args.dataset_dir);
        }
    } catch (const InputError& e) {
        return report_error(e, 2);
    } catch (const std::exception& e) {
        return report_error(e, 1);
    }

    try {
        fs::create_directories(args.out_dir);
        std::vector<MetricReport> reports;
        for (const auto& [name, seq] : sequences) {
            fs::path result_file = fs::path(args.results_dir) / (name + ".txt");
            if (!fs::exists(result_file)) {
                result_file = fs::path(args.results_dir) / name / "boxes.txt";
            }
            if (!fs::exists(result_file)) {
                std::cerr << "skip " << name << ": no result file\n";
                continue;
            }
            const std::vector<BBox> boxes = load_groundtruth(result_file.string());
            if (boxes.size() != seq.groundtruth.size()) {
                std::cerr << "skip " << name << ": " << boxes.size() << " result boxes vs "
                          << seq.groundtruth.size() << " ground-truth lines\n";
                continue;
            }
            const MetricReport report = evaluate_sequence(seq.groundtruth, boxes);
            reports.push_back(report);
            const std::string prefix = (fs::path(args.out_dir) / name).string();
            write_report(prefix + "_report.txt", report);
            write_plot_data(prefix, report);
        }
        if (reports.empty()) {
            std::cerr << "error: no sequence produced a report\n";
            return 2;
        }
        const MetricReport aggregate = aggregate_reports(reports);
        const std::string prefix = (fs::path(args.out_dir) / "aggregate").string();
        write_report(prefix + "_report.txt", aggregate);
        write_plot_data(prefix, aggregate);
        std::cout << "sequences " << reports.size() << " success_auc " << aggregate.success_auc
                  << " precision_at_20 " << aggregate.precision_at_20 << "\n";
        return 0;
    } catch (const std::exception& e) {
        return report_error(e, 1);
    }
}

int cmd_synth(const SynthArgs& args) {
    SequenceSpec spec;
    try {
        if (!args.spec_path.empty()) spec = load_sequence_spec(args.spec_path);
        if (args.seed_override) spec.seed = *args.seed_override;
    } catch (const InputError& e) {
        return report_error(e, 2);
    }
    try {
        const Sequence seq = generate(spec);
        fs::create_directories(args.out_dir);
        for (std::size_t i = 0; i < seq.frames.size(); ++i) {
            save_ppm((fs::path(args.out_dir) / frame_name(i)).string(), seq.frames[i]);
        }
        save_boxes((fs::path(args.out_dir) / "groundtruth_rect.txt").string(), seq.boxes);
        std::cout << "wrote " << seq.frames.size() << " frames to " << args.out_dir << "\n";
        return 0;
    } catch (const InputError& e) {
        return report_error(e, 2);
    } catch (const std::exception& e) {
        return report_error(e, 1);
    }
}

namespace {

struct TrainCliConfig {
    int pairs = 8;
    int steps = 500;
    double step_size = 0.005;
    double momentum = 0.9;
    int template_size = 32;
    int search_size = 72;
    int adjust_width = 32;
    int stride = 8;
    std::uint64_t seed = 7;
    LossWeights weights;
};

TrainCliConfig load_train_config(const std::string& path) {
    TrainCliConfig c;
    if (path.empty()) return c;
    std::ifstream in(path);
    if (!in) {
        throw InputError("train config: cannot open " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("train config: " + std::string(e.what()));
    }
    const auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("pairs", c.pairs);
    get("steps", c.steps);
    get("step_size", c.step_size);
    get("momentum", c.momentum);
    get("template_size", c.template_size);
    get("search_size", c.search_size);
    get("adjust_width", c.adjust_width);
    get("stride", c.stride);
    get("seed", c.seed);
    get("alpha", c.weights.alpha);
    get("beta", c.weights.beta);
    get("lambda", c.weights.lambda);
    get("d_iou", c.weights.d);
    static const std::vector<std::string> known = {
        "pairs",  "steps", "step_size", "momentum", "template_size", "search_size",
        "adjust_width", "stride", "seed", "alpha", "beta", "lambda", "d_iou"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw InputError("train config: unknown key '" + key + "'");
        }
    }
    if (c.pairs < 1 || c.steps < 0 || c.step_size <= 0.0 || c.momentum < 0.0 ||
        c.momentum >= 1.0) {
        throw InputError("train config: invalid optimization settings");
    }
    return c;
}

}  // namespace

int cmd_train(const TrainArgs& args) {
    TrainCliConfig config;
    try {
        config = load_train_config(args.config_path);
        if (args.seed_override) config.seed = *args.seed_override;
    } catch (const InputError& e) {
        return report_error(e, 2);
    }
    try {
        const auto pairs = make_synthetic_pairs(config.pairs, config.template_size,
                                                config.search_size, config.seed);
        const ToyConvExtractor extractor(config.seed);
        ModelParams model =
            make_random_model(extractor.feature_channels(), config.adjust_width, config.seed);
        TrainOptions options;
        options.steps = config.steps;
        options.step_size = config.step_size;
        options.momentum = config.momentum;
        options.weights = config.weights;
        options.stride = config.stride;
        const TrainResult result = overfit_train(pairs, extractor, std::move(model), options);

        fs::create_directories(fs::path(args.out_params).parent_path());
        save_model(args.out_params, result.model);
        std::ofstream trace(args.out_params + ".loss.txt");
        char line[48];
        for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
            std::snprintf(line, sizeof(line), "%zu %.8f\n", i, result.loss_trace[i]);
            trace << line;
        }
        std::cout << "steps " << config.steps << " initial_loss " << result.loss_trace.front()
                  << " final_loss " << result.loss_trace.back() << "\n";
        return 0;
    } catch (const std::exception& e) {
        return report_error(e, 1);
    }
}

int cmd_selftest() {
    const auto results = run_selftest();
    bool all_passed = true;
    std::printf("%-22s %-6s %s\n", "check", "status", "detail");
    for (const SelfTestResult& r : results) {
        all_passed = all_passed && r.passed;
        std::printf("%-22s %-6s %s\n", r.name.c_str(), r.passed ? "pass" : "FAIL",
                    r.detail.c_str());
    }
    return all_passed ? 0 : 1;
}

}  // namespace cornertrack
