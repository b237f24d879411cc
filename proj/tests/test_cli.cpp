#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cornertrack/cli_commands.hpp"
#include "cornertrack/config.hpp"
#include "cornertrack/errors.hpp"
#include "cornertrack/image_io.hpp"
#include "cornertrack/serialize.hpp"
#include "cornertrack/synth.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;
using namespace cornertrack;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string make_sequence_dir(testutil::TempDir& dir, const std::string& name, int length,
                              double velocity_x = 0.0) {
    const std::string seq_dir = (dir.path() / name).string();
    SynthArgs args;
    args.out_dir = seq_dir;
    const std::string spec_path = (dir.path() / (name + "_spec.json")).string();
    write_text(spec_path, std::string("{\"frame_w\":192,\"frame_h\":192,\"length\":") +
                              std::to_string(length) +
                              ",\"box\":[60,62,64,60],\"velocity_x\":" +
                              std::to_string(velocity_x) + ",\"noise_amp\":0.02,\"seed\":3}");
    args.spec_path = spec_path;
    REQUIRE(cmd_synth(args) == 0);
    return seq_dir;
}

}  // namespace

TEST_CASE("config defaults carry the documented constants") {
    const Config c;
    CHECK(c.t_wh == 0.5);
    CHECK(c.d_iou == 0.5);
    CHECK(c.alpha == 2.0);
    CHECK(c.beta == 4.0);
    CHECK(c.lambda == 1.0);
    CHECK(c.n_corners == 15);
    CHECK(c.template_size == 127);
    CHECK(c.search_size == 255);
}

TEST_CASE("config dump and parse round trip; unknown keys rejected") {
    Config c;
    c.gamma = 0.45;
    c.extractor = "oracle";
    const Config back = parse_config(dump_config(c));
    CHECK(back.gamma == 0.45);
    CHECK(back.extractor == "oracle");

    CHECK_THROWS_AS(parse_config("{\"gammma\": 0.3}"), InputError);
    CHECK_THROWS_AS(parse_config("{\"gamma\": 1.5}"), InputError);
    CHECK_THROWS_AS(parse_config("{\"nms_window\": 4}"), InputError);
    CHECK_THROWS_AS(parse_config("not json"), InputError);
}

TEST_CASE("synth output is loadable and trackable end to end") {
    testutil::TempDir dir("round");
    const std::string seq_dir = make_sequence_dir(dir, "seq", 6);
    const SequenceOnDisk disk = open_sequence(seq_dir);
    CHECK(disk.frame_paths.size() == 6);

    TrackArgs track;
    track.sequence_dir = seq_dir;
    track.out_dir = (dir.path() / "out").string();
    track.extractor_override = "oracle";
    REQUIRE(cmd_track(track) == 0);
    const auto boxes = load_groundtruth((fs::path(track.out_dir) / "boxes.txt").string());
    CHECK(boxes.size() == 6);
    CHECK(fs::exists(fs::path(track.out_dir) / "overlays" / "0006.ppm"));
    CHECK(fs::exists(fs::path(track.out_dir) / "timing.txt"));
}

TEST_CASE("track reruns are byte-identical for boxes and overlays") {
    testutil::TempDir dir("determinism");
    const std::string seq_dir = make_sequence_dir(dir, "seq", 5, 2.0);
    TrackArgs track;
    track.sequence_dir = seq_dir;
    track.extractor_override = "oracle";
    track.out_dir = (dir.path() / "a").string();
    REQUIRE(cmd_track(track) == 0);
    track.out_dir = (dir.path() / "b").string();
    REQUIRE(cmd_track(track) == 0);

    CHECK(testutil::read_file((dir.path() / "a" / "boxes.txt").string()) ==
          testutil::read_file((dir.path() / "b" / "boxes.txt").string()));
    for (int i = 1; i <= 5; ++i) {
        char name[16];
        std::snprintf(name, sizeof(name), "%04d.ppm", i);
        CHECK(testutil::read_file((dir.path() / "a" / "overlays" / name).string()) ==
              testutil::read_file((dir.path() / "b" / "overlays" / name).string()));
    }
}

TEST_CASE("missing ground truth exits with code 2 and leaves no output") {
    testutil::TempDir dir("missing");
    const std::string seq_dir = (dir.path() / "seq").string();
    fs::create_directories(seq_dir);
    const Tensor frame(1, 3, 32, 32, 0.3);
    save_ppm(seq_dir + "/0001.ppm", frame);

    TrackArgs track;
    track.sequence_dir = seq_dir;
    track.out_dir = (dir.path() / "out").string();
    CHECK(cmd_track(track) == 2);
    CHECK(!fs::exists(track.out_dir));
}

TEST_CASE("eval scores the echoed ground truth at AUC 1.0") {
    testutil::TempDir dir("eval");
    const std::string dataset = (dir.path() / "dataset").string();
    fs::create_directories(dataset);
    const std::string seq_dir = make_sequence_dir(dir, "dataset/run1", 6, 1.0);
    (void)seq_dir;

    const std::string results = (dir.path() / "results").string();
    fs::create_directories(results);
    fs::copy_file(fs::path(dataset) / "run1" / "groundtruth_rect.txt",
                  fs::path(results) / "run1.txt");

    EvalArgs eval;
    eval.dataset_dir = dataset;
    eval.results_dir = results;
    eval.out_dir = (dir.path() / "reports").string();
    REQUIRE(cmd_eval(eval) == 0);
    const std::string report =
        testutil::read_file((fs::path(eval.out_dir) / "aggregate_report.txt").string());
    CHECK(report.find("success_auc 1.000000") != std::string::npos);

    EvalArgs empty;
    empty.dataset_dir = (dir.path() / "nothing").string();
    fs::create_directories(empty.dataset_dir);
    empty.results_dir = results;
    empty.out_dir = eval.out_dir;
    CHECK(cmd_eval(empty) == 2);
}

TEST_CASE("eval flags mismatched result lengths but continues") {
    testutil::TempDir dir("evalmismatch");
    const std::string dataset = (dir.path() / "dataset").string();
    fs::create_directories(dataset);
    make_sequence_dir(dir, "dataset/good", 5);
    make_sequence_dir(dir, "dataset/bad", 5);

    const std::string results = (dir.path() / "results").string();
    fs::create_directories(results);
    fs::copy_file(fs::path(dataset) / "good" / "groundtruth_rect.txt",
                  fs::path(results) / "good.txt");
    write_text((fs::path(results) / "bad.txt").string(), "1,1,5,5\n");  // wrong length

    EvalArgs eval;
    eval.dataset_dir = dataset;
    eval.results_dir = results;
    eval.out_dir = (dir.path() / "reports").string();
    REQUIRE(cmd_eval(eval) == 0);
    CHECK(fs::exists(fs::path(eval.out_dir) / "good_report.txt"));
    CHECK(!fs::exists(fs::path(eval.out_dir) / "bad_report.txt"));
}

TEST_CASE("zero-step training writes the initialization") {
    testutil::TempDir dir("train0");
    const std::string config_path = (dir.path() / "train.json").string();
    write_text(config_path,
               "{\"pairs\":1,\"steps\":0,\"template_size\":32,\"search_size\":72,"
               "\"adjust_width\":8,\"seed\":5}");
    TrainArgs train;
    train.config_path = config_path;
    train.out_params = (dir.path() / "params.bin").string();
    REQUIRE(cmd_train(train) == 0);

    ModelParams expected = make_random_model(64, 8, 5);
    ModelParams loaded = make_random_model(64, 8, 5);
    load_model(train.out_params, loaded);
    std::vector<double> a, b;
    visit_params(expected, [&](Tensor& t) { a.insert(a.end(), t.data().begin(), t.data().end()); });
    visit_params(loaded, [&](Tensor& t) { b.insert(b.end(), t.data().begin(), t.data().end()); });
    CHECK(a == b);

    const std::string trace = testutil::read_file(train.out_params + ".loss.txt");
    CHECK(trace.find("0 ") == 0);  // single entry, the initial loss
}

TEST_CASE("training emits a loss log with a downward trend") {
    testutil::TempDir dir("trainlog");
    const std::string config_path = (dir.path() / "train.json").string();
    write_text(config_path,
               "{\"pairs\":1,\"steps\":30,\"template_size\":32,\"search_size\":72,"
               "\"adjust_width\":8,\"seed\":11}");
    TrainArgs train;
    train.config_path = config_path;
    train.out_params = (dir.path() / "params.bin").string();
    REQUIRE(cmd_train(train) == 0);

    std::ifstream trace(train.out_params + ".loss.txt");
    std::vector<double> losses;
    int index;
    double value;
    while (trace >> index >> value) losses.push_back(value);
    REQUIRE(losses.size() == 31);
    CHECK(losses.back() < losses.front());
}

TEST_CASE("model files round trip through save and load") {
    testutil::TempDir dir("params");
    const std::string path = (dir.path() / "m.bin").string();
    ModelParams model = make_random_model(8, 4, 42);
    save_model(path, model);
    ModelParams loaded = make_random_model(8, 4, 1);  // different init, same shapes
    load_model(path, loaded);
    std::vector<double> a, b;
    visit_params(model, [&](Tensor& t) { a.insert(a.end(), t.data().begin(), t.data().end()); });
    visit_params(loaded, [&](Tensor& t) { b.insert(b.end(), t.data().begin(), t.data().end()); });
    CHECK(a == b);

    ModelParams wrong = make_random_model(8, 6, 1);  // architecture mismatch
    CHECK_THROWS_AS(load_model(path, wrong), InputError);
    CHECK_THROWS_AS(load_model((dir.path() / "nope.bin").string(), loaded), InputError);
}

TEST_CASE("selftest command reports success") {
    CHECK(cmd_selftest() == 0);
}
