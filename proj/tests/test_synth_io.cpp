#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "cornertrack/errors.hpp"
#include "cornertrack/image_io.hpp"
#include "cornertrack/synth.hpp"
#include "test_helpers.hpp"

using namespace cornertrack;

TEST_CASE("zero velocity and zero noise give identical frames") {
    SequenceSpec spec;
    spec.frame_w = 64;
    spec.frame_h = 64;
    spec.length = 5;
    spec.init_box = BBox::from_xywh(20, 20, 16, 16);
    const Sequence seq = generate(spec);
    for (int t = 1; t < 5; ++t) {
        CHECK(seq.frames[t].data() == seq.frames[0].data());
        CHECK(seq.boxes[t].x_tl == seq.boxes[0].x_tl);
    }
}

TEST_CASE("integer velocity moves the ground truth exactly") {
    SequenceSpec spec;
    spec.frame_w = 200;
    spec.frame_h = 64;
    spec.length = 20;
    spec.init_box = BBox::from_xywh(10, 20, 16, 16);
    spec.velocity_x = 2.0;
    const Sequence seq = generate(spec);
    for (int t = 0; t < 20; ++t) {
        CHECK(seq.boxes[t].x_tl == doctest::Approx(10.0 + 2.0 * t).epsilon(1e-12));
        CHECK(seq.boxes[t].y_tl == doctest::Approx(20.0).epsilon(1e-12));
    }
}

TEST_CASE("geometric scale growth matches the closed form until clipping") {
    SequenceSpec spec;
    spec.frame_w = 128;
    spec.frame_h = 128;
    spec.length = 51;
    spec.init_box = BBox::from_center(64, 64, 10, 10);
    spec.scale_rate = 1.01;
    const Sequence seq = generate(spec);
    CHECK(seq.boxes[50].width() ==
          doctest::Approx(10.0 * std::pow(1.01, 50)).epsilon(1e-9));

    // With a tiny frame the box clips at the frame size instead.
    spec.frame_w = 32;
    spec.frame_h = 32;
    spec.init_box = BBox::from_center(16, 16, 20, 20);
    spec.length = 80;
    const Sequence clipped = generate(spec);
    CHECK(clipped.boxes[79].width() == 32.0);
}

TEST_CASE("same seed reproduces frames bit-for-bit") {
    SequenceSpec spec;
    spec.frame_w = 48;
    spec.frame_h = 48;
    spec.length = 3;
    spec.init_box = BBox::from_xywh(8, 8, 16, 16);
    spec.noise_amp = 0.1;
    spec.seed = 77;
    const Sequence a = generate(spec);
    const Sequence b = generate(spec);
    for (int t = 0; t < 3; ++t) {
        CHECK(a.frames[t].data() == b.frames[t].data());
    }
    spec.seed = 78;
    const Sequence c = generate(spec);
    CHECK(a.frames[0].data() != c.frames[0].data());
}

TEST_CASE("ground truth always satisfies the box invariants") {
    SequenceSpec spec;
    spec.frame_w = 80;
    spec.frame_h = 60;
    spec.length = 60;
    spec.init_box = BBox::from_xywh(4, 4, 12, 12);
    spec.velocity_x = -3.0;
    spec.velocity_y = 5.0;
    spec.scale_rate = 0.97;
    spec.distractor = true;
    const Sequence seq = generate(spec);
    for (const BBox& box : seq.boxes) {
        CHECK(box.valid());
        CHECK(box.width() >= 8.0);
        CHECK(box.height() >= 8.0);
        CHECK(box.x_tl >= 0.0);
        CHECK(box.y_tl >= 0.0);
        CHECK(box.x_br <= 80.0);
        CHECK(box.y_br <= 60.0);
    }
}

TEST_CASE("generate validates its spec") {
    SequenceSpec spec;
    spec.init_box = BBox::from_xywh(10, 10, 4, 4);  // below the 8x8 floor
    CHECK_THROWS_AS(generate(spec), InputError);
    spec.init_box = BBox::from_xywh(250, 10, 16, 16);  // outside the frame
    CHECK_THROWS_AS(generate(spec), InputError);
    spec = SequenceSpec{};
    spec.noise_amp = 0.9;
    CHECK_THROWS_AS(generate(spec), InputError);
}

TEST_CASE("ppm round trip quantizes to 8 bits and is byte-stable") {
    testutil::TempDir dir("ppm");
    Lcg64 rng(81);
    const Tensor image = testutil::random_tensor(1, 3, 14, 18, rng, 0.0, 1.0);
    const std::string path = dir.str() + "/img.ppm";
    save_ppm(path, image);
    const Tensor loaded = load_ppm(path);
    REQUIRE(loaded.same_shape(image));
    for (std::size_t i = 0; i < image.size(); ++i) {
        CHECK(std::fabs(loaded.data()[i] - image.data()[i]) <= 0.5 / 255.0 + 1e-12);
    }
    const std::string again = dir.str() + "/img2.ppm";
    save_ppm(again, image);
    CHECK(testutil::read_file(path) == testutil::read_file(again));

    // Saving the loaded image reproduces the exact bytes (fixed quantization).
    const std::string third = dir.str() + "/img3.ppm";
    save_ppm(third, loaded);
    CHECK(testutil::read_file(path) == testutil::read_file(third));
}

TEST_CASE("groundtruth files accept comma, tab and space separators") {
    testutil::TempDir dir("gt");
    const std::string path = dir.str() + "/groundtruth_rect.txt";
    {
        std::ofstream out(path);
        out << "10,20,30,40\n";
        out << "11\t21\t31\t41\n";
        out << "12 22 32 42\n";
    }
    const auto boxes = load_groundtruth(path);
    REQUIRE(boxes.size() == 3);
    CHECK(boxes[0].x_tl == 10.0);
    CHECK(boxes[1].y_tl == 21.0);
    CHECK(boxes[2].width() == 32.0);

    {
        std::ofstream out(path);
        out << "10,20,30\n";
    }
    CHECK_THROWS_AS(load_groundtruth(path), InputError);
}

TEST_CASE("save_boxes writes the x,y,w,h convention") {
    testutil::TempDir dir("boxes");
    const std::string path = dir.str() + "/boxes.txt";
    save_boxes(path, {BBox::from_xywh(1.5, 2.25, 10, 20)});
    const auto boxes = load_groundtruth(path);
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].x_tl == doctest::Approx(1.5));
    CHECK(boxes[0].width() == doctest::Approx(10.0));
}

TEST_CASE("open_sequence demands matching frame and ground-truth counts") {
    testutil::TempDir dir("seq");
    SequenceSpec spec;
    spec.frame_w = 32;
    spec.frame_h = 32;
    spec.length = 3;
    spec.init_box = BBox::from_xywh(8, 8, 12, 12);
    const Sequence seq = generate(spec);
    for (int t = 0; t < 3; ++t) {
        char name[16];
        std::snprintf(name, sizeof(name), "%04d.ppm", t + 1);
        save_ppm(dir.str() + "/" + name, seq.frames[t]);
    }
    save_boxes(dir.str() + "/groundtruth_rect.txt", {seq.boxes[0], seq.boxes[1]});
    CHECK_THROWS_AS(open_sequence(dir.str()), InputError);
    save_boxes(dir.str() + "/groundtruth_rect.txt", seq.boxes);
    const SequenceOnDisk disk = open_sequence(dir.str());
    CHECK(disk.frame_paths.size() == 3);
    CHECK(disk.groundtruth.size() == 3);
}
