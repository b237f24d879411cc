#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cornertrack/bbox.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

// Fixed palette of the synthetic scenes (RGB in [0,1]). The oracle feature
// extractor recognizes the target by kTargetFill, so the colors are part of
// the contract between synth and the oracle.
inline constexpr std::array<double, 3> kBackgroundColor{0.10, 0.12, 0.15};
inline constexpr std::array<double, 3> kTargetFill{0.90, 0.30, 0.20};
inline constexpr std::array<double, 3> kDistractorFill{0.20, 0.80, 0.35};

// Moving-rectangle sequence description. The box state evolves per frame as
//   center += velocity;  w *= scale_rate * aspect_rate;  h *= scale_rate / aspect_rate
// and is then clamped so the box stays >= 8x8 and inside the frame.
struct SequenceSpec {
    int frame_w = 256;
    int frame_h = 256;
    int length = 50;
    BBox init_box = BBox::from_xywh(80, 80, 96, 96);
    double velocity_x = 0.0;
    double velocity_y = 0.0;
    double scale_rate = 1.0;
    double aspect_rate = 1.0;
    bool distractor = false;
    double noise_amp = 0.0;  // additive uniform noise in [-amp, amp]
    std::uint64_t seed = 1;
};

struct Sequence {
    std::vector<Tensor> frames;  // (1,3,H,W) in [0,1]
    std::vector<BBox> boxes;     // ground truth per frame
};

Sequence generate(const SequenceSpec& spec);

SequenceSpec load_sequence_spec(const std::string& path);

}  // namespace cornertrack
