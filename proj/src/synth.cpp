#include "cornertrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "cornertrack/errors.hpp"
#include "cornertrack/rng.hpp"

namespace cornertrack {

namespace {

void draw_rect(Tensor& frame, const BBox& box, const std::array<double, 3>& color) {
    const int x0 = std::max(0, static_cast<int>(std::ceil(box.x_tl)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(box.y_tl)));
    const int x1 = std::min(frame.width(), static_cast<int>(std::ceil(box.x_br)));
    const int y1 = std::min(frame.height(), static_cast<int>(std::ceil(box.y_br)));
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            for (int c = 0; c < 3; ++c) frame.at(0, c, y, x) = color[c];
        }
    }
}

// Keep the box >= 8x8, <= frame, fully inside.
BBox clamp_box(double cx, double cy, double w, double h, int fw, int fh) {
    w = std::clamp(w, 8.0, static_cast<double>(fw));
    h = std::clamp(h, 8.0, static_cast<double>(fh));
    cx = std::clamp(cx, w / 2.0, fw - w / 2.0);
    cy = std::clamp(cy, h / 2.0, fh - h / 2.0);
    return BBox::from_center(cx, cy, w, h);
}

}  // namespace

Sequence generate(const SequenceSpec& spec) {
    if (spec.frame_w < 16 || spec.frame_h < 16 || spec.length < 1) {
        throw InputError("generate: frame must be at least 16x16 and length >= 1");
    }
    if (!spec.init_box.valid() || spec.init_box.width() < 8.0 || spec.init_box.height() < 8.0) {
        throw InputError("generate: initial box must be valid and at least 8x8");
    }
    if (spec.init_box.x_tl < 0 || spec.init_box.y_tl < 0 ||
        spec.init_box.x_br > spec.frame_w || spec.init_box.y_br > spec.frame_h) {
        throw InputError("generate: initial box must lie inside the frame");
    }
    if (spec.noise_amp < 0.0 || spec.noise_amp > 0.5) {
        throw InputError("generate: noise amplitude must lie in [0, 0.5]");
    }
    if (spec.scale_rate <= 0.0 || spec.aspect_rate <= 0.0) {
        throw InputError("generate: rates must be positive");
    }

    Lcg64 rng(spec.seed);
    Sequence seq;
    seq.frames.reserve(spec.length);
    seq.boxes.reserve(spec.length);

    double cx = spec.init_box.center_x();
    double cy = spec.init_box.center_y();
    double w = spec.init_box.width();
    double h = spec.init_box.height();

    // Distractor starts mirrored across the frame center and drifts the
    // opposite way; it is drawn first so the target wins overlaps.
    double dx = spec.frame_w - cx;
    double dy = spec.frame_h - cy;

    for (int t = 0; t < spec.length; ++t) {
        if (t > 0) {
            cx += spec.velocity_x;
            cy += spec.velocity_y;
            w *= spec.scale_rate * spec.aspect_rate;
            h *= spec.scale_rate / spec.aspect_rate;
            dx -= spec.velocity_x;
            dy -= spec.velocity_y;
        }
        const BBox box = clamp_box(cx, cy, w, h, spec.frame_w, spec.frame_h);
        cx = box.center_x();
        cy = box.center_y();
        w = box.width();
        h = box.height();

        Tensor frame(1, 3, spec.frame_h, spec.frame_w);
        for (int c = 0; c < 3; ++c) {
            for (int y = 0; y < spec.frame_h; ++y) {
                for (int x = 0; x < spec.frame_w; ++x) {
                    frame.at(0, c, y, x) = kBackgroundColor[c];
                }
            }
        }
        if (spec.distractor) {
            const BBox dbox = clamp_box(dx, dy, w * 0.8, h * 0.8, spec.frame_w, spec.frame_h);
            draw_rect(frame, dbox, kDistractorFill);
        }
        draw_rect(frame, box, kTargetFill);
        if (spec.noise_amp > 0.0) {
            for (double& v : frame.data()) {
                v = std::clamp(v + rng.uniform(-spec.noise_amp, spec.noise_amp), 0.0, 1.0);
            }
        }
        seq.frames.push_back(std::move(frame));
        seq.boxes.push_back(box);
    }
    return seq;
}

SequenceSpec load_sequence_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("load_sequence_spec: cannot open " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("load_sequence_spec: " + std::string(e.what()));
    }
    SequenceSpec spec;
    const auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("frame_w", spec.frame_w);
    get("frame_h", spec.frame_h);
    get("length", spec.length);
    if (j.contains("box")) {
        const auto b = j.at("box").get<std::vector<double>>();
        if (b.size() != 4) {
            throw InputError("load_sequence_spec: box must be [x, y, w, h]");
        }
        spec.init_box = BBox::from_xywh(b[0], b[1], b[2], b[3]);
    }
    get("velocity_x", spec.velocity_x);
    get("velocity_y", spec.velocity_y);
    get("scale_rate", spec.scale_rate);
    get("aspect_rate", spec.aspect_rate);
    get("distractor", spec.distractor);
    get("noise_amp", spec.noise_amp);
    get("seed", spec.seed);
    for (const auto& [key, _] : j.items()) {
        static const std::vector<std::string> known = {
            "frame_w", "frame_h", "length",     "box",       "velocity_x", "velocity_y",
            "scale_rate", "aspect_rate", "distractor", "noise_amp", "seed"};
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw InputError("load_sequence_spec: unknown key '" + key + "'");
        }
    }
    return spec;
}

}  // namespace cornertrack
