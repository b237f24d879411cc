#include "cornertrack/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cornertrack/autodiff.hpp"
#include "cornertrack/corner_pooling.hpp"
#include "cornertrack/decoding.hpp"
#include "cornertrack/rng.hpp"
#include "cornertrack/targets_losses.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

namespace {

Tensor random_tensor(int n, int c, int h, int w, Lcg64& rng) {
    Tensor t(n, c, h, w);
    for (double& v : t.data()) v = rng.uniform(-1.0, 1.0);
    return t;
}

// Random values with pairwise gaps, so max ties cannot occur.
Tensor distinct_tensor(int n, int c, int h, int w, Lcg64& rng) {
    Tensor t(n, c, h, w);
    std::vector<double> values(t.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = (static_cast<double>(i) + 0.5) / values.size();
    }
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[rng.below(i)]);
    }
    t.data() = values;
    return t;
}

double segment_max(const Tensor& f, int b, int c, int y, int x, int axis, bool forward) {
    double m = f.at(b, c, y, x);
    if (axis == 0) {
        const int lo = forward ? 0 : x;
        const int hi = forward ? x : f.width() - 1;
        for (int k = lo; k <= hi; ++k) m = std::max(m, f.at(b, c, y, k));
    } else {
        const int lo = forward ? 0 : y;
        const int hi = forward ? y : f.height() - 1;
        for (int k = lo; k <= hi; ++k) m = std::max(m, f.at(b, c, k, x));
    }
    return m;
}

SelfTestResult check_pooling() {
    Lcg64 rng(2024);
    for (int round = 0; round < 50; ++round) {
        const int h = 2 + static_cast<int>(rng.below(15));
        const int w = 2 + static_cast<int>(rng.below(15));
        const Tensor f = random_tensor(1, 2, h, w, rng);
        const Tensor results[4] = {pool_prefix_max_w(f), pool_prefix_max_h(f),
                                   pool_suffix_max_w(f), pool_suffix_max_h(f)};
        const int axes[4] = {0, 1, 0, 1};
        const bool fwd[4] = {true, true, false, false};
        for (int dir = 0; dir < 4; ++dir) {
            for (int c = 0; c < 2; ++c) {
                for (int y = 0; y < h; ++y) {
                    for (int x = 0; x < w; ++x) {
                        if (results[dir].at(0, c, y, x) !=
                            segment_max(f, 0, c, y, x, axes[dir], fwd[dir])) {
                            return {"pooling oracle", false,
                                    "mismatch in direction " + std::to_string(dir)};
                        }
                    }
                }
            }
        }
    }
    return {"pooling oracle", true, "4 directions x 50 random tensors"};
}

SelfTestResult check_gradients() {
    Lcg64 rng(7);
    double worst = 0.0;
    for (int round = 0; round < 5; ++round) {
        const Tensor point = distinct_tensor(1, 2, 5, 5, rng);
        const GradientReport pool_report = grad_check(
            [](Tape& t, Tape::NodeId x) { return t.sum(t.prefix_max_w(x)); }, point, 1e-6);
        worst = std::max(worst, pool_report.max_rel_err);

        Tensor kernel = random_tensor(2, 2, 3, 3, rng);
        Tensor bias = random_tensor(1, 1, 1, 2, rng);
        const GradientReport conv_report = grad_check(
            [&](Tape& t, Tape::NodeId x) {
                return t.sum(t.sigmoid(
                    t.conv2d(x, t.constant(kernel), t.constant(bias), 1, 1)));
            },
            random_tensor(1, 2, 5, 5, rng), 1e-6);
        worst = std::max(worst, conv_report.max_rel_err);

        Tensor target(1, 1, 4, 4);
        target.at(0, 0, 1, 2) = 1.0;
        Tensor probs(1, 1, 4, 4);
        for (double& v : probs.data()) v = rng.uniform(0.05, 0.95);
        const GradientReport focal_report = grad_check(
            [&](Tape& t, Tape::NodeId x) { return t.focal_loss(x, target, 2.0, 4.0, 1); },
            probs, 1e-6);
        worst = std::max(worst, focal_report.max_rel_err);

        Tensor offsets = random_tensor(1, 2, 4, 4, rng);
        const GradientReport off_report = grad_check(
            [&](Tape& t, Tape::NodeId x) {
                return t.offset_loss(x, {{2, 1}}, {{0.25, 0.75}});
            },
            offsets, 1e-6);
        worst = std::max(worst, off_report.max_rel_err);
    }
    std::ostringstream detail;
    detail << "max relative error " << worst;
    return {"gradient checks", worst < 1e-5, detail.str()};
}

SelfTestResult check_radius() {
    for (int w = 1; w <= 100; ++w) {
        for (int h = 1; h <= 100; ++h) {
            const int closed = gaussian_radius(w, h, 0.5);
            // Exhaustive: walk r upward until a displacement case dips
            // below the IoU bound.
            int brute = 0;
            for (int r = 1; r <= std::max(w, h); ++r) {
                const double wh = static_cast<double>(w) * h;
                const double shrink = (w - 2.0 * r) * (h - 2.0 * r);
                const bool ok_shrink = w > 2 * r && h > 2 * r && shrink >= 0.5 * wh;
                const bool ok_expand = wh >= 0.5 * (w + 2.0 * r) * (h + 2.0 * r);
                const double inter = (w - r) * static_cast<double>(h - r);
                const bool ok_translate =
                    w > r && h > r && inter >= 0.5 * (2.0 * wh - inter);
                if (ok_shrink && ok_expand && ok_translate) {
                    brute = r;
                } else {
                    break;
                }
            }
            if (closed != brute) {
                return {"radius oracle", false,
                        "w=" + std::to_string(w) + " h=" + std::to_string(h) + ": closed " +
                            std::to_string(closed) + " vs brute " + std::to_string(brute)};
            }
        }
    }
    return {"radius oracle", true, "all (w,h) in [1,100]^2 at d=0.5"};
}

SelfTestResult check_decode_round_trip() {
    Lcg64 rng(99);
    const int stride = 8;
    double worst = 0.0;
    for (int round = 0; round < 200; ++round) {
        const int grid = 12;
        const double tl_x = rng.uniform(0.0, 40.0);
        const double tl_y = rng.uniform(0.0, 40.0);
        const double br_x = tl_x + rng.uniform(8.0, 50.0);
        const double br_y = tl_y + rng.uniform(8.0, 50.0);

        HeatmapBundle bundle;
        bundle.stride = stride;
        bundle.tl_heatmap = Tensor(1, 1, grid, grid);
        bundle.br_heatmap = Tensor(1, 1, grid, grid);
        bundle.tl_offsets = Tensor(1, 2, grid, grid);
        bundle.br_offsets = Tensor(1, 2, grid, grid);
        const auto plant = [&](Tensor& heat, Tensor& off, double px, double py) {
            const int cx = static_cast<int>(px) / stride;
            const int cy = static_cast<int>(py) / stride;
            heat.at(0, 0, cy, cx) = 1.0;
            const auto o = offset_target(px, py, stride);
            off.at(0, 0, cy, cx) = o[0];
            off.at(0, 1, cy, cx) = o[1];
        };
        plant(bundle.tl_heatmap, bundle.tl_offsets, tl_x, tl_y);
        plant(bundle.br_heatmap, bundle.br_offsets, br_x, br_y);

        const CornerSet set = to_patch_coords(decode_level(bundle, 1), stride);
        if (set.rows.empty()) {
            return {"decode round trip", false, "no rows decoded"};
        }
        worst = std::max({worst, std::fabs(set.rows[0].x_tl - tl_x),
                          std::fabs(set.rows[0].y_tl - tl_y),
                          std::fabs(set.rows[0].x_br - br_x),
                          std::fabs(set.rows[0].y_br - br_y)});
    }
    std::ostringstream detail;
    detail << "max coordinate error " << worst;
    return {"decode round trip", worst < 1e-9, detail.str()};
}

}  // namespace

std::vector<SelfTestResult> run_selftest() {
    return {check_pooling(), check_gradients(), check_radius(), check_decode_round_trip()};
}

}  // namespace cornertrack
