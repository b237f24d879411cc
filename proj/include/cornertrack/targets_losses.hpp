#pragma once

#include <array>
#include <utility>
#include <vector>

#include "cornertrack/bbox.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

struct LossWeights {
    double alpha = 2.0;   // focal exponent on the prediction
    double beta = 4.0;    // focal exponent on the soft negatives
    double lambda = 1.0;  // offset-loss weight
    double d = 0.5;       // IoU bound used when deriving Gaussian radii
};

// Rendered ground truth for one corner branch on one heatmap grid.
struct TargetMaps {
    Tensor heatmap;                                  // (1,1,H,W) in [0,1], 1 at positives
    std::vector<std::pair<int, int>> positives;      // (x, y) grid cells
    std::vector<std::array<double, 2>> offsets;      // per positive, components in [0,1)
    int k() const { return static_cast<int>(positives.size()); }
};

// Largest integer r such that shifting a w x h box's corner pair by r --
// both inward, both outward, or both by the same diagonal (+r,+r) -- keeps
// IoU with the original box at least d. Solved from the three quadratic
// constraints.
int gaussian_radius(double w, double h, double d);

// Unnormalized Gaussian exp(-((x-cx)^2+(y-cy)^2) / (2*(r/3)^2)) over the
// grid; exactly 1 at the center. radius 0 degenerates to a one-hot map.
Tensor render_heatmap(int grid_h, int grid_w, int cx, int cy, int radius);

// Sub-stride remainder of an image location (m, n) under stride s:
// (m/s - floor(m/s), n/s - floor(n/s)).
std::array<double, 2> offset_target(double m, double n, int s);

// Focal objective over a corner heatmap. Cells with target exactly 1 are
// positives and contribute -(1-p)^alpha * log p; every other cell
// contributes -(1-t)^beta * p^alpha * log(1-p). Sum divided by k.
// Predictions are clamped to [1e-7, 1 - 1e-7].
double focal_loss(const Tensor& pred, const Tensor& target, const LossWeights& weights, int k);

// d(focal_loss)/d(pred); zero where the clamp is active.
Tensor focal_loss_grad(const Tensor& pred, const Tensor& target, const LossWeights& weights,
                       int k);

// Same objective expressed on pre-sigmoid logits, evaluated through
// softplus/log1p so saturated cells keep exact forward values and O(1)
// gradients. Training uses this form; the clamped probability form above
// exists for decoded heatmaps, which are probabilities already.
double focal_loss_logits(const Tensor& logits, const Tensor& target,
                         const LossWeights& weights, int k);
Tensor focal_loss_logits_grad(const Tensor& logits, const Tensor& target,
                              const LossWeights& weights, int k);

// Mean over pairs of component-summed smooth L1: 0.5*x^2 for |x| < 1,
// |x| - 0.5 otherwise.
double offset_loss(const std::vector<std::array<double, 2>>& pred,
                   const std::vector<std::array<double, 2>>& target, int k);

double total_loss(double heatmap_loss, double offset_loss, double lambda);

// Renders both corner branches of one box given in patch-pixel coordinates
// onto a grid_h x grid_w heatmap at the given stride. The Gaussian radius is
// derived from the box size measured in grid cells. Corner cells are clamped
// into the grid.
struct BranchTargets {
    TargetMaps tl;
    TargetMaps br;
};
BranchTargets make_target_maps(const BBox& box_patch, int grid_h, int grid_w, int stride,
                               double d);

}  // namespace cornertrack
