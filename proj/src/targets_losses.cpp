#include "cornertrack/targets_losses.hpp"

#include <algorithm>
#include <cmath>

#include "cornertrack/errors.hpp"

namespace cornertrack {

namespace {

constexpr double kClampEps = 1e-7;

double clamp_pred(double p) { return std::clamp(p, kClampEps, 1.0 - kClampEps); }

}  // namespace

int gaussian_radius(double w, double h, double d) {
    if (w <= 0.0 || h <= 0.0) {
        throw InputError("gaussian_radius: box dimensions must be positive");
    }
    if (d <= 0.0 || d >= 1.0) {
        throw InputError("gaussian_radius: d must lie in (0,1)");
    }
    // Shrink: (w-2r)(h-2r) >= d*w*h  ->  4r^2 - 2(w+h)r + wh(1-d) >= 0.
    const double s = w + h;
    const double r_shrink = (s - std::sqrt(s * s - 4.0 * w * h * (1.0 - d))) / 4.0;
    // Expand: wh >= d*(w+2r)(h+2r)  ->  4d r^2 + 2d(w+h)r + wh(d-1) <= 0.
    const double r_expand =
        (-d * s + std::sqrt(d * d * s * s + 4.0 * d * w * h * (1.0 - d))) / (4.0 * d);
    // Translate: (w-r)(h-r) >= d*(2wh - (w-r)(h-r))
    //   ->  r^2 - (w+h)r + wh(1 - 2d/(1+d)) >= 0.
    const double q = 2.0 * d * w * h / (1.0 + d);
    const double r_translate = (s - std::sqrt(s * s - 4.0 * (w * h - q))) / 2.0;

    const double bound = std::min({r_shrink, r_expand, r_translate});
    // The 1e-9 slack absorbs sqrt rounding when the bound is exactly integral.
    return std::max(0, static_cast<int>(std::floor(bound + 1e-9)));
}

Tensor render_heatmap(int grid_h, int grid_w, int cx, int cy, int radius) {
    if (cx < 0 || cy < 0 || cx >= grid_w || cy >= grid_h) {
        throw InputError("render_heatmap: center (" + std::to_string(cx) + "," +
                         std::to_string(cy) + ") outside " + std::to_string(grid_w) + "x" +
                         std::to_string(grid_h) + " grid");
    }
    Tensor map(1, 1, grid_h, grid_w);
    if (radius <= 0) {
        map.at(0, 0, cy, cx) = 1.0;
        return map;
    }
    const double sigma = radius / 3.0;
    const double denom = 2.0 * sigma * sigma;
    for (int y = 0; y < grid_h; ++y) {
        for (int x = 0; x < grid_w; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            map.at(0, 0, y, x) = std::exp(-(dx * dx + dy * dy) / denom);
        }
    }
    map.at(0, 0, cy, cx) = 1.0;
    return map;
}

std::array<double, 2> offset_target(double m, double n, int s) {
    return {m / s - std::floor(m / s), n / s - std::floor(n / s)};
}

double focal_loss(const Tensor& pred, const Tensor& target, const LossWeights& weights, int k) {
    if (!pred.same_shape(target)) {
        throw ShapeError("focal_loss: pred " + pred.shape_str() + " vs target " +
                         target.shape_str());
    }
    if (k < 1) {
        throw ContractError("focal_loss: k must be >= 1, got " + std::to_string(k));
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double p = clamp_pred(pred.data()[i]);
        const double t = target.data()[i];
        if (t == 1.0) {
            loss -= std::pow(1.0 - p, weights.alpha) * std::log(p);
        } else {
            loss -= std::pow(1.0 - t, weights.beta) * std::pow(p, weights.alpha) *
                    std::log(1.0 - p);
        }
    }
    return loss / k;
}

Tensor focal_loss_grad(const Tensor& pred, const Tensor& target, const LossWeights& weights,
                       int k) {
    if (!pred.same_shape(target)) {
        throw ShapeError("focal_loss_grad: pred " + pred.shape_str() + " vs target " +
                         target.shape_str());
    }
    if (k < 1) {
        throw ContractError("focal_loss_grad: k must be >= 1");
    }
    Tensor grad(pred.batch(), pred.channels(), pred.height(), pred.width());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double raw = pred.data()[i];
        if (raw < kClampEps || raw > 1.0 - kClampEps) {
            continue;  // clamp is flat
        }
        const double p = raw;
        const double t = target.data()[i];
        double g;
        if (t == 1.0) {
            // d/dp [-(1-p)^a log p]
            g = weights.alpha * std::pow(1.0 - p, weights.alpha - 1.0) * std::log(p) -
                std::pow(1.0 - p, weights.alpha) / p;
        } else {
            // d/dp [-(1-t)^b p^a log(1-p)]
            g = std::pow(1.0 - t, weights.beta) *
                (std::pow(p, weights.alpha) / (1.0 - p) -
                 weights.alpha * std::pow(p, weights.alpha - 1.0) * std::log(1.0 - p));
        }
        grad.data()[i] = g / k;
    }
    return grad;
}

namespace {

// ln(1 + e^x) without overflow; ln(sigmoid(z)) = -softplus(-z).
double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

double focal_loss_logits(const Tensor& logits, const Tensor& target,
                         const LossWeights& weights, int k) {
    if (!logits.same_shape(target)) {
        throw ShapeError("focal_loss_logits: logits " + logits.shape_str() + " vs target " +
                         target.shape_str());
    }
    if (k < 1) {
        throw ContractError("focal_loss_logits: k must be >= 1");
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double z = logits.data()[i];
        const double t = target.data()[i];
        if (t == 1.0) {
            // -(1-p)^a * ln p  with  1-p = sigmoid(-z), ln p = -softplus(-z)
            const double q = 1.0 / (1.0 + std::exp(z));
            loss += std::pow(q, weights.alpha) * softplus(-z);
        } else {
            // -(1-t)^b p^a ln(1-p)  with  ln(1-p) = -softplus(z)
            const double p = 1.0 / (1.0 + std::exp(-z));
            loss += std::pow(1.0 - t, weights.beta) * std::pow(p, weights.alpha) * softplus(z);
        }
    }
    return loss / k;
}

Tensor focal_loss_logits_grad(const Tensor& logits, const Tensor& target,
                              const LossWeights& weights, int k) {
    if (!logits.same_shape(target)) {
        throw ShapeError("focal_loss_logits_grad: shape mismatch");
    }
    if (k < 1) {
        throw ContractError("focal_loss_logits_grad: k must be >= 1");
    }
    Tensor grad(logits.batch(), logits.channels(), logits.height(), logits.width());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double z = logits.data()[i];
        const double t = target.data()[i];
        const double p = 1.0 / (1.0 + std::exp(-z));
        const double q = 1.0 / (1.0 + std::exp(z));  // 1 - p
        double g;
        if (t == 1.0) {
            // d/dz [ q^a * softplus(-z) ] = -q^a * (a*p*softplus(-z) + q)
            g = -std::pow(q, weights.alpha) * (weights.alpha * p * softplus(-z) + q);
        } else {
            // d/dz [ c p^a softplus(z) ] = c p^a (a*q*softplus(z) + p)
            g = std::pow(1.0 - t, weights.beta) * std::pow(p, weights.alpha) *
                (weights.alpha * q * softplus(z) + p);
        }
        grad.data()[i] = g / k;
    }
    return grad;
}

double offset_loss(const std::vector<std::array<double, 2>>& pred,
                   const std::vector<std::array<double, 2>>& target, int k) {
    if (pred.size() != target.size()) {
        throw ContractError("offset_loss: " + std::to_string(pred.size()) +
                            " predictions vs " + std::to_string(target.size()) + " targets");
    }
    if (k < 1) {
        throw ContractError("offset_loss: k must be >= 1");
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        for (int c = 0; c < 2; ++c) {
            const double x = pred[i][c] - target[i][c];
            const double ax = std::fabs(x);
            loss += ax < 1.0 ? 0.5 * x * x : ax - 0.5;
        }
    }
    return loss / k;
}

double total_loss(double heatmap_loss, double offset_loss_value, double lambda) {
    if (lambda < 0.0) {
        throw ContractError("total_loss: lambda must be >= 0");
    }
    return heatmap_loss + lambda * offset_loss_value;
}

namespace {

TargetMaps render_branch(double corner_x, double corner_y, int grid_h, int grid_w, int stride,
                         int radius) {
    TargetMaps t;
    const int cx = std::clamp(static_cast<int>(std::floor(corner_x / stride)), 0, grid_w - 1);
    const int cy = std::clamp(static_cast<int>(std::floor(corner_y / stride)), 0, grid_h - 1);
    t.heatmap = render_heatmap(grid_h, grid_w, cx, cy, radius);
    t.positives.emplace_back(cx, cy);
    t.offsets.push_back(offset_target(corner_x, corner_y, stride));
    return t;
}

}  // namespace

BranchTargets make_target_maps(const BBox& box_patch, int grid_h, int grid_w, int stride,
                               double d) {
    if (!box_patch.valid()) {
        throw InputError("make_target_maps: degenerate box");
    }
    const int radius =
        gaussian_radius(box_patch.width() / stride, box_patch.height() / stride, d);
    BranchTargets out;
    out.tl = render_branch(box_patch.x_tl, box_patch.y_tl, grid_h, grid_w, stride, radius);
    out.br = render_branch(box_patch.x_br, box_patch.y_br, grid_h, grid_w, stride, radius);
    return out;
}

}  // namespace cornertrack
