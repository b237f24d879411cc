#include "cornertrack/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cornertrack/errors.hpp"

namespace cornertrack {

double scale_term(double w, double h) {
    const double p = 0.5 * (w + h);
    return std::sqrt((w + p) * (h + p));
}

CornerSet fuse_levels(const std::vector<CornerSet>& sets, const CropMapping& mapping) {
    CornerSet fused;
    fused.space = CoordSpace::Frame;
    for (const CornerSet& set : sets) {
        if (set.space != CoordSpace::Patch) {
            throw ContractError("fuse_levels: every corner set must be in patch space");
        }
        for (const CornerRow& row : set.rows) {
            CornerRow mapped = row;
            std::tie(mapped.x_tl, mapped.y_tl) = map_patch_to_frame(row.x_tl, row.y_tl, mapping);
            std::tie(mapped.x_br, mapped.y_br) = map_patch_to_frame(row.x_br, row.y_br, mapping);
            fused.rows.push_back(mapped);
        }
    }
    return fused;
}

double penalty(const CornerRow& row, const BBox& previous, double eta) {
    const double w = row.width();
    const double h = row.height();
    if (w <= 0.0 || h <= 0.0) return 0.0;
    const double ratio = h / w;
    const double prev_ratio = previous.height() / previous.width();
    const double sc = scale_term(w, h);
    const double prev_sc = scale_term(previous.width(), previous.height());
    const double ratio_term = std::max(ratio / prev_ratio, prev_ratio / ratio);
    const double scale_change = std::max(sc / prev_sc, prev_sc / sc);
    return std::exp(eta * ratio_term * scale_change);
}

std::vector<int> motion_rank(const CornerSet& set, const BBox& previous) {
    if (set.rows.empty()) {
        throw ContractError("motion_rank: empty corner set");
    }
    std::vector<double> variation(set.rows.size());
    for (std::size_t i = 0; i < set.rows.size(); ++i) {
        const CornerRow& row = set.rows[i];
        variation[i] = std::fabs(0.5 * (row.x_tl + row.x_br) - previous.center_x()) +
                       std::fabs(0.5 * (row.y_tl + row.y_br) - previous.center_y()) +
                       std::fabs(row.width() - previous.width()) +
                       std::fabs(row.height() - previous.height());
    }
    std::vector<int> order(set.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return variation[a] > variation[b]; });
    return order;
}

std::vector<double> window_blend(const std::vector<double>& penalized,
                                 const std::vector<int>& rank, double gamma) {
    if (penalized.size() != rank.size()) {
        throw ContractError("window_blend: score/rank size mismatch");
    }
    if (gamma < 0.0 || gamma > 1.0) {
        throw ContractError("window_blend: gamma must lie in [0,1]");
    }
    const double m = static_cast<double>(penalized.size());
    std::vector<double> final_scores(penalized.size());
    for (std::size_t u = 0; u < rank.size(); ++u) {
        // 1-based rank: the most-moved candidate gets the smallest window value.
        const double hann =
            0.5 * (1.0 - std::cos(std::numbers::pi * (static_cast<double>(u) + 1.0) / m));
        final_scores[rank[u]] = penalized[rank[u]] * (1.0 - gamma) + hann * gamma;
    }
    return final_scores;
}

Selection select_and_smooth(const CornerSet& set, const std::vector<double>& final_scores,
                            const BBox& previous, double lr) {
    if (set.rows.empty() || set.rows.size() != final_scores.size()) {
        throw ContractError("select_and_smooth: corner set and scores must match");
    }
    if (lr <= 0.0 || lr > 1.0) {
        throw ContractError("select_and_smooth: lr must lie in (0,1]");
    }
    int best = -1;
    double best_score = 0.0;
    for (std::size_t i = 0; i < final_scores.size(); ++i) {
        const CornerRow& row = set.rows[i];
        // The window term can lift an inverted pair's blended score above
        // zero; never pick one, the output box must keep positive extent.
        if (row.width() <= 0.0 || row.height() <= 0.0) continue;
        if (final_scores[i] > best_score) {
            best_score = final_scores[i];
            best = static_cast<int>(i);
        }
    }
    if (best < 0) {
        return Selection{previous, -1};  // lost target: hold position
    }
    const CornerRow& picked = set.rows[best];
    const double new_w = (1.0 - lr) * previous.width() + lr * picked.width();
    const double new_h = (1.0 - lr) * previous.height() + lr * picked.height();
    const double cx = 0.5 * (picked.x_tl + picked.x_br);
    const double cy = 0.5 * (picked.y_tl + picked.y_br);
    return Selection{BBox::from_center(cx, cy, new_w, new_h), best};
}

}  // namespace cornertrack
