#pragma once

#include <vector>

#include "cornertrack/tensor.hpp"

namespace cornertrack {

// Decoded per-level outputs of one corner-head pair, heatmaps post-sigmoid.
struct HeatmapBundle {
    int level = 3;
    int stride = 8;
    Tensor tl_heatmap, br_heatmap;  // (1,1,H,W), values in [0,1]
    Tensor tl_offsets, br_offsets;  // (1,2,H,W)
};

enum class CoordSpace { Heatmap, Patch, Frame };

struct CornerRow {
    double x_tl = 0.0, y_tl = 0.0, x_br = 0.0, y_br = 0.0;
    double score = 0.0;

    double width() const { return x_br - x_tl; }
    double height() const { return y_br - y_tl; }
};

struct CornerSet {
    std::vector<CornerRow> rows;
    CoordSpace space = CoordSpace::Heatmap;
};

// Keeps cells equal to their window-max, zeroes the rest. Plateaus survive
// whole; the later top-k tie-break orders them.
Tensor heatmap_nms(const Tensor& heatmap, int window);

struct Peak {
    int x = 0, y = 0;
    double score = 0.0;
};

// The n highest-scoring cells of plane (0,0), score-descending, ties by
// row-major scan order. Returns fewer rows when the grid is smaller than n.
std::vector<Peak> topk(const Tensor& heatmap, int n);

// NMS + top-n on both heatmaps, offset refinement read at each peak's cell,
// rank-wise pairing, score = mean of branch scores. Pairs whose refined
// bottom-right does not lie strictly below-right of the top-left keep their
// slot with score 0.
CornerSet decode_level(const HeatmapBundle& bundle, int n, int nms_window = 3);

// Heatmap -> patch coordinates: multiply everything spatial by the stride.
CornerSet to_patch_coords(const CornerSet& set, int stride);

}  // namespace cornertrack
