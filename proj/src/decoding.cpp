#include "cornertrack/decoding.hpp"

#include <algorithm>

#include "cornertrack/errors.hpp"

namespace cornertrack {

Tensor heatmap_nms(const Tensor& heatmap, int window) {
    const Tensor maxed = window_max(heatmap, window);
    Tensor out = heatmap;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (heatmap.data()[i] != maxed.data()[i]) out.data()[i] = 0.0;
    }
    return out;
}

std::vector<Peak> topk(const Tensor& heatmap, int n) {
    if (heatmap.empty()) {
        throw ShapeError("topk: empty tensor");
    }
    if (n < 1) {
        throw ContractError("topk: n must be >= 1");
    }
    std::vector<Peak> cells;
    cells.reserve(static_cast<std::size_t>(heatmap.height()) * heatmap.width());
    for (int y = 0; y < heatmap.height(); ++y) {
        for (int x = 0; x < heatmap.width(); ++x) {
            cells.push_back(Peak{x, y, heatmap.at(0, 0, y, x)});
        }
    }
    // stable_sort keeps row-major order among equal scores
    std::stable_sort(cells.begin(), cells.end(),
                     [](const Peak& a, const Peak& b) { return a.score > b.score; });
    if (cells.size() > static_cast<std::size_t>(n)) cells.resize(n);
    return cells;
}

CornerSet decode_level(const HeatmapBundle& bundle, int n, int nms_window) {
    const auto tl_peaks = topk(heatmap_nms(bundle.tl_heatmap, nms_window), n);
    const auto br_peaks = topk(heatmap_nms(bundle.br_heatmap, nms_window), n);

    CornerSet set;
    set.space = CoordSpace::Heatmap;
    const std::size_t rows = std::min(tl_peaks.size(), br_peaks.size());
    set.rows.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const Peak& tl = tl_peaks[i];
        const Peak& br = br_peaks[i];
        CornerRow row;
        row.x_tl = tl.x + bundle.tl_offsets.at(0, 0, tl.y, tl.x);
        row.y_tl = tl.y + bundle.tl_offsets.at(0, 1, tl.y, tl.x);
        row.x_br = br.x + bundle.br_offsets.at(0, 0, br.y, br.x);
        row.y_br = br.y + bundle.br_offsets.at(0, 1, br.y, br.x);
        row.score = 0.5 * (tl.score + br.score);
        if (row.x_br <= row.x_tl || row.y_br <= row.y_tl) {
            row.score = 0.0;  // geometrically inconsistent pair keeps its slot
        }
        set.rows.push_back(row);
    }
    return set;
}

CornerSet to_patch_coords(const CornerSet& set, int stride) {
    if (set.space != CoordSpace::Heatmap) {
        throw ContractError("to_patch_coords: corner set is not in heatmap space");
    }
    CornerSet out = set;
    out.space = CoordSpace::Patch;
    for (CornerRow& row : out.rows) {
        row.x_tl *= stride;
        row.y_tl *= stride;
        row.x_br *= stride;
        row.y_br *= stride;
    }
    return out;
}

}  // namespace cornertrack
