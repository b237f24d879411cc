#pragma once

#include <array>

#include "cornertrack/params.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

// Template and search features of one backbone level, after the adjustment
// convolutions. Index 0..3 of boundaries() follows the top, left, bottom,
// right order used throughout.
struct FeatureLevel {
    int level = 3;   // 3, 4 or 5
    int stride = 8;  // input pixels per feature cell
    Tensor f_top, f_left, f_bottom, f_right;  // template features
    Tensor f_search;

    std::array<const Tensor*, 4> boundaries() const {
        return {&f_top, &f_left, &f_bottom, &f_right};
    }
};

// Per-channel valid cross-correlation of `search` with `templ` as the
// kernel. Channels stay independent; the output spatial size is
// search - template + 1 per axis.
Tensor depthwise_correlate(const Tensor& templ, const Tensor& search);

// The four boundary correlation maps f_t, f_l, f_b, f_r of one level.
struct CorrelationMaps {
    Tensor f_t, f_l, f_b, f_r;
};
CorrelationMaps correlate_level(const FeatureLevel& level);

}  // namespace cornertrack
