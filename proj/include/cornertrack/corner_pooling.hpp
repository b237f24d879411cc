#pragma once

#include <utility>
#include <vector>

#include "cornertrack/autodiff.hpp"
#include "cornertrack/params.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

// Directional running maxima over each (batch, channel) plane.
//
//   prefix_max_w: out(y, x) = max over k <= x of in(y, k)   (scan left to right)
//   prefix_max_h: out(y, x) = max over k <= y of in(k, x)   (scan top to bottom)
//   suffix_max_w: out(y, x) = max over k >= x of in(y, k)   (scan right to left)
//   suffix_max_h: out(y, x) = max over k >= y of in(k, x)   (scan bottom to top)
//
// The *_with_arg variants also report, per output cell, the flat index of the
// input cell that supplied the maximum; on ties the cell encountered earliest
// in scan order wins. That index is where the gradient routes.
Tensor pool_prefix_max_w(const Tensor& f);
Tensor pool_prefix_max_h(const Tensor& f);
Tensor pool_suffix_max_w(const Tensor& f);
Tensor pool_suffix_max_h(const Tensor& f);

Tensor pool_prefix_max_w_with_arg(const Tensor& f, std::vector<std::size_t>& argmax);
Tensor pool_prefix_max_h_with_arg(const Tensor& f, std::vector<std::size_t>& argmax);
Tensor pool_suffix_max_w_with_arg(const Tensor& f, std::vector<std::size_t>& argmax);
Tensor pool_suffix_max_h_with_arg(const Tensor& f, std::vector<std::size_t>& argmax);

enum class CornerKind { TopLeft, BottomRight };

// Parameters of one corner prediction head. The head consumes the two
// boundary correlation maps of its corner and emits heatmap logits
// (1 channel) and offsets (2 channels).
//
// Dataflow: each input passes a 3x3 conv+relu block, the two maps are pooled
// directionally (prefix for bottom-right, suffix for top-left), summed and
// passed through a 3x3 conv; both raw inputs are added back through 1x1
// projection shortcuts, then relu; finally two output stacks of
// 3x3 conv+relu, 3x3 conv+relu, 1x1 conv produce logits and offsets.
struct CornerHeadParams {
    ConvParams pre_a, pre_b;            // 3x3, applied to the raw inputs
    ConvParams post;                    // 3x3, applied to the pooled sum
    ConvParams shortcut_a, shortcut_b;  // 1x1 projections of the raw inputs
    ConvParams heat_a, heat_b, heat_final;
    ConvParams off_a, off_b, off_final;
};

// Random head for training: `channels` wide internally, seeded via rng.
CornerHeadParams make_corner_head(int channels, Lcg64& rng);

// Identity head used by the oracle pipeline: every conv is a center-tap
// delta; the final 1x1 layers select heat_channels (summed with weight 1)
// for the logits and (off_x_channel, off_y_channel) scaled by off_gain for
// the offsets.
CornerHeadParams make_passthrough_head(int channels, const std::vector<int>& heat_channels,
                                       int off_x_channel, int off_y_channel, double off_gain);

// Node-id mirror of CornerHeadParams once registered on a tape.
struct CornerHeadNodes {
    struct Conv {
        Tape::NodeId kernel, bias;
        int stride, padding;
    };
    Conv pre_a, pre_b, post, shortcut_a, shortcut_b;
    Conv heat_a, heat_b, heat_final;
    Conv off_a, off_b, off_final;
};

CornerHeadNodes register_corner_head(Tape& tape, const CornerHeadParams& params);

// Taped forward pass. f_a/f_b are the boundary correlation maps: (f_b, f_r)
// for BottomRight, (f_t, f_l) for TopLeft. Returns (heatmap logits, offsets).
std::pair<Tape::NodeId, Tape::NodeId> corner_head(Tape& tape, Tape::NodeId f_a,
                                                  Tape::NodeId f_b,
                                                  const CornerHeadNodes& head,
                                                  CornerKind kind);

// Pure forward pass over plain tensors.
std::pair<Tensor, Tensor> corner_head(const Tensor& f_a, const Tensor& f_b,
                                      const CornerHeadParams& params, CornerKind kind);

// Enumerates every parameter tensor of the head in a fixed, documented order
// (pre_a, pre_b, post, shortcut_a, shortcut_b, heat_a, heat_b, heat_final,
// off_a, off_b, off_final; kernel before bias). Serialization and the
// optimizer both rely on this order.
void visit_params(CornerHeadParams& params, const std::function<void(Tensor&)>& fn);

}  // namespace cornertrack
