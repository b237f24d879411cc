#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cornertrack/tensor.hpp"

namespace cornertrack {

// Define-by-run reverse-mode tape over the tensor kernels, the four
// directional poolings, depth-wise correlation and the two training losses.
// Values are computed eagerly as ops are recorded, so the same code path
// serves inference (record, read values) and training (record, backward).
// Node order is the topological order by construction: an op may only
// reference earlier node ids.
class Tape {
public:
    using NodeId = int;

    NodeId constant(Tensor value);
    NodeId parameter(Tensor value);

    const Tensor& value(NodeId id) const;
    bool is_parameter(NodeId id) const;
    int node_count() const { return static_cast<int>(nodes_.size()); }

    NodeId conv2d(NodeId input, NodeId kernel, NodeId bias, int stride, int padding);
    NodeId relu(NodeId input);
    NodeId sigmoid(NodeId input);
    NodeId add(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    NodeId scale(NodeId a, double factor);
    NodeId sum(NodeId a);  // -> (1,1,1,1)

    NodeId prefix_max_w(NodeId input);
    NodeId prefix_max_h(NodeId input);
    NodeId suffix_max_w(NodeId input);
    NodeId suffix_max_h(NodeId input);

    NodeId depthwise_correlate(NodeId templ, NodeId search);

    // Corner-heatmap focal objective. pred must hold probabilities; they are
    // clamped to [1e-7, 1 - 1e-7] internally (flat gradient outside).
    // Positive cells are those where target == 1 exactly.
    NodeId focal_loss(NodeId pred, const Tensor& target, double alpha, double beta, int k);

    // The same objective on pre-sigmoid logits; saturation-safe in both
    // directions, which is what training runs on.
    NodeId focal_loss_logits(NodeId logits, const Tensor& target, double alpha, double beta,
                             int k);

    // Smooth-L1 offset objective read out of a 2-channel offset map at the
    // given grid cells; component residuals are summed per cell, the total
    // averaged over cells.
    NodeId offset_loss(NodeId offset_map, const std::vector<std::pair<int, int>>& cells,
                       const std::vector<std::array<double, 2>>& targets);

    // Gradients of the scalar node `loss` with respect to every parameter
    // node; parameters the loss does not depend on get zero tensors.
    std::unordered_map<NodeId, Tensor> backward(NodeId loss);

private:
    struct Node {
        Tensor value;
        bool param = false;
        // Receives d(loss)/d(node) and distributes it to the parents.
        std::function<void(Tape&, const Tensor&)> backprop;
    };

    NodeId push(Tensor value, std::function<void(Tape&, const Tensor&)> backprop);
    void accumulate(NodeId id, const Tensor& grad);
    NodeId record_pooling(NodeId input, int direction);

    std::vector<Node> nodes_;
    std::vector<Tensor> grads_;  // live only during backward()
};

struct GradientReport {
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    std::size_t worst_index = 0;  // coordinate of the worst relative error
};

// Compares `analytic_grad` against central differences of f around `point`,
// one coordinate at a time. Relative error per coordinate is
// |a - n| / max(|a| + |n|, 1e-4); the floor keeps the measure meaningful on
// coordinates whose true gradient is below the difference quotient's noise.
GradientReport grad_check(const std::function<double(const Tensor&)>& f,
                          const Tensor& analytic_grad, const Tensor& point, double step);

// Convenience wrapper: builds the scalar function and its analytic gradient
// from a tape program (input node -> loss node).
using TapeProgram = std::function<Tape::NodeId(Tape&, Tape::NodeId)>;
GradientReport grad_check(const TapeProgram& program, const Tensor& point, double step);

// Fixed-step gradient descent with momentum, one velocity slot per
// registered parameter tensor.
class SgdMomentum {
public:
    SgdMomentum(double step_size, double momentum)
        : step_size_(step_size), momentum_(momentum) {}

    // params[i] and grads[i] must refer to the same logical parameter on
    // every call, in the same order.
    void step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads);

private:
    double step_size_;
    double momentum_;
    std::vector<Tensor> velocity_;
};

}  // namespace cornertrack
