#include "cornertrack/corner_pooling.hpp"

#include "cornertrack/errors.hpp"

namespace cornertrack {

namespace {

// Shared scan: axis 0 = width, 1 = height; reversed flips the scan direction.
// argmax (if non-null) records, per output cell, the flat input index the
// maximum came from; strict > keeps the earliest cell in scan order on ties.
Tensor scan_max(const Tensor& f, int axis, bool reversed, std::vector<std::size_t>* argmax) {
    if (f.empty()) {
        throw ShapeError("corner pooling: empty tensor");
    }
    Tensor out = f;
    if (argmax) {
        argmax->resize(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) (*argmax)[i] = i;
    }
    const int len = axis == 0 ? f.width() : f.height();
    const int lanes = axis == 0 ? f.height() : f.width();
    for (int b = 0; b < f.batch(); ++b) {
        for (int c = 0; c < f.channels(); ++c) {
            for (int lane = 0; lane < lanes; ++lane) {
                double best = 0.0;
                std::size_t best_idx = 0;
                for (int step = 0; step < len; ++step) {
                    const int k = reversed ? len - 1 - step : step;
                    const int y = axis == 0 ? lane : k;
                    const int x = axis == 0 ? k : lane;
                    const std::size_t idx = f.index(b, c, y, x);
                    const double v = f.data()[idx];
                    if (step == 0 || v > best) {
                        best = v;
                        best_idx = idx;
                    }
                    out.data()[idx] = best;
                    if (argmax) (*argmax)[idx] = best_idx;
                }
            }
        }
    }
    return out;
}

}  // namespace

Tensor pool_prefix_max_w(const Tensor& f) { return scan_max(f, 0, false, nullptr); }
Tensor pool_prefix_max_h(const Tensor& f) { return scan_max(f, 1, false, nullptr); }
Tensor pool_suffix_max_w(const Tensor& f) { return scan_max(f, 0, true, nullptr); }
Tensor pool_suffix_max_h(const Tensor& f) { return scan_max(f, 1, true, nullptr); }

Tensor pool_prefix_max_w_with_arg(const Tensor& f, std::vector<std::size_t>& argmax) {
    return scan_max(f, 0, false, &argmax);
}
Tensor pool_prefix_max_h_with_arg(const Tensor& f, std::vector<std::size_t>& argmax) {
    return scan_max(f, 1, false, &argmax);
}
Tensor pool_suffix_max_w_with_arg(const Tensor& f, std::vector<std::size_t>& argmax) {
    return scan_max(f, 0, true, &argmax);
}
Tensor pool_suffix_max_h_with_arg(const Tensor& f, std::vector<std::size_t>& argmax) {
    return scan_max(f, 1, true, &argmax);
}

CornerHeadParams make_corner_head(int channels, Lcg64& rng) {
    CornerHeadParams p;
    p.pre_a = make_conv(channels, channels, 3, 1, 1, rng);
    p.pre_b = make_conv(channels, channels, 3, 1, 1, rng);
    p.post = make_conv(channels, channels, 3, 1, 1, rng);
    p.shortcut_a = make_conv(channels, channels, 1, 1, 0, rng);
    p.shortcut_b = make_conv(channels, channels, 1, 1, 0, rng);
    p.heat_a = make_conv(channels, channels, 3, 1, 1, rng);
    p.heat_b = make_conv(channels, channels, 3, 1, 1, rng);
    p.heat_final = make_conv(1, channels, 1, 1, 0, rng);
    p.off_a = make_conv(channels, channels, 3, 1, 1, rng);
    p.off_b = make_conv(channels, channels, 3, 1, 1, rng);
    p.off_final = make_conv(2, channels, 1, 1, 0, rng);
    return p;
}

CornerHeadParams make_passthrough_head(int channels, const std::vector<int>& heat_channels,
                                       int off_x_channel, int off_y_channel, double off_gain) {
    CornerHeadParams p;
    p.pre_a = identity_conv(channels, 3, 1);
    p.pre_b = identity_conv(channels, 3, 1);
    p.post = identity_conv(channels, 3, 1);
    p.shortcut_a = identity_conv(channels, 1, 0);
    p.shortcut_b = identity_conv(channels, 1, 0);
    p.heat_a = identity_conv(channels, 3, 1);
    p.heat_b = identity_conv(channels, 3, 1);
    p.off_a = identity_conv(channels, 3, 1);
    p.off_b = identity_conv(channels, 3, 1);

    p.heat_final.kernel = Tensor(1, channels, 1, 1);
    p.heat_final.bias = Tensor(1, 1, 1, 1);
    p.heat_final.stride = 1;
    p.heat_final.padding = 0;
    for (int c : heat_channels) p.heat_final.kernel.at(0, c, 0, 0) = 1.0;

    p.off_final.kernel = Tensor(2, channels, 1, 1);
    p.off_final.bias = Tensor(1, 1, 1, 2);
    p.off_final.stride = 1;
    p.off_final.padding = 0;
    p.off_final.kernel.at(0, off_x_channel, 0, 0) = off_gain;
    p.off_final.kernel.at(1, off_y_channel, 0, 0) = off_gain;
    return p;
}

namespace {

CornerHeadNodes::Conv register_conv(Tape& tape, const ConvParams& p) {
    return CornerHeadNodes::Conv{tape.parameter(p.kernel), tape.parameter(p.bias),
                                 p.stride, p.padding};
}

Tape::NodeId apply(Tape& tape, const CornerHeadNodes::Conv& conv, Tape::NodeId x) {
    return tape.conv2d(x, conv.kernel, conv.bias, conv.stride, conv.padding);
}

}  // namespace

CornerHeadNodes register_corner_head(Tape& tape, const CornerHeadParams& params) {
    CornerHeadNodes n;
    n.pre_a = register_conv(tape, params.pre_a);
    n.pre_b = register_conv(tape, params.pre_b);
    n.post = register_conv(tape, params.post);
    n.shortcut_a = register_conv(tape, params.shortcut_a);
    n.shortcut_b = register_conv(tape, params.shortcut_b);
    n.heat_a = register_conv(tape, params.heat_a);
    n.heat_b = register_conv(tape, params.heat_b);
    n.heat_final = register_conv(tape, params.heat_final);
    n.off_a = register_conv(tape, params.off_a);
    n.off_b = register_conv(tape, params.off_b);
    n.off_final = register_conv(tape, params.off_final);
    return n;
}

std::pair<Tape::NodeId, Tape::NodeId> corner_head(Tape& tape, Tape::NodeId f_a,
                                                  Tape::NodeId f_b,
                                                  const CornerHeadNodes& head,
                                                  CornerKind kind) {
    if (!tape.value(f_a).same_shape(tape.value(f_b))) {
        throw ShapeError("corner_head: input maps differ, " + tape.value(f_a).shape_str() +
                         " vs " + tape.value(f_b).shape_str());
    }
    const auto pa = tape.relu(apply(tape, head.pre_a, f_a));
    const auto pb = tape.relu(apply(tape, head.pre_b, f_b));
    const auto pooled_a =
        kind == CornerKind::BottomRight ? tape.prefix_max_w(pa) : tape.suffix_max_w(pa);
    const auto pooled_b =
        kind == CornerKind::BottomRight ? tape.prefix_max_h(pb) : tape.suffix_max_h(pb);
    const auto pooled = tape.add(pooled_a, pooled_b);
    const auto post = apply(tape, head.post, pooled);
    const auto residual = tape.relu(tape.add(tape.add(post, apply(tape, head.shortcut_a, f_a)),
                                             apply(tape, head.shortcut_b, f_b)));
    const auto heat = apply(tape, head.heat_final,
                            tape.relu(apply(tape, head.heat_b,
                                            tape.relu(apply(tape, head.heat_a, residual)))));
    const auto off = apply(tape, head.off_final,
                           tape.relu(apply(tape, head.off_b,
                                           tape.relu(apply(tape, head.off_a, residual)))));
    return {heat, off};
}

std::pair<Tensor, Tensor> corner_head(const Tensor& f_a, const Tensor& f_b,
                                      const CornerHeadParams& params, CornerKind kind) {
    Tape tape;
    const auto a = tape.constant(f_a);
    const auto b = tape.constant(f_b);
    const auto nodes = register_corner_head(tape, params);
    const auto [heat, off] = corner_head(tape, a, b, nodes, kind);
    return {tape.value(heat), tape.value(off)};
}

void visit_params(CornerHeadParams& p, const std::function<void(Tensor&)>& fn) {
    for (ConvParams* conv : {&p.pre_a, &p.pre_b, &p.post, &p.shortcut_a, &p.shortcut_b,
                             &p.heat_a, &p.heat_b, &p.heat_final, &p.off_a, &p.off_b,
                             &p.off_final}) {
        fn(conv->kernel);
        fn(conv->bias);
    }
}

}  // namespace cornertrack
