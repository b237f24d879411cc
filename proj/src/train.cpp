#include "cornertrack/train.hpp"

#include <cmath>
#include <utility>

#include "cornertrack/autodiff.hpp"
#include "cornertrack/errors.hpp"

namespace cornertrack {

namespace {

struct PairFeatures {
    std::array<BoundaryFeatures, 3> templates;  // raw extractor outputs per level
    std::array<Tensor, 3> search;
    std::array<BranchTargets, 3> targets;
};

struct TapedConv {
    Tape::NodeId kernel, bias;
    int stride, padding;
};

struct TapedLevel {
    TapedConv adjust_template, adjust_search;
    CornerHeadNodes tl_head, br_head;
};

TapedConv register_conv(Tape& tape, const ConvParams& p) {
    return TapedConv{tape.parameter(p.kernel), tape.parameter(p.bias), p.stride, p.padding};
}

Tape::NodeId apply(Tape& tape, const TapedConv& conv, Tape::NodeId x) {
    return tape.conv2d(x, conv.kernel, conv.bias, conv.stride, conv.padding);
}

// Registration must create parameter nodes in visit_params(ModelParams)
// order so gradients line up with the optimizer's parameter list.
std::array<TapedLevel, 3> register_model(Tape& tape, const ModelParams& model,
                                         std::vector<Tape::NodeId>& param_nodes) {
    std::array<TapedLevel, 3> taped;
    for (int level = 0; level < 3; ++level) {
        const int before = tape.node_count();
        const LevelModel& m = model.levels[level];
        taped[level].adjust_template = register_conv(tape, m.adjust_template);
        taped[level].adjust_search = register_conv(tape, m.adjust_search);
        taped[level].tl_head = register_corner_head(tape, m.tl_head);
        taped[level].br_head = register_corner_head(tape, m.br_head);
        for (int id = before; id < tape.node_count(); ++id) param_nodes.push_back(id);
    }
    return taped;
}

Tape::NodeId pair_loss(Tape& tape, const std::array<TapedLevel, 3>& taped,
                       const PairFeatures& feats, const TrainOptions& opt) {
    Tape::NodeId total = -1;
    for (int level = 0; level < 3; ++level) {
        const TapedLevel& tl = taped[level];
        std::array<Tape::NodeId, 4> templ;
        for (int b = 0; b < 4; ++b) {
            templ[b] = tape.relu(
                apply(tape, tl.adjust_template, tape.constant(feats.templates[level][b])));
        }
        const auto search =
            tape.relu(apply(tape, tl.adjust_search, tape.constant(feats.search[level])));
        const auto f_t = tape.depthwise_correlate(templ[0], search);
        const auto f_l = tape.depthwise_correlate(templ[1], search);
        const auto f_b = tape.depthwise_correlate(templ[2], search);
        const auto f_r = tape.depthwise_correlate(templ[3], search);

        const auto [tl_logits, tl_off] = corner_head(tape, f_t, f_l, tl.tl_head,
                                                     CornerKind::TopLeft);
        const auto [br_logits, br_off] = corner_head(tape, f_b, f_r, tl.br_head,
                                                     CornerKind::BottomRight);
        const BranchTargets& target = feats.targets[level];

        const auto tl_focal = tape.focal_loss_logits(tl_logits, target.tl.heatmap,
                                                     opt.weights.alpha, opt.weights.beta,
                                                     target.tl.k());
        const auto br_focal = tape.focal_loss_logits(br_logits, target.br.heatmap,
                                                     opt.weights.alpha, opt.weights.beta,
                                                     target.br.k());
        const auto tl_offset = tape.offset_loss(tl_off, target.tl.positives, target.tl.offsets);
        const auto br_offset = tape.offset_loss(br_off, target.br.positives, target.br.offsets);

        auto level_loss = tape.add(tape.add(tl_focal, br_focal),
                                   tape.scale(tape.add(tl_offset, br_offset),
                                              opt.weights.lambda));
        total = total < 0 ? level_loss : tape.add(total, level_loss);
    }
    return total;
}

PairFeatures extract_pair(const FeatureExtractor& extractor, const TrainPair& pair,
                          const TrainOptions& opt) {
    PairFeatures feats;
    const std::array<const Tensor*, 4> patches = pair.templates.all();
    for (int b = 0; b < 4; ++b) {
        const auto levels = extractor.extract(*patches[b]);
        for (int level = 0; level < 3; ++level) feats.templates[level][b] = levels[level];
    }
    feats.search = extractor.extract(pair.search_patch);
    for (int level = 0; level < 3; ++level) {
        // Adjust convs are stride-1 same-padding, so the correlation grid is
        // already determined by the raw feature shapes.
        const int grid_h =
            feats.search[level].height() - feats.templates[level][0].height() + 1;
        const int grid_w = feats.search[level].width() - feats.templates[level][0].width() + 1;
        if (grid_h < 1 || grid_w < 1) {
            throw InputError("overfit_train: template features larger than search features");
        }
        feats.targets[level] =
            make_target_maps(pair.box_patch, grid_h, grid_w, opt.stride, opt.weights.d);
    }
    return feats;
}

}  // namespace

TrainResult overfit_train(const std::vector<TrainPair>& pairs,
                          const FeatureExtractor& extractor, ModelParams model,
                          const TrainOptions& options) {
    if (pairs.empty()) {
        throw ContractError("overfit_train: at least one pair required");
    }
    if (options.steps < 0) {
        throw ContractError("overfit_train: steps must be >= 0");
    }

    std::vector<PairFeatures> features;
    features.reserve(pairs.size());
    for (const TrainPair& pair : pairs) {
        features.push_back(extract_pair(extractor, pair, options));
    }

    TrainResult result;
    result.model = std::move(model);
    SgdMomentum optimizer(options.step_size, options.momentum);

    const auto collect_params = [&result]() {
        std::vector<Tensor*> refs;
        visit_params(result.model, [&refs](Tensor& t) { refs.push_back(&t); });
        return refs;
    };

    const auto run_tape = [&](bool update) {
        Tape tape;
        std::vector<Tape::NodeId> param_nodes;
        const auto taped = register_model(tape, result.model, param_nodes);
        Tape::NodeId total = -1;
        for (const PairFeatures& feats : features) {
            const auto loss = pair_loss(tape, taped, feats, options);
            total = total < 0 ? loss : tape.add(total, loss);
        }
        total = tape.scale(total, 1.0 / static_cast<double>(features.size()));
        const double loss_value = tape.value(total).at(0, 0, 0, 0);
        if (!std::isfinite(loss_value)) {
            throw NumericError("overfit_train: loss diverged to a non-finite value");
        }
        if (update) {
            const auto grads = tape.backward(total);
            std::vector<Tensor*> refs = collect_params();
            std::vector<const Tensor*> grad_ptrs;
            grad_ptrs.reserve(param_nodes.size());
            for (const auto id : param_nodes) grad_ptrs.push_back(&grads.at(id));
            optimizer.step(refs, grad_ptrs);
        }
        return loss_value;
    };

    for (int step = 0; step < options.steps; ++step) {
        result.loss_trace.push_back(run_tape(true));
    }
    result.loss_trace.push_back(run_tape(false));
    return result;
}

std::vector<TrainPair> make_synthetic_pairs(int count, int template_size, int search_size,
                                            std::uint64_t seed) {
    if (count < 1) {
        throw ContractError("make_synthetic_pairs: count must be >= 1");
    }
    std::vector<TrainPair> pairs;
    pairs.reserve(count);
    for (int i = 0; i < count; ++i) {
        Lcg64 rng(seed * 65537ULL + static_cast<std::uint64_t>(i));
        const double base = 38.0 + 12.0 * rng.next01();
        const double aspect = 0.85 + 0.3 * rng.next01();
        const double w = base * std::sqrt(aspect);
        const double h = base / std::sqrt(aspect);
        const double cx = 74.0 + 12.0 * rng.next01();
        const double cy = 74.0 + 12.0 * rng.next01();

        SequenceSpec spec;
        spec.frame_w = 160;
        spec.frame_h = 160;
        spec.length = 1;
        spec.init_box = BBox::from_center(cx, cy, w, h);
        spec.noise_amp = 0.02;
        spec.seed = seed + 31ULL * i;
        const Sequence seq = generate(spec);
        const Tensor& frame = seq.frames[0];
        const BBox& box = seq.boxes[0];

        TrainPair pair;
        pair.templates = crop_boundary_templates(frame, box, 0.5, template_size);
        // Shift the crop down-right so the box sits up-left in the patch,
        // keeping both corner cells inside the stride-8 correlation grid.
        const double dx = 4.0 + 8.0 * rng.next01();
        const double dy = 4.0 + 8.0 * rng.next01();
        const BBox crop_box = BBox::from_center(box.center_x() + dx, box.center_y() + dy,
                                                box.width(), box.height());
        auto [patch, mapping] = crop_search_region(frame, crop_box, search_size);
        pair.search_patch = std::move(patch);
        std::tie(pair.box_patch.x_tl, pair.box_patch.y_tl) =
            map_frame_to_patch(box.x_tl, box.y_tl, mapping);
        std::tie(pair.box_patch.x_br, pair.box_patch.y_br) =
            map_frame_to_patch(box.x_br, box.y_br, mapping);
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

CornerSet decode_pair(const ModelParams& model, const FeatureExtractor& extractor,
                      const TrainPair& pair, int stride, int nms_window) {
    const auto search_features = extractor.extract(pair.search_patch);
    const std::array<const Tensor*, 4> patches = pair.templates.all();
    std::array<BoundaryFeatures, 3> raw;
    for (int b = 0; b < 4; ++b) {
        const auto levels = extractor.extract(*patches[b]);
        for (int level = 0; level < 3; ++level) raw[level][b] = levels[level];
    }
    // Decode each level's best pair; fuse by keeping the highest score.
    CornerSet best;
    best.space = CoordSpace::Patch;
    for (int level = 0; level < 3; ++level) {
        const BoundaryFeatures adjusted = adjust_templates(model.levels[level], raw[level]);
        const HeatmapBundle bundle = predict_level(model.levels[level], adjusted,
                                                   search_features[level], level + 3, stride);
        const CornerSet set = to_patch_coords(decode_level(bundle, 1, nms_window), stride);
        if (best.rows.empty() || (!set.rows.empty() && set.rows[0].score > best.rows[0].score)) {
            best.rows = set.rows;
        }
    }
    return best;
}

}  // namespace cornertrack
