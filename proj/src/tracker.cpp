#include "cornertrack/tracker.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "cornertrack/correlation.hpp"
#include "cornertrack/errors.hpp"

namespace cornertrack {

ModelParams make_random_model(int in_channels, int width, std::uint64_t seed) {
    ModelParams model;
    for (int level = 0; level < 3; ++level) {
        Lcg64 rng(seed * 7919ULL + 131ULL * level + 17ULL);
        LevelModel& m = model.levels[level];
        m.adjust_template = make_conv(width, in_channels, 3, 1, 1, rng);
        m.adjust_search = make_conv(width, in_channels, 3, 1, 1, rng);
        m.tl_head = make_corner_head(width, rng);
        m.br_head = make_corner_head(width, rng);
    }
    return model;
}

ModelParams make_oracle_model() {
    ModelParams model;
    for (LevelModel& m : model.levels) {
        m.adjust_template = identity_conv(8, 1, 0);
        m.adjust_search = identity_conv(8, 1, 0);
        // Heatmap logits sum the edge-indicator channels of each corner;
        // offsets read the constant remainder channels, whose value is
        // quadrupled by the pooled sum plus the two shortcuts.
        m.tl_head = make_passthrough_head(8, {0, 1}, 4, 5, 0.25);
        m.br_head = make_passthrough_head(8, {2, 3}, 6, 7, 0.25);
    }
    return model;
}

void visit_params(ModelParams& model, const std::function<void(Tensor&)>& fn) {
    for (LevelModel& m : model.levels) {
        fn(m.adjust_template.kernel);
        fn(m.adjust_template.bias);
        fn(m.adjust_search.kernel);
        fn(m.adjust_search.bias);
        visit_params(m.tl_head, fn);
        visit_params(m.br_head, fn);
    }
}

BoundaryFeatures adjust_templates(const LevelModel& model, const BoundaryFeatures& raw) {
    BoundaryFeatures out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out[i] = relu(apply_conv(model.adjust_template, raw[i]));
    }
    return out;
}

HeatmapBundle predict_level(const LevelModel& model, const BoundaryFeatures& adjusted,
                            const Tensor& raw_search, int level, int stride) {
    FeatureLevel feats;
    feats.level = level;
    feats.stride = stride;
    feats.f_top = adjusted[0];
    feats.f_left = adjusted[1];
    feats.f_bottom = adjusted[2];
    feats.f_right = adjusted[3];
    feats.f_search = relu(apply_conv(model.adjust_search, raw_search));
    const CorrelationMaps maps = correlate_level(feats);

    const auto [tl_logits, tl_off] = corner_head(maps.f_t, maps.f_l, model.tl_head,
                                                 CornerKind::TopLeft);
    const auto [br_logits, br_off] = corner_head(maps.f_b, maps.f_r, model.br_head,
                                                 CornerKind::BottomRight);
    HeatmapBundle bundle;
    bundle.level = level;
    bundle.stride = stride;
    bundle.tl_heatmap = sigmoid(tl_logits);
    bundle.br_heatmap = sigmoid(br_logits);
    bundle.tl_offsets = tl_off;
    bundle.br_offsets = br_off;
    return bundle;
}

Tracker::Tracker(TrackerOptions options, std::shared_ptr<const FeatureExtractor> extractor,
                 ModelParams model)
    : opt_(options), extractor_(std::move(extractor)), model_(std::move(model)) {
    if (!extractor_) {
        throw ContractError("Tracker: null feature extractor");
    }
}

void Tracker::init(const Tensor& frame, const BBox& box) {
    const BBox clipped = clip_to_frame(box, frame.width(), frame.height());
    if (!clipped.valid()) {
        throw InputError("Tracker::init: box has no area inside the frame");
    }
    const TemplateSet set =
        crop_boundary_templates(frame, clipped, opt_.hyper.t_wh, opt_.template_size);
    const std::array<const Tensor*, 4> patches = set.all();
    for (std::size_t boundary = 0; boundary < patches.size(); ++boundary) {
        const auto features = extractor_->extract(*patches[boundary]);
        for (int level = 0; level < 3; ++level) {
            templates_[level][boundary] =
                relu(apply_conv(model_.levels[level].adjust_template, features[level]));
        }
    }
    box_ = clipped;
    initialized_ = true;
}

BBox Tracker::track(const Tensor& frame) {
    if (!initialized_) {
        throw ContractError("Tracker::track: init must run first");
    }
    // A drifting state may leave the frame entirely; pull the center back in
    // so the search crop always has content to look at.
    const double cx = std::clamp(box_.center_x(), 0.0, static_cast<double>(frame.width()));
    const double cy = std::clamp(box_.center_y(), 0.0, static_cast<double>(frame.height()));
    box_ = BBox::from_center(cx, cy, box_.width(), box_.height());
    auto [patch, mapping] = crop_search_region(frame, box_, opt_.search_size);
    mapping_ = mapping;
    const auto search_features = extractor_->extract(patch);
    const auto strides = extractor_->strides();

    std::vector<CornerSet> level_sets;
    level_sets.reserve(3);
    for (int level = 0; level < 3; ++level) {
        const HeatmapBundle bundle = predict_level(model_.levels[level], templates_[level],
                                                   search_features[level], level + 3,
                                                   strides[level]);
        level_sets.push_back(to_patch_coords(
            decode_level(bundle, opt_.hyper.n_corners, opt_.nms_window), bundle.stride));
    }

    const CornerSet fused = fuse_levels(level_sets, mapping);
    std::vector<double> penalized(fused.rows.size());
    for (std::size_t i = 0; i < fused.rows.size(); ++i) {
        penalized[i] = penalty(fused.rows[i], box_, opt_.hyper.eta) * fused.rows[i].score;
    }
    const std::vector<int> rank = motion_rank(fused, box_);
    const std::vector<double> final_scores = window_blend(penalized, rank, opt_.hyper.gamma);
    const Selection sel = select_and_smooth(fused, final_scores, box_, opt_.hyper.lr);
    box_ = sel.box;
    return box_;
}

}  // namespace cornertrack
