#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>

#include "cornertrack/bbox.hpp"
#include "cornertrack/corner_pooling.hpp"
#include "cornertrack/cropping.hpp"
#include "cornertrack/decoding.hpp"
#include "cornertrack/extractor.hpp"
#include "cornertrack/selection.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

// Learnable state of one feature level: the adjustment convolutions applied
// behind the extractor (template side shared by the four boundaries) and the
// two corner heads.
struct LevelModel {
    ConvParams adjust_template;
    ConvParams adjust_search;
    CornerHeadParams tl_head;
    CornerHeadParams br_head;
};

struct ModelParams {
    std::array<LevelModel, 3> levels;
};

// Random init for training/toy inference. in_channels must match the
// extractor's feature width.
ModelParams make_random_model(int in_channels, int width, std::uint64_t seed);

// Identity wiring for the OracleExtractor's 8-channel geometry features.
ModelParams make_oracle_model();

// Every parameter tensor in a fixed order (level 3, 4, 5; within each level
// adjust_template, adjust_search, tl_head, br_head; kernel before bias).
void visit_params(ModelParams& model, const std::function<void(Tensor&)>& fn);

using BoundaryFeatures = std::array<Tensor, 4>;  // top, left, bottom, right

BoundaryFeatures adjust_templates(const LevelModel& model, const BoundaryFeatures& raw);

// Adjust the search features, correlate against the (already adjusted)
// template features, run both corner heads and apply the sigmoid.
HeatmapBundle predict_level(const LevelModel& model, const BoundaryFeatures& adjusted,
                            const Tensor& raw_search, int level, int stride);

struct TrackerOptions {
    TrackerHyper hyper;
    int template_size = 127;
    int search_size = 255;
    int nms_window = 3;
};

// One-shot tracking loop: templates are fixed at init, every later frame is
// cropped around the previous box, pushed through the level pipelines, and
// the fused corner candidates are scored and smoothed into the new box.
class Tracker {
public:
    Tracker(TrackerOptions options, std::shared_ptr<const FeatureExtractor> extractor,
            ModelParams model);

    void init(const Tensor& frame, const BBox& box);
    BBox track(const Tensor& frame);

    bool initialized() const { return initialized_; }
    const BBox& current_box() const { return box_; }
    const CropMapping& current_mapping() const { return mapping_; }

private:
    TrackerOptions opt_;
    std::shared_ptr<const FeatureExtractor> extractor_;
    ModelParams model_;
    bool initialized_ = false;
    BBox box_;
    CropMapping mapping_;
    std::array<BoundaryFeatures, 3> templates_;  // adjusted, per level
};

}  // namespace cornertrack
