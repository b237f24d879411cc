#pragma once

#include <vector>

#include "cornertrack/cropping.hpp"
#include "cornertrack/extractor.hpp"
#include "cornertrack/targets_losses.hpp"
#include "cornertrack/tracker.hpp"

namespace cornertrack {

// One training example: fixed boundary templates, one search patch and the
// target box in that patch's pixel coordinates.
struct TrainPair {
    TemplateSet templates;
    Tensor search_patch;
    BBox box_patch;
};

struct TrainOptions {
    int steps = 500;
    double step_size = 0.005;
    double momentum = 0.9;
    LossWeights weights;
    int stride = 8;
};

struct TrainResult {
    ModelParams model;
    // loss_trace[0] is the loss of the initial parameters, one entry per
    // step afterwards; length steps + 1.
    std::vector<double> loss_trace;
};

// Overfits the adjustment convolutions and corner heads on the given pairs
// with the extractor frozen, by momentum gradient descent on the combined
// heatmap + offset objective (mean over pairs, summed over levels and corner
// branches).
TrainResult overfit_train(const std::vector<TrainPair>& pairs,
                          const FeatureExtractor& extractor, ModelParams model,
                          const TrainOptions& options);

// Decoded top-1 corners of a trained model on one pair, in patch pixels.
// Used to judge training quality against the pair's ground truth.
CornerSet decode_pair(const ModelParams& model, const FeatureExtractor& extractor,
                      const TrainPair& pair, int stride, int nms_window = 3);

// Deterministic overfit corpus: synthetic rectangles of varying size,
// aspect and position, cropped into boundary templates and an off-center
// search patch. The crop center is shifted so the target's corner cells
// always land inside the correlation grid of the toy extractor.
std::vector<TrainPair> make_synthetic_pairs(int count, int template_size, int search_size,
                                            std::uint64_t seed);

}  // namespace cornertrack
