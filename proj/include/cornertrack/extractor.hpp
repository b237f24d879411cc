#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "cornertrack/params.hpp"
#include "cornertrack/synth.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

// Backbone stand-in: maps an image to three feature levels. Implementations
// must be deterministic (same input, bit-identical features).
class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;
    virtual std::array<Tensor, 3> extract(const Tensor& image) const = 0;
    virtual std::array<int, 3> strides() const = 0;
    virtual int feature_channels() const = 0;
};

// Three independent stacks of three stride-2 conv+relu layers
// (3 -> 16 -> 32 -> 64 channels), seeded deterministically; overall stride 8
// on every level.
class ToyConvExtractor : public FeatureExtractor {
public:
    explicit ToyConvExtractor(std::uint64_t seed);

    std::array<Tensor, 3> extract(const Tensor& image) const override;
    std::array<int, 3> strides() const override { return {8, 8, 8}; }
    int feature_channels() const override { return 64; }

private:
    std::array<std::vector<ConvParams>, 3> stacks_;
};

// Cheating extractor for end-to-end runs without training. It recognizes the
// synthetic target by its fill color and emits geometry features directly:
//
//   search-sized input -> 8-channel grid (ceil(size/stride) per side):
//     ch 0..3: indicator of the cells covering the top/left/bottom/right box
//              edges,
//     ch 4..7: constant maps holding the sub-stride remainders of the
//              top-left x/y and bottom-right x/y corner coordinates;
//   template-sized input -> all-ones 1x1 features, which make the
//              depth-wise correlation pass search features through.
//
// Paired with passthrough heads this decodes the box exactly up to the pixel
// detection, without any learned weights.
class OracleExtractor : public FeatureExtractor {
public:
    OracleExtractor(int template_size, int search_size, int stride,
                    std::array<double, 3> fill = kTargetFill, double tolerance = 0.15);

    std::array<Tensor, 3> extract(const Tensor& image) const override;
    std::array<int, 3> strides() const override { return {stride_, stride_, stride_}; }
    int feature_channels() const override { return 8; }

private:
    Tensor encode_search(const Tensor& image) const;

    int template_size_;
    int search_size_;
    int stride_;
    std::array<double, 3> fill_;
    double tolerance_;
};

}  // namespace cornertrack
