#include "cornertrack/extractor.hpp"

#include <algorithm>
#include <cmath>

#include "cornertrack/errors.hpp"
#include "cornertrack/targets_losses.hpp"

namespace cornertrack {

ToyConvExtractor::ToyConvExtractor(std::uint64_t seed) {
    for (int level = 0; level < 3; ++level) {
        Lcg64 rng(seed * 1000003ULL + level);
        std::vector<ConvParams>& stack = stacks_[level];
        stack.push_back(make_conv(16, 3, 3, 2, 1, rng));
        stack.push_back(make_conv(32, 16, 3, 2, 1, rng));
        stack.push_back(make_conv(64, 32, 3, 2, 1, rng));
    }
}

std::array<Tensor, 3> ToyConvExtractor::extract(const Tensor& image) const {
    if (image.empty() || image.channels() != 3) {
        throw InputError("ToyConvExtractor: expected a (1,3,H,W) image");
    }
    std::array<Tensor, 3> out;
    for (int level = 0; level < 3; ++level) {
        Tensor x = image;
        for (const ConvParams& conv : stacks_[level]) {
            x = relu(apply_conv(conv, x));
        }
        out[level] = std::move(x);
    }
    return out;
}

OracleExtractor::OracleExtractor(int template_size, int search_size, int stride,
                                 std::array<double, 3> fill, double tolerance)
    : template_size_(template_size),
      search_size_(search_size),
      stride_(stride),
      fill_(fill),
      tolerance_(tolerance) {
    if (template_size_ < 1 || search_size_ <= template_size_ || stride_ < 1) {
        throw InputError("OracleExtractor: need template < search and positive stride");
    }
}

std::array<Tensor, 3> OracleExtractor::extract(const Tensor& image) const {
    if (image.empty() || image.channels() != 3) {
        throw InputError("OracleExtractor: expected a (1,3,H,W) image");
    }
    Tensor features;
    if (image.height() == template_size_ && image.width() == template_size_) {
        features = Tensor(1, 8, 1, 1, 1.0);
    } else {
        features = encode_search(image);
    }
    return {features, features, features};
}

Tensor OracleExtractor::encode_search(const Tensor& image) const {
    const int grid = (image.width() + stride_ - 1) / stride_;
    Tensor features(1, 8, grid, grid);

    int min_x = image.width(), max_x = -1, min_y = image.height(), max_y = -1;
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            bool match = true;
            for (int c = 0; c < 3 && match; ++c) {
                match = std::fabs(image.at(0, c, y, x) - fill_[c]) <= tolerance_;
            }
            if (match) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
            }
        }
    }
    if (max_x < 0) {
        return features;  // target not visible: all-zero features
    }

    // Pixel x covers [x, x+1), so the box spans [min, max+1) per axis.
    const double x_tl = min_x, y_tl = min_y;
    const double x_br = max_x + 1.0, y_br = max_y + 1.0;
    const auto cell = [&](double v) {
        return std::clamp(static_cast<int>(std::floor(v / stride_)), 0, grid - 1);
    };
    const int cx0 = cell(x_tl), cy0 = cell(y_tl), cx1 = cell(x_br), cy1 = cell(y_br);

    for (int x = cx0; x <= cx1; ++x) {
        features.at(0, 0, cy0, x) = 1.0;  // top edge
        features.at(0, 2, cy1, x) = 1.0;  // bottom edge
    }
    for (int y = cy0; y <= cy1; ++y) {
        features.at(0, 1, y, cx0) = 1.0;  // left edge
        features.at(0, 3, y, cx1) = 1.0;  // right edge
    }
    const auto tl_off = offset_target(x_tl, y_tl, stride_);
    const auto br_off = offset_target(x_br, y_br, stride_);
    const double constants[4] = {tl_off[0], tl_off[1], br_off[0], br_off[1]};
    for (int c = 0; c < 4; ++c) {
        for (int y = 0; y < grid; ++y) {
            for (int x = 0; x < grid; ++x) {
                features.at(0, 4 + c, y, x) = constants[c];
            }
        }
    }
    return features;
}

}  // namespace cornertrack
