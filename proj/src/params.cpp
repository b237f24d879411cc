#include "cornertrack/params.hpp"

#include <cmath>

#include "cornertrack/errors.hpp"

namespace cornertrack {

Tensor apply_conv(const ConvParams& p, const Tensor& input) {
    return conv2d(input, p.kernel, p.bias.data(), p.stride, p.padding);
}

ConvParams make_conv(int out_channels, int in_channels, int k, int stride,
                     int padding, Lcg64& rng) {
    ConvParams p;
    p.kernel = Tensor(out_channels, in_channels, k, k);
    p.bias = Tensor(1, 1, 1, out_channels);
    p.stride = stride;
    p.padding = padding;
    const double bound = std::sqrt(6.0 / (in_channels * k * k));
    for (double& v : p.kernel.data()) v = rng.uniform(-bound, bound);
    return p;
}

ConvParams identity_conv(int channels, int k, int padding) {
    if (k % 2 == 0) {
        throw InputError("identity_conv: kernel size must be odd");
    }
    ConvParams p;
    p.kernel = Tensor(channels, channels, k, k);
    p.bias = Tensor(1, 1, 1, channels);
    p.stride = 1;
    p.padding = padding;
    for (int c = 0; c < channels; ++c) {
        p.kernel.at(c, c, k / 2, k / 2) = 1.0;
    }
    return p;
}

}  // namespace cornertrack
