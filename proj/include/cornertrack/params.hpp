#pragma once

#include <vector>

#include "cornertrack/rng.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

// One convolution layer's learnable state. Bias is kept as a (1,1,1,Cout)
// tensor so the training loop can treat every parameter uniformly.
struct ConvParams {
    Tensor kernel;  // (out_channels, in_channels, kh, kw)
    Tensor bias;    // (1, 1, 1, out_channels)
    int stride = 1;
    int padding = 1;
};

Tensor apply_conv(const ConvParams& p, const Tensor& input);

// Kaiming-uniform init: kernel entries in [-b, b] with b = sqrt(6 / fan_in),
// bias zero.
ConvParams make_conv(int out_channels, int in_channels, int k, int stride,
                     int padding, Lcg64& rng);

// Center-tap delta kernel: maps each channel to itself unchanged. Requires
// out_channels == in_channels.
ConvParams identity_conv(int channels, int k, int padding);

}  // namespace cornertrack
