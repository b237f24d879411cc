#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cornertrack {

// Dense rank-4 array (batch, channel, height, width), double precision,
// row-major with width fastest. Values are plain data: copying copies,
// there is no view/stride aliasing.
class Tensor {
public:
    // Default-constructed tensors are empty placeholders (all extents 0);
    // every kernel rejects them.
    Tensor() = default;

    Tensor(int batch, int channels, int height, int width, double fill = 0.0);

    static Tensor from_values(int batch, int channels, int height, int width,
                              std::vector<double> values);

    int batch() const { return n_; }
    int channels() const { return c_; }
    int height() const { return h_; }
    int width() const { return w_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& at(int b, int c, int y, int x) { return data_[index(b, c, y, x)]; }
    double at(int b, int c, int y, int x) const { return data_[index(b, c, y, x)]; }

    std::size_t index(int b, int c, int y, int x) const {
        return ((static_cast<std::size_t>(b) * c_ + c) * h_ + y) * w_ + x;
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Tensor& other) const {
        return n_ == other.n_ && c_ == other.c_ && h_ == other.h_ && w_ == other.w_;
    }

    std::string shape_str() const;

private:
    int n_ = 0, c_ = 0, h_ = 0, w_ = 0;
    std::vector<double> data_;
};

// Standard cross-correlation convolution (no kernel flip, zero padding).
// input:  (N, Cin, H, W)
// kernel: (Cout, Cin, kH, kW)
// bias:   Cout entries
// Output spatial extents: floor((in + 2*padding - k) / stride) + 1.
Tensor conv2d(const Tensor& input, const Tensor& kernel,
              const std::vector<double>& bias, int stride, int padding);

Tensor relu(const Tensor& input);
Tensor sigmoid(const Tensor& input);
Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // elementwise
Tensor scale(const Tensor& a, double factor);
double sum(const Tensor& a);

// Maximum over the centered window x window neighbourhood of each cell,
// per (batch, channel) plane. Out-of-bounds positions are ignored, which
// equals edge replication. window must be odd and at most min(H, W).
Tensor window_max(const Tensor& input, int window);

}  // namespace cornertrack
