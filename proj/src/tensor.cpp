#include "cornertrack/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "cornertrack/errors.hpp"

namespace cornertrack {

namespace {

void require_nonempty(const Tensor& t, const char* what) {
    if (t.empty()) {
        throw ShapeError(std::string(what) + ": empty tensor");
    }
}

}  // namespace

Tensor::Tensor(int batch, int channels, int height, int width, double fill)
    : n_(batch), c_(channels), h_(height), w_(width) {
    if (batch < 1 || channels < 1 || height < 1 || width < 1) {
        throw ShapeError("Tensor: all extents must be >= 1, got (" +
                         std::to_string(batch) + "," + std::to_string(channels) + "," +
                         std::to_string(height) + "," + std::to_string(width) + ")");
    }
    data_.assign(static_cast<std::size_t>(batch) * channels * height * width, fill);
}

Tensor Tensor::from_values(int batch, int channels, int height, int width,
                           std::vector<double> values) {
    Tensor t(batch, channels, height, width);
    if (values.size() != t.size()) {
        throw ShapeError("Tensor::from_values: got " + std::to_string(values.size()) +
                         " values for shape " + t.shape_str());
    }
    t.data_ = std::move(values);
    return t;
}

std::string Tensor::shape_str() const {
    return "(" + std::to_string(n_) + "," + std::to_string(c_) + "," +
           std::to_string(h_) + "," + std::to_string(w_) + ")";
}

Tensor conv2d(const Tensor& input, const Tensor& kernel,
              const std::vector<double>& bias, int stride, int padding) {
    require_nonempty(input, "conv2d input");
    require_nonempty(kernel, "conv2d kernel");
    if (stride < 1) {
        throw InputError("conv2d: stride must be positive, got " + std::to_string(stride));
    }
    if (padding < 0) {
        throw InputError("conv2d: padding must be non-negative, got " + std::to_string(padding));
    }
    if (kernel.channels() != input.channels()) {
        throw ShapeError("conv2d: kernel expects " + std::to_string(kernel.channels()) +
                         " input channels, input has " + std::to_string(input.channels()));
    }
    if (bias.size() != static_cast<std::size_t>(kernel.batch())) {
        throw ShapeError("conv2d: bias has " + std::to_string(bias.size()) +
                         " entries for " + std::to_string(kernel.batch()) + " output channels");
    }
    const int out_h = (input.height() + 2 * padding - kernel.height()) / stride + 1;
    const int out_w = (input.width() + 2 * padding - kernel.width()) / stride + 1;
    if (input.height() + 2 * padding < kernel.height() ||
        input.width() + 2 * padding < kernel.width()) {
        throw ShapeError("conv2d: kernel " + kernel.shape_str() +
                         " larger than padded input " + input.shape_str());
    }

    Tensor out(input.batch(), kernel.batch(), out_h, out_w);
    for (int b = 0; b < input.batch(); ++b) {
        for (int oc = 0; oc < kernel.batch(); ++oc) {
            for (int oy = 0; oy < out_h; ++oy) {
                for (int ox = 0; ox < out_w; ++ox) {
                    double acc = bias[oc];
                    const int y0 = oy * stride - padding;
                    const int x0 = ox * stride - padding;
                    for (int ic = 0; ic < input.channels(); ++ic) {
                        for (int ky = 0; ky < kernel.height(); ++ky) {
                            const int iy = y0 + ky;
                            if (iy < 0 || iy >= input.height()) continue;
                            for (int kx = 0; kx < kernel.width(); ++kx) {
                                const int ix = x0 + kx;
                                if (ix < 0 || ix >= input.width()) continue;
                                acc += input.at(b, ic, iy, ix) * kernel.at(oc, ic, ky, kx);
                            }
                        }
                    }
                    out.at(b, oc, oy, ox) = acc;
                }
            }
        }
    }
    return out;
}

Tensor relu(const Tensor& input) {
    require_nonempty(input, "relu");
    Tensor out = input;
    for (double& v : out.data()) v = std::max(0.0, v);
    return out;
}

Tensor sigmoid(const Tensor& input) {
    require_nonempty(input, "sigmoid");
    Tensor out = input;
    for (double& v : out.data()) {
        double s = 1.0 / (1.0 + std::exp(-v));
        // Saturated doubles would land exactly on 0 or 1 beyond |v| ~ 37;
        // keep the output inside the open interval.
        if (s >= 1.0) {
            s = std::nextafter(1.0, 0.0);
        } else if (s <= 0.0) {
            s = std::numeric_limits<double>::denorm_min();
        }
        v = s;
    }
    return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
    require_nonempty(a, "add");
    if (!a.same_shape(b)) {
        throw ShapeError("add: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    }
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require_nonempty(a, "mul");
    if (!a.same_shape(b)) {
        throw ShapeError("mul: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    }
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= b.data()[i];
    return out;
}

Tensor scale(const Tensor& a, double factor) {
    require_nonempty(a, "scale");
    Tensor out = a;
    for (double& v : out.data()) v *= factor;
    return out;
}

double sum(const Tensor& a) {
    require_nonempty(a, "sum");
    double acc = 0.0;
    for (double v : a.data()) acc += v;
    return acc;
}

Tensor window_max(const Tensor& input, int window) {
    require_nonempty(input, "window_max");
    if (window < 1 || window % 2 == 0) {
        throw InputError("window_max: window must be odd and positive, got " +
                         std::to_string(window));
    }
    if (window > input.height() || window > input.width()) {
        throw InputError("window_max: window " + std::to_string(window) +
                         " exceeds spatial extents of " + input.shape_str());
    }
    const int r = window / 2;
    Tensor out(input.batch(), input.channels(), input.height(), input.width());
    for (int b = 0; b < input.batch(); ++b) {
        for (int c = 0; c < input.channels(); ++c) {
            for (int y = 0; y < input.height(); ++y) {
                const int y0 = std::max(0, y - r);
                const int y1 = std::min(input.height() - 1, y + r);
                for (int x = 0; x < input.width(); ++x) {
                    const int x0 = std::max(0, x - r);
                    const int x1 = std::min(input.width() - 1, x + r);
                    double m = input.at(b, c, y0, x0);
                    for (int yy = y0; yy <= y1; ++yy) {
                        for (int xx = x0; xx <= x1; ++xx) {
                            m = std::max(m, input.at(b, c, yy, xx));
                        }
                    }
                    out.at(b, c, y, x) = m;
                }
            }
        }
    }
    return out;
}

}  // namespace cornertrack
