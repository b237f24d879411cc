#include "cornertrack/correlation.hpp"

#include "cornertrack/errors.hpp"

namespace cornertrack {

Tensor depthwise_correlate(const Tensor& templ, const Tensor& search) {
    if (templ.empty() || search.empty()) {
        throw ShapeError("depthwise_correlate: empty tensor");
    }
    if (templ.channels() != search.channels()) {
        throw ShapeError("depthwise_correlate: channel mismatch, template " +
                         templ.shape_str() + " vs search " + search.shape_str());
    }
    if (templ.batch() != search.batch()) {
        throw ShapeError("depthwise_correlate: batch mismatch");
    }
    if (templ.height() > search.height() || templ.width() > search.width()) {
        throw ShapeError("depthwise_correlate: template " + templ.shape_str() +
                         " larger than search " + search.shape_str());
    }
    const int out_h = search.height() - templ.height() + 1;
    const int out_w = search.width() - templ.width() + 1;
    Tensor out(search.batch(), search.channels(), out_h, out_w);
    for (int b = 0; b < search.batch(); ++b) {
        for (int c = 0; c < search.channels(); ++c) {
            for (int oy = 0; oy < out_h; ++oy) {
                for (int ox = 0; ox < out_w; ++ox) {
                    double acc = 0.0;
                    for (int ky = 0; ky < templ.height(); ++ky) {
                        for (int kx = 0; kx < templ.width(); ++kx) {
                            acc += search.at(b, c, oy + ky, ox + kx) * templ.at(b, c, ky, kx);
                        }
                    }
                    out.at(b, c, oy, ox) = acc;
                }
            }
        }
    }
    return out;
}

CorrelationMaps correlate_level(const FeatureLevel& level) {
    CorrelationMaps maps;
    maps.f_t = depthwise_correlate(level.f_top, level.f_search);
    maps.f_l = depthwise_correlate(level.f_left, level.f_search);
    maps.f_b = depthwise_correlate(level.f_bottom, level.f_search);
    maps.f_r = depthwise_correlate(level.f_right, level.f_search);
    return maps;
}

}  // namespace cornertrack
