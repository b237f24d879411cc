#include "cornertrack/cropping.hpp"

#include <cmath>
#include <vector>

#include "cornertrack/errors.hpp"
#include "cornertrack/selection.hpp"

namespace cornertrack {

std::pair<double, double> map_patch_to_frame(double x, double y, const CropMapping& m) {
    return {x / m.scale + m.offset_x, y / m.scale + m.offset_y};
}

std::pair<double, double> map_frame_to_patch(double x, double y, const CropMapping& m) {
    return {(x - m.offset_x) * m.scale, (y - m.offset_y) * m.scale};
}

namespace {

std::vector<double> channel_means(const Tensor& frame) {
    std::vector<double> means(frame.channels(), 0.0);
    const double norm =
        1.0 / (static_cast<double>(frame.batch()) * frame.height() * frame.width());
    for (int c = 0; c < frame.channels(); ++c) {
        double acc = 0.0;
        bool constant = true;
        const double first = frame.at(0, c, 0, 0);
        for (int b = 0; b < frame.batch(); ++b) {
            for (int y = 0; y < frame.height(); ++y) {
                for (int x = 0; x < frame.width(); ++x) {
                    const double v = frame.at(b, c, y, x);
                    acc += v;
                    constant = constant && v == first;
                }
            }
        }
        // A constant channel pads with its own value bit-exactly; summation
        // rounding would otherwise leak into constant-image crops.
        means[c] = constant ? first : acc * norm;
    }
    return means;
}

// Strip region in frame coordinates for one boundary of the box.
struct Strip {
    double x0, x1, y0, y1;
    bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

// Nearest-neighbor resample of the square frame region [origin, origin+side)
// into an out_size patch; `keep` (when non-null) masks which frame points
// belong to the boundary strip, everything else takes the channel mean.
Tensor resample_crop(const Tensor& frame, double origin_x, double origin_y, double side,
                     int out_size, const std::vector<double>& pad, const Strip* keep) {
    Tensor patch(1, frame.channels(), out_size, out_size);
    const double step = side / out_size;  // frame pixels per patch pixel
    for (int v = 0; v < out_size; ++v) {
        const double fy = origin_y + v * step;
        const int sy = static_cast<int>(std::lround(fy));
        for (int u = 0; u < out_size; ++u) {
            const double fx = origin_x + u * step;
            const int sx = static_cast<int>(std::lround(fx));
            const bool inside =
                sx >= 0 && sx < frame.width() && sy >= 0 && sy < frame.height();
            const bool kept = keep == nullptr || keep->contains(fx, fy);
            for (int c = 0; c < frame.channels(); ++c) {
                patch.at(0, c, v, u) =
                    (inside && kept) ? frame.at(0, c, sy, sx) : pad[c];
            }
        }
    }
    return patch;
}

}  // namespace

TemplateSet crop_boundary_templates(const Tensor& frame, const BBox& box, double ratio,
                                    int template_size) {
    if (frame.empty()) {
        throw InputError("crop_boundary_templates: empty frame");
    }
    if (ratio <= 0.0 || ratio > 1.0) {
        throw InputError("crop_boundary_templates: ratio must lie in (0,1]");
    }
    if (template_size < 1) {
        throw InputError("crop_boundary_templates: template_size must be positive");
    }
    const BBox clipped = clip_to_frame(box, frame.width(), frame.height());
    if (!clipped.valid()) {
        throw InputError("crop_boundary_templates: box has no area inside the frame");
    }
    const double w = clipped.width();
    const double h = clipped.height();
    const double side = scale_term(w, h);
    const double origin_x = clipped.center_x() - side / 2.0;
    const double origin_y = clipped.center_y() - side / 2.0;
    const std::vector<double> pad = channel_means(frame);

    const double half_h = ratio * h / 2.0;
    const double half_w = ratio * w / 2.0;
    const Strip top{clipped.x_tl, clipped.x_br, clipped.y_tl - half_h, clipped.y_tl + half_h};
    const Strip bottom{clipped.x_tl, clipped.x_br, clipped.y_br - half_h, clipped.y_br + half_h};
    const Strip left{clipped.x_tl - half_w, clipped.x_tl + half_w, clipped.y_tl, clipped.y_br};
    const Strip right{clipped.x_br - half_w, clipped.x_br + half_w, clipped.y_tl, clipped.y_br};

    TemplateSet set;
    set.z_top = resample_crop(frame, origin_x, origin_y, side, template_size, pad, &top);
    set.z_left = resample_crop(frame, origin_x, origin_y, side, template_size, pad, &left);
    set.z_bottom = resample_crop(frame, origin_x, origin_y, side, template_size, pad, &bottom);
    set.z_right = resample_crop(frame, origin_x, origin_y, side, template_size, pad, &right);
    return set;
}

std::pair<Tensor, CropMapping> crop_search_region(const Tensor& frame, const BBox& box,
                                                  int search_size) {
    if (frame.empty()) {
        throw InputError("crop_search_region: empty frame");
    }
    if (search_size < 1) {
        throw InputError("crop_search_region: search_size must be positive");
    }
    const BBox clipped = clip_to_frame(box, frame.width(), frame.height());
    if (!clipped.valid()) {
        throw InputError("crop_search_region: box has no area inside the frame");
    }
    const double side = 2.0 * scale_term(clipped.width(), clipped.height());
    CropMapping mapping;
    mapping.scale = search_size / side;
    mapping.offset_x = clipped.center_x() - side / 2.0;
    mapping.offset_y = clipped.center_y() - side / 2.0;
    const std::vector<double> pad = channel_means(frame);
    Tensor patch = resample_crop(frame, mapping.offset_x, mapping.offset_y, side, search_size,
                                 pad, nullptr);
    return {std::move(patch), mapping};
}

}  // namespace cornertrack
