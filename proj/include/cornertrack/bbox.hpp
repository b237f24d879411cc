#pragma once

namespace cornertrack {

// Axis-aligned box in corner form, real-valued pixel coordinates.
// A pixel is the sample at its integer coordinate, so a box [x_tl, x_br)
// of width w covers the w integer columns x_tl .. x_br - 1.
struct BBox {
    double x_tl = 0.0;
    double y_tl = 0.0;
    double x_br = 0.0;
    double y_br = 0.0;

    double width() const { return x_br - x_tl; }
    double height() const { return y_br - y_tl; }
    double center_x() const { return 0.5 * (x_tl + x_br); }
    double center_y() const { return 0.5 * (y_tl + y_br); }
    bool valid() const { return x_br > x_tl && y_br > y_tl; }

    static BBox from_xywh(double x, double y, double w, double h) {
        return BBox{x, y, x + w, y + h};
    }
    static BBox from_center(double cx, double cy, double w, double h) {
        return BBox{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
    }
};

// Intersection clipped to [0, frame_w) x [0, frame_h); may be degenerate.
BBox clip_to_frame(const BBox& box, int frame_w, int frame_h);

}  // namespace cornertrack
