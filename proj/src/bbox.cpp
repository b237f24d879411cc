#include "cornertrack/bbox.hpp"

#include <algorithm>

namespace cornertrack {

BBox clip_to_frame(const BBox& box, int frame_w, int frame_h) {
    BBox out;
    out.x_tl = std::clamp(box.x_tl, 0.0, static_cast<double>(frame_w));
    out.y_tl = std::clamp(box.y_tl, 0.0, static_cast<double>(frame_h));
    out.x_br = std::clamp(box.x_br, 0.0, static_cast<double>(frame_w));
    out.y_br = std::clamp(box.y_br, 0.0, static_cast<double>(frame_h));
    return out;
}

}  // namespace cornertrack
