#pragma once

#include <array>
#include <utility>

#include "cornertrack/bbox.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

// Affine patch <-> frame correspondence. scale is patch pixels per frame
// pixel; (offset_x, offset_y) is the frame position of patch pixel (0, 0).
struct CropMapping {
    double scale = 1.0;
    double offset_x = 0.0;
    double offset_y = 0.0;
};

std::pair<double, double> map_patch_to_frame(double x, double y, const CropMapping& m);
std::pair<double, double> map_frame_to_patch(double x, double y, const CropMapping& m);

// The four boundary template patches, all template_size x template_size.
struct TemplateSet {
    Tensor z_top, z_left, z_bottom, z_right;

    std::array<const Tensor*, 4> all() const { return {&z_top, &z_left, &z_bottom, &z_right}; }
};

// Square crop of side context_size(box) centered on the box center, keeping
// only one boundary strip per patch: for z_top the strip of height
// ratio*box_height centered on the top edge and spanning the box width, and
// likewise for the other three. Everything outside the strip (and outside
// the frame) takes the per-channel frame mean; the crop is nearest-neighbor
// resampled to template_size.
TemplateSet crop_boundary_templates(const Tensor& frame, const BBox& box, double ratio,
                                    int template_size);

// Square crop of side 2*context_size(box) centered on the box center,
// nearest-neighbor resampled to search_size, together with the mapping back
// to frame coordinates. Out-of-frame pixels take the per-channel frame mean.
std::pair<Tensor, CropMapping> crop_search_region(const Tensor& frame, const BBox& box,
                                                  int search_size);

}  // namespace cornertrack
