#pragma once

#include <array>
#include <string>
#include <vector>

#include "cornertrack/bbox.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

// Frames are binary PPM (P6), 8-bit RGB. Loading normalizes to [0,1];
// saving rounds value*255 and clamps.
Tensor load_ppm(const std::string& path);
void save_ppm(const std::string& path, const Tensor& image);

// Sorted list of the *.ppm files in a sequence directory.
std::vector<std::string> list_frames(const std::string& dir);

// One "x,y,w,h" line per frame; comma, tab or space separated.
std::vector<BBox> load_groundtruth(const std::string& path);
void save_boxes(const std::string& path, const std::vector<BBox>& boxes);

// 2px box outline burned into the frame.
void draw_box(Tensor& frame, const BBox& box, const std::array<double, 3>& color);

struct SequenceOnDisk {
    std::vector<std::string> frame_paths;
    std::vector<BBox> groundtruth;
    std::string name;
};

// Reads the layout produced by the synth command: numbered .ppm frames plus
// groundtruth_rect.txt. Frame count and line count must agree.
SequenceOnDisk open_sequence(const std::string& dir);

}  // namespace cornertrack
