#pragma once

#include <vector>

#include "cornertrack/bbox.hpp"
#include "cornertrack/cropping.hpp"
#include "cornertrack/decoding.hpp"

namespace cornertrack {

// Per-sequence tracking hyperparameters.
struct TrackerHyper {
    double eta = -0.1;    // penalty strength, <= 0
    double gamma = 0.3;   // window influence in [0,1]
    double lr = 0.3;      // size interpolation rate in (0,1]
    int n_corners = 15;   // candidates kept per level
    double t_wh = 0.5;    // boundary strip ratio
    double d_iou = 0.5;   // IoU bound for Gaussian radii
};

// Overall-scale measure sqrt((w+p)(h+p)) with p = (w+h)/2. Doubles as the
// context-size rule for cropping.
double scale_term(double w, double h);

// Concatenates the per-level corner sets (given in patch space, level order
// preserved) and maps every coordinate to frame space. Scores are untouched.
CornerSet fuse_levels(const std::vector<CornerSet>& sets, const CropMapping& mapping);

// exp(eta * max(r/r', r'/r) * max(s/s', s'/s)) comparing the candidate's
// aspect ratio and overall scale against the previous box. Candidates
// without positive area get 0 (maximal suppression).
double penalty(const CornerRow& row, const BBox& previous, double eta);

// Permutation of row indices ordered by variation versus the previous box
// (|dcx| + |dcy| + |dw| + |dh|), largest first; ties keep the smaller row
// index first. result[0] is the most-moved candidate.
std::vector<int> motion_rank(const CornerSet& set, const BBox& previous);

// Blends penalized scores with the rising half-cosine window: the candidate
// ranked u-th by motion (1-based, largest motion first) receives
// final[U(u)] = penalized[U(u)]*(1-gamma) + 0.5*(1-cos(pi*u/M))*gamma
// where M is the row count.
std::vector<double> window_blend(const std::vector<double>& penalized,
                                 const std::vector<int>& rank, double gamma);

// Picks the argmax-score row among candidates with positive extent; the new
// box takes the picked center while the size moves by lr toward the picked
// size. When no candidate has positive score and extent, the previous box is
// kept (lost-target fallback).
struct Selection {
    BBox box;
    int row = -1;  // -1 when the fallback fired
};
Selection select_and_smooth(const CornerSet& set, const std::vector<double>& final_scores,
                            const BBox& previous, double lr);

}  // namespace cornertrack
