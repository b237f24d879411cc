#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cornertrack/bbox.hpp"
#include "cornertrack/tensor.hpp"

namespace cornertrack {

double iou(const BBox& a, const BBox& b);

// Per-sequence benchmark metrics. Threshold grids follow the OTB convention:
// success over 21 overlap thresholds 0..1 (step 0.05), precision over 51
// center-error thresholds 0..50px (step 1), normalized precision over 101
// thresholds 0..0.5 (step 0.005).
struct MetricReport {
    std::vector<double> success_curve;
    double success_auc = 0.0;
    std::vector<double> precision_curve;
    double precision_at_20 = 0.0;
    std::vector<double> norm_precision_curve;
    double norm_precision_auc = 0.0;
    double fps = 0.0;        // informational wall-clock rate
    int skipped_frames = 0;  // frames with degenerate ground truth
};

// Success counts frames with IoU strictly above each threshold; the final
// threshold (1.0) uses >= so perfect overlap scores a full curve. AUC is the
// curve mean.
std::pair<std::vector<double>, double> success_auc(const std::vector<double>& ious);

// Precision counts frames with center error <= threshold; reports the curve
// and its value at 20px.
std::pair<std::vector<double>, double> precision(const std::vector<double>& center_errors);

// Normalized precision over errors already divided per-axis by the
// ground-truth box size; AUC is the curve mean.
std::pair<std::vector<double>, double> normalized_precision(
    const std::vector<double>& normalized_errors);

// Full report from per-frame predictions against ground truth. Frames whose
// ground-truth box is degenerate are skipped and counted.
MetricReport evaluate_sequence(const std::vector<BBox>& groundtruth,
                               const std::vector<BBox>& predictions, double fps = 0.0);

struct SequenceData {
    std::string name;
    std::vector<Tensor> frames;
    std::vector<BBox> groundtruth;
};

// A tracking policy under benchmark: receives the sequence and the first
// ground-truth box, returns one box per frame (the first row echoes the
// init box by convention).
using TrackFn = std::function<std::vector<BBox>(const SequenceData&)>;

struct BenchmarkResult {
    std::vector<std::pair<std::string, MetricReport>> per_sequence;
    MetricReport aggregate;  // curve-wise and scalar mean over sequences
};

// One-pass protocol: init on frame 1, track the rest, evaluate, aggregate by
// mean over sequences. Sequences the tracker throws on are skipped and
// reported by name in `skipped`.
BenchmarkResult run_benchmark(const std::vector<SequenceData>& sequences,
                              const TrackFn& tracker,
                              std::vector<std::string>* skipped = nullptr);

// Curve-wise and scalar mean over reports (all must share curve lengths).
MetricReport aggregate_reports(const std::vector<MetricReport>& reports);

// report text file: "key value" scalars followed by one "name v0 v1 ..."
// line per curve.
void write_report(const std::string& path, const MetricReport& report);

// plot data: one "threshold value" pair per line, for each curve a file
// suffix (success/precision/norm_precision).
void write_plot_data(const std::string& path_prefix, const MetricReport& report);

}  // namespace cornertrack
