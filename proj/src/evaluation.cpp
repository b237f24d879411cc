#include "cornertrack/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "cornertrack/errors.hpp"

namespace cornertrack {

double iou(const BBox& a, const BBox& b) {
    const double ix = std::min(a.x_br, b.x_br) - std::max(a.x_tl, b.x_tl);
    const double iy = std::min(a.y_br, b.y_br) - std::max(a.y_tl, b.y_tl);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    const double uni = a.width() * a.height() + b.width() * b.height() - inter;
    return uni <= 0.0 ? 0.0 : inter / uni;
}

std::pair<std::vector<double>, double> success_auc(const std::vector<double>& ious) {
    if (ious.empty()) {
        throw InputError("success_auc: empty IoU list");
    }
    std::vector<double> curve(21);
    for (int i = 0; i <= 20; ++i) {
        const double threshold = i / 20.0;
        int hits = 0;
        for (const double v : ious) {
            // Strict inequality per convention; the top threshold admits
            // perfect overlap so a flawless run scores 1.0.
            if (v > threshold || (i == 20 && v >= 1.0)) ++hits;
        }
        curve[i] = static_cast<double>(hits) / ious.size();
    }
    const double auc = std::accumulate(curve.begin(), curve.end(), 0.0) / curve.size();
    return {curve, auc};
}

std::pair<std::vector<double>, double> precision(const std::vector<double>& center_errors) {
    if (center_errors.empty()) {
        throw InputError("precision: empty error list");
    }
    std::vector<double> curve(51);
    for (int i = 0; i <= 50; ++i) {
        const double threshold = static_cast<double>(i);
        int hits = 0;
        for (const double v : center_errors) {
            if (v <= threshold) ++hits;
        }
        curve[i] = static_cast<double>(hits) / center_errors.size();
    }
    return {curve, curve[20]};
}

std::pair<std::vector<double>, double> normalized_precision(
    const std::vector<double>& normalized_errors) {
    if (normalized_errors.empty()) {
        throw InputError("normalized_precision: empty error list");
    }
    std::vector<double> curve(101);
    for (int i = 0; i <= 100; ++i) {
        const double threshold = i / 200.0;
        int hits = 0;
        for (const double v : normalized_errors) {
            if (v <= threshold) ++hits;
        }
        curve[i] = static_cast<double>(hits) / normalized_errors.size();
    }
    const double auc = std::accumulate(curve.begin(), curve.end(), 0.0) / curve.size();
    return {curve, auc};
}

MetricReport evaluate_sequence(const std::vector<BBox>& groundtruth,
                               const std::vector<BBox>& predictions, double fps) {
    if (groundtruth.size() != predictions.size()) {
        throw InputError("evaluate_sequence: " + std::to_string(groundtruth.size()) +
                         " ground-truth boxes vs " + std::to_string(predictions.size()) +
                         " predictions");
    }
    std::vector<double> ious, center_errors, norm_errors;
    int skipped = 0;
    for (std::size_t i = 0; i < groundtruth.size(); ++i) {
        const BBox& gt = groundtruth[i];
        if (!gt.valid()) {
            ++skipped;
            continue;
        }
        const BBox& pred = predictions[i];
        ious.push_back(iou(gt, pred));
        const double dx = pred.center_x() - gt.center_x();
        const double dy = pred.center_y() - gt.center_y();
        center_errors.push_back(std::hypot(dx, dy));
        norm_errors.push_back(std::hypot(dx / gt.width(), dy / gt.height()));
    }
    if (ious.empty()) {
        throw InputError("evaluate_sequence: every frame had degenerate ground truth");
    }
    MetricReport report;
    std::tie(report.success_curve, report.success_auc) = success_auc(ious);
    std::tie(report.precision_curve, report.precision_at_20) = precision(center_errors);
    std::tie(report.norm_precision_curve, report.norm_precision_auc) =
        normalized_precision(norm_errors);
    report.fps = fps;
    report.skipped_frames = skipped;

    for (std::size_t i = 1; i < report.success_curve.size(); ++i) {
        if (report.success_curve[i] > report.success_curve[i - 1]) {
            throw NumericError("evaluate_sequence: success curve must be non-increasing");
        }
    }
    for (std::size_t i = 1; i < report.precision_curve.size(); ++i) {
        if (report.precision_curve[i] < report.precision_curve[i - 1]) {
            throw NumericError("evaluate_sequence: precision curve must be non-decreasing");
        }
    }
    for (std::size_t i = 1; i < report.norm_precision_curve.size(); ++i) {
        if (report.norm_precision_curve[i] < report.norm_precision_curve[i - 1]) {
            throw NumericError(
                "evaluate_sequence: normalized precision curve must be non-decreasing");
        }
    }
    return report;
}

BenchmarkResult run_benchmark(const std::vector<SequenceData>& sequences,
                              const TrackFn& tracker, std::vector<std::string>* skipped) {
    if (sequences.empty()) {
        throw InputError("run_benchmark: no sequences");
    }
    BenchmarkResult result;
    for (const SequenceData& seq : sequences) {
        if (seq.frames.empty() || seq.frames.size() != seq.groundtruth.size()) {
            if (skipped) skipped->push_back(seq.name);
            continue;
        }
        std::vector<BBox> boxes;
        try {
            boxes = tracker(seq);
        } catch (const Error&) {
            if (skipped) skipped->push_back(seq.name);
            continue;
        }
        if (boxes.size() != seq.frames.size()) {
            if (skipped) skipped->push_back(seq.name);
            continue;
        }
        result.per_sequence.emplace_back(seq.name, evaluate_sequence(seq.groundtruth, boxes));
    }
    if (result.per_sequence.empty()) {
        throw InputError("run_benchmark: every sequence was skipped");
    }
    std::vector<MetricReport> reports;
    reports.reserve(result.per_sequence.size());
    for (const auto& [name, report] : result.per_sequence) {
        (void)name;
        reports.push_back(report);
    }
    result.aggregate = aggregate_reports(reports);
    return result;
}

MetricReport aggregate_reports(const std::vector<MetricReport>& reports) {
    if (reports.empty()) {
        throw InputError("aggregate_reports: no reports");
    }
    MetricReport agg;
    const MetricReport& first = reports.front();
    agg.success_curve.assign(first.success_curve.size(), 0.0);
    agg.precision_curve.assign(first.precision_curve.size(), 0.0);
    agg.norm_precision_curve.assign(first.norm_precision_curve.size(), 0.0);
    for (const MetricReport& report : reports) {
        if (report.success_curve.size() != agg.success_curve.size() ||
            report.precision_curve.size() != agg.precision_curve.size() ||
            report.norm_precision_curve.size() != agg.norm_precision_curve.size()) {
            throw InputError("aggregate_reports: curve length mismatch");
        }
        agg.success_auc += report.success_auc;
        agg.precision_at_20 += report.precision_at_20;
        agg.norm_precision_auc += report.norm_precision_auc;
        agg.fps += report.fps;
        agg.skipped_frames += report.skipped_frames;
        for (std::size_t i = 0; i < agg.success_curve.size(); ++i) {
            agg.success_curve[i] += report.success_curve[i];
        }
        for (std::size_t i = 0; i < agg.precision_curve.size(); ++i) {
            agg.precision_curve[i] += report.precision_curve[i];
        }
        for (std::size_t i = 0; i < agg.norm_precision_curve.size(); ++i) {
            agg.norm_precision_curve[i] += report.norm_precision_curve[i];
        }
    }
    const double count = static_cast<double>(reports.size());
    agg.success_auc /= count;
    agg.precision_at_20 /= count;
    agg.norm_precision_auc /= count;
    agg.fps /= count;
    for (double& v : agg.success_curve) v /= count;
    for (double& v : agg.precision_curve) v /= count;
    for (double& v : agg.norm_precision_curve) v /= count;
    return agg;
}

namespace {

void write_curve(std::ofstream& out, const char* name, const std::vector<double>& curve) {
    out << name;
    char buf[32];
    for (const double v : curve) {
        std::snprintf(buf, sizeof(buf), " %.6f", v);
        out << buf;
    }
    out << "\n";
}

void write_pairs(const std::string& path, const std::vector<double>& curve, double step) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("write_plot_data: cannot write " + path);
    }
    char buf[64];
    for (std::size_t i = 0; i < curve.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f %.6f\n", i * step, curve[i]);
        out << buf;
    }
}

}  // namespace

void write_report(const std::string& path, const MetricReport& report) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("write_report: cannot write " + path);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", report.success_auc);
    out << "success_auc " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", report.precision_at_20);
    out << "precision_at_20 " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", report.norm_precision_auc);
    out << "norm_precision_auc " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.2f", report.fps);
    out << "fps " << buf << "\n";
    out << "skipped_frames " << report.skipped_frames << "\n";
    write_curve(out, "success_curve", report.success_curve);
    write_curve(out, "precision_curve", report.precision_curve);
    write_curve(out, "norm_precision_curve", report.norm_precision_curve);
}

void write_plot_data(const std::string& path_prefix, const MetricReport& report) {
    write_pairs(path_prefix + "_success.txt", report.success_curve, 1.0 / 20.0);
    write_pairs(path_prefix + "_precision.txt", report.precision_curve, 1.0);
    write_pairs(path_prefix + "_norm_precision.txt", report.norm_precision_curve, 1.0 / 200.0);
}

}  // namespace cornertrack
