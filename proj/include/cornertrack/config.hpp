#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "cornertrack/evaluation.hpp"
#include "cornertrack/extractor.hpp"
#include "cornertrack/selection.hpp"
#include "cornertrack/tracker.hpp"

namespace cornertrack {

// Flat JSON config. Defaults: t_wh 0.5, d 0.5, alpha 2, beta 4, lambda 1,
// 15 corners per level, 127/255 template/search sizes, stride 8.
struct Config {
    double eta = -0.1;
    double gamma = 0.3;
    double lr = 0.3;
    int n_corners = 15;
    double t_wh = 0.5;
    double d_iou = 0.5;
    double alpha = 2.0;
    double beta = 4.0;
    double lambda = 1.0;
    int template_size = 127;
    int search_size = 255;
    int stride = 8;
    int nms_window = 3;
    std::string extractor = "toy";  // "toy" or "oracle"
    std::string params_file;        // optional trained weights (toy only)
    int adjust_width = 64;
    std::uint64_t seed = 1;

    TrackerHyper hyper() const;
    TrackerOptions tracker_options() const;
};

// Rejects unknown keys and values outside each field's domain.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);
std::string dump_config(const Config& config);
void validate(const Config& config);

std::shared_ptr<FeatureExtractor> make_extractor(const Config& config);
ModelParams make_model(const Config& config);
Tracker make_tracker(const Config& config);

// Benchmark policy for run_benchmark: init on the first ground-truth box,
// track every later frame. The first output row echoes the init box.
TrackFn make_track_fn(const Config& config);

}  // namespace cornertrack
