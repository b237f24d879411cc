#include "cornertrack/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cornertrack/errors.hpp"
#include "cornertrack/serialize.hpp"

namespace cornertrack {

TrackerHyper Config::hyper() const {
    TrackerHyper h;
    h.eta = eta;
    h.gamma = gamma;
    h.lr = lr;
    h.n_corners = n_corners;
    h.t_wh = t_wh;
    h.d_iou = d_iou;
    return h;
}

TrackerOptions Config::tracker_options() const {
    TrackerOptions opt;
    opt.hyper = hyper();
    opt.template_size = template_size;
    opt.search_size = search_size;
    opt.nms_window = nms_window;
    return opt;
}

void validate(const Config& c) {
    const auto fail = [](const std::string& what) { throw InputError("config: " + what); };
    if (c.eta > 0.0) fail("eta must be <= 0 (penalty must suppress)");
    if (c.gamma < 0.0 || c.gamma > 1.0) fail("gamma must lie in [0,1]");
    if (c.lr <= 0.0 || c.lr > 1.0) fail("lr must lie in (0,1]");
    if (c.n_corners < 1) fail("n_corners must be >= 1");
    if (c.t_wh <= 0.0 || c.t_wh > 1.0) fail("t_wh must lie in (0,1]");
    if (c.d_iou <= 0.0 || c.d_iou >= 1.0) fail("d_iou must lie in (0,1)");
    if (c.alpha <= 0.0 || c.beta <= 0.0) fail("alpha and beta must be positive");
    if (c.lambda < 0.0) fail("lambda must be >= 0");
    if (c.template_size < 8) fail("template_size must be >= 8");
    if (c.search_size <= c.template_size) fail("search_size must exceed template_size");
    if (c.stride < 1) fail("stride must be >= 1");
    if (c.nms_window < 1 || c.nms_window % 2 == 0) fail("nms_window must be odd and positive");
    if (c.extractor != "toy" && c.extractor != "oracle") {
        fail("extractor must be 'toy' or 'oracle'");
    }
    if (c.adjust_width < 1) fail("adjust_width must be >= 1");
}

Config parse_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("config: " + std::string(e.what()));
    }
    Config c;
    const auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) {
            try {
                field = j.at(key).get<std::decay_t<decltype(field)>>();
            } catch (const nlohmann::json::exception&) {
                throw InputError("config: bad value type for '" + std::string(key) + "'");
            }
        }
    };
    get("eta", c.eta);
    get("gamma", c.gamma);
    get("lr", c.lr);
    get("n_corners", c.n_corners);
    get("t_wh", c.t_wh);
    get("d_iou", c.d_iou);
    get("alpha", c.alpha);
    get("beta", c.beta);
    get("lambda", c.lambda);
    get("template_size", c.template_size);
    get("search_size", c.search_size);
    get("stride", c.stride);
    get("nms_window", c.nms_window);
    get("extractor", c.extractor);
    get("params_file", c.params_file);
    get("adjust_width", c.adjust_width);
    get("seed", c.seed);

    static const char* known[] = {"eta",       "gamma",         "lr",          "n_corners",
                                  "t_wh",      "d_iou",         "alpha",       "beta",
                                  "lambda",    "template_size", "search_size", "stride",
                                  "nms_window", "extractor",    "params_file", "adjust_width",
                                  "seed"};
    for (const auto& [key, _] : j.items()) {
        bool found = false;
        for (const char* k : known) {
            if (key == k) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw InputError("config: unknown key '" + key + "'");
        }
    }
    validate(c);
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("config: cannot open " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string dump_config(const Config& c) {
    nlohmann::json j;
    j["eta"] = c.eta;
    j["gamma"] = c.gamma;
    j["lr"] = c.lr;
    j["n_corners"] = c.n_corners;
    j["t_wh"] = c.t_wh;
    j["d_iou"] = c.d_iou;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["lambda"] = c.lambda;
    j["template_size"] = c.template_size;
    j["search_size"] = c.search_size;
    j["stride"] = c.stride;
    j["nms_window"] = c.nms_window;
    j["extractor"] = c.extractor;
    j["params_file"] = c.params_file;
    j["adjust_width"] = c.adjust_width;
    j["seed"] = c.seed;
    return j.dump(2) + "\n";
}

std::shared_ptr<FeatureExtractor> make_extractor(const Config& c) {
    if (c.extractor == "oracle") {
        return std::make_shared<OracleExtractor>(c.template_size, c.search_size, c.stride);
    }
    return std::make_shared<ToyConvExtractor>(c.seed);
}

ModelParams make_model(const Config& c) {
    if (c.extractor == "oracle") {
        return make_oracle_model();
    }
    ModelParams model = make_random_model(64, c.adjust_width, c.seed);
    if (!c.params_file.empty()) {
        load_model(c.params_file, model);
    }
    return model;
}

Tracker make_tracker(const Config& c) {
    return Tracker(c.tracker_options(), make_extractor(c), make_model(c));
}

TrackFn make_track_fn(const Config& c) {
    return [c](const SequenceData& seq) {
        Tracker tracker = make_tracker(c);
        std::vector<BBox> boxes;
        boxes.reserve(seq.frames.size());
        tracker.init(seq.frames.at(0), seq.groundtruth.at(0));
        boxes.push_back(tracker.current_box());
        for (std::size_t t = 1; t < seq.frames.size(); ++t) {
            boxes.push_back(tracker.track(seq.frames[t]));
        }
        return boxes;
    };
}

}  // namespace cornertrack
