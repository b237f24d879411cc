#include "cornertrack/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cornertrack/errors.hpp"

namespace fs = std::filesystem;

namespace cornertrack {

Tensor load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("load_ppm: cannot open " + path);
    }
    std::string magic;
    in >> magic;
    if (magic != "P6") {
        throw InputError("load_ppm: " + path + " is not a binary PPM (P6)");
    }
    // Header tokens may be separated by whitespace and '#' comments.
    const auto next_int = [&in, &path]() {
        int value;
        while (true) {
            in >> std::ws;
            if (in.peek() == '#') {
                std::string comment;
                std::getline(in, comment);
                continue;
            }
            if (!(in >> value)) {
                throw InputError("load_ppm: truncated header in " + path);
            }
            return value;
        }
    };
    const int width = next_int();
    const int height = next_int();
    const int maxval = next_int();
    if (width < 1 || height < 1 || maxval != 255) {
        throw InputError("load_ppm: unsupported dimensions or depth in " + path);
    }
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height * 3);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw InputError("load_ppm: truncated pixel data in " + path);
    }
    Tensor image(1, 3, height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t base = (static_cast<std::size_t>(y) * width + x) * 3;
            for (int c = 0; c < 3; ++c) {
                image.at(0, c, y, x) = raw[base + c] / 255.0;
            }
        }
    }
    return image;
}

void save_ppm(const std::string& path, const Tensor& image) {
    if (image.empty() || image.channels() != 3 || image.batch() != 1) {
        throw InputError("save_ppm: expected a (1,3,H,W) image");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("save_ppm: cannot write " + path);
    }
    out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
    std::vector<unsigned char> raw(static_cast<std::size_t>(image.width()) * image.height() * 3);
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const std::size_t base = (static_cast<std::size_t>(y) * image.width() + x) * 3;
            for (int c = 0; c < 3; ++c) {
                const double v = std::clamp(image.at(0, c, y, x), 0.0, 1.0);
                raw[base + c] = static_cast<unsigned char>(std::lround(v * 255.0));
            }
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
}

std::vector<std::string> list_frames(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw InputError("list_frames: " + dir + " is not a directory");
    }
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
            paths.push_back(entry.path().string());
        }
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

std::vector<BBox> load_groundtruth(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("load_groundtruth: cannot open " + path);
    }
    std::vector<BBox> boxes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        for (char& ch : line) {
            if (ch == ',' || ch == '\t') ch = ' ';
        }
        std::istringstream fields(line);
        double x, y, w, h;
        if (!(fields >> x >> y >> w >> h)) {
            throw InputError("load_groundtruth: malformed line " + std::to_string(line_no) +
                             " in " + path);
        }
        boxes.push_back(BBox::from_xywh(x, y, w, h));
    }
    if (boxes.empty()) {
        throw InputError("load_groundtruth: no boxes in " + path);
    }
    return boxes;
}

void save_boxes(const std::string& path, const std::vector<BBox>& boxes) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("save_boxes: cannot write " + path);
    }
    char line[128];
    for (const BBox& b : boxes) {
        std::snprintf(line, sizeof(line), "%.4f,%.4f,%.4f,%.4f\n", b.x_tl, b.y_tl, b.width(),
                      b.height());
        out << line;
    }
}

void draw_box(Tensor& frame, const BBox& box, const std::array<double, 3>& color) {
    const int x0 = std::clamp(static_cast<int>(std::lround(box.x_tl)), 0, frame.width() - 1);
    const int y0 = std::clamp(static_cast<int>(std::lround(box.y_tl)), 0, frame.height() - 1);
    const int x1 = std::clamp(static_cast<int>(std::lround(box.x_br)) - 1, 0, frame.width() - 1);
    const int y1 = std::clamp(static_cast<int>(std::lround(box.y_br)) - 1, 0, frame.height() - 1);
    const auto paint = [&](int y, int x) {
        for (int c = 0; c < 3; ++c) frame.at(0, c, y, x) = color[c];
    };
    for (int t = 0; t < 2; ++t) {
        const int yt = std::min(y0 + t, frame.height() - 1);
        const int yb = std::max(y1 - t, 0);
        for (int x = x0; x <= x1; ++x) {
            paint(yt, x);
            paint(yb, x);
        }
        const int xl = std::min(x0 + t, frame.width() - 1);
        const int xr = std::max(x1 - t, 0);
        for (int y = y0; y <= y1; ++y) {
            paint(y, xl);
            paint(y, xr);
        }
    }
}

SequenceOnDisk open_sequence(const std::string& dir) {
    SequenceOnDisk seq;
    seq.name = fs::path(dir).filename().string();
    seq.frame_paths = list_frames(dir);
    if (seq.frame_paths.empty()) {
        throw InputError("open_sequence: no .ppm frames in " + dir);
    }
    const std::string gt_path = (fs::path(dir) / "groundtruth_rect.txt").string();
    seq.groundtruth = load_groundtruth(gt_path);
    if (seq.groundtruth.size() != seq.frame_paths.size()) {
        throw InputError("open_sequence: " + dir + " has " +
                         std::to_string(seq.frame_paths.size()) + " frames but " +
                         std::to_string(seq.groundtruth.size()) + " ground-truth lines");
    }
    return seq;
}

}  // namespace cornertrack
