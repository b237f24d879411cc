#include "cornertrack/serialize.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <vector>

#include "cornertrack/errors.hpp"

namespace cornertrack {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'P', 'M'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "parameter files are little-endian; add byte swapping for this platform");

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& in, const std::string& path) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
        throw InputError("load_model: truncated file " + path);
    }
    return v;
}

}  // namespace

void save_model(const std::string& path, const ModelParams& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("save_model: cannot write " + path);
    }
    std::vector<const Tensor*> tensors;
    visit_params(const_cast<ModelParams&>(model),
                 [&tensors](Tensor& t) { tensors.push_back(&t); });
    out.write(kMagic, sizeof(kMagic));
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const Tensor* t : tensors) {
        write_u32(out, static_cast<std::uint32_t>(t->batch()));
        write_u32(out, static_cast<std::uint32_t>(t->channels()));
        write_u32(out, static_cast<std::uint32_t>(t->height()));
        write_u32(out, static_cast<std::uint32_t>(t->width()));
        out.write(reinterpret_cast<const char*>(t->data().data()),
                  static_cast<std::streamsize>(t->size() * sizeof(double)));
    }
    if (!out) {
        throw InputError("save_model: write failed for " + path);
    }
}

void load_model(const std::string& path, ModelParams& model) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("load_model: cannot open " + path);
    }
    char magic[4];
    if (!in.read(magic, sizeof(magic)) || std::string(magic, 4) != std::string(kMagic, 4)) {
        throw InputError("load_model: " + path + " is not a parameter file");
    }
    const std::uint32_t version = read_u32(in, path);
    if (version != kVersion) {
        throw InputError("load_model: unsupported version " + std::to_string(version));
    }
    std::vector<Tensor*> tensors;
    visit_params(model, [&tensors](Tensor& t) { tensors.push_back(&t); });
    const std::uint32_t count = read_u32(in, path);
    if (count != tensors.size()) {
        throw InputError("load_model: file holds " + std::to_string(count) +
                         " tensors, model expects " + std::to_string(tensors.size()));
    }
    for (Tensor* t : tensors) {
        const std::uint32_t n = read_u32(in, path);
        const std::uint32_t c = read_u32(in, path);
        const std::uint32_t h = read_u32(in, path);
        const std::uint32_t w = read_u32(in, path);
        if (n != static_cast<std::uint32_t>(t->batch()) ||
            c != static_cast<std::uint32_t>(t->channels()) ||
            h != static_cast<std::uint32_t>(t->height()) ||
            w != static_cast<std::uint32_t>(t->width())) {
            throw InputError("load_model: tensor shape mismatch in " + path +
                             " (file has (" + std::to_string(n) + "," + std::to_string(c) +
                             "," + std::to_string(h) + "," + std::to_string(w) +
                             "), model expects " + t->shape_str() + ")");
        }
        if (!in.read(reinterpret_cast<char*>(t->data().data()),
                     static_cast<std::streamsize>(t->size() * sizeof(double)))) {
            throw InputError("load_model: truncated tensor data in " + path);
        }
    }
}

}  // namespace cornertrack
