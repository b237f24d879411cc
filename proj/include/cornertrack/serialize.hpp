#pragma once

#include <string>

#include "cornertrack/tracker.hpp"

namespace cornertrack {

// Model parameter file: little-endian binary, header "CTPM", u32 version,
// u32 tensor count, then per tensor four u32 extents followed by the raw
// doubles. Tensors appear in visit_params(ModelParams) order.
void save_model(const std::string& path, const ModelParams& model);

// Fills an already-constructed model (which fixes the architecture); every
// stored shape must match the corresponding tensor.
void load_model(const std::string& path, ModelParams& model);

}  // namespace cornertrack
