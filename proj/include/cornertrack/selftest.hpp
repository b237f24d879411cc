#pragma once

#include <string>
#include <vector>

namespace cornertrack {

struct SelfTestResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Deterministic numeric health checks: the directional poolings against
// brute-force segment maxima, finite-difference gradient checks of the
// kernels and losses, the Gaussian-radius closed form against exhaustive
// search, and the heatmap decode round trip.
std::vector<SelfTestResult> run_selftest();

}  // namespace cornertrack
