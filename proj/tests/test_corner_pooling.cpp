#include <doctest.h>

#include "cornertrack/corner_pooling.hpp"
#include "cornertrack/errors.hpp"
#include "test_helpers.hpp"

using namespace cornertrack;

TEST_CASE("prefix max along width on hand rows") {
    const Tensor row = Tensor::from_values(1, 1, 1, 4, {2, 1, 3, 0});
    CHECK(pool_prefix_max_w(row).data() == std::vector<double>{2, 2, 3, 3});
    CHECK(pool_prefix_max_w(Tensor(1, 1, 2, 3)).data() == std::vector<double>(6, 0.0));
    const Tensor falling = Tensor::from_values(1, 1, 1, 3, {5, 4, 3});
    CHECK(pool_prefix_max_w(falling).data() == std::vector<double>{5, 5, 5});
}

TEST_CASE("prefix max along height on hand columns") {
    const Tensor column = Tensor::from_values(1, 1, 3, 1, {1, 0, 2});
    CHECK(pool_prefix_max_h(column).data() == std::vector<double>{1, 1, 2});
    const Tensor constant(1, 1, 4, 2, 7.0);
    CHECK(pool_prefix_max_h(constant).data() == constant.data());
    const Tensor single_row = Tensor::from_values(1, 1, 1, 3, {3, 1, 2});
    CHECK(pool_prefix_max_h(single_row).data() == single_row.data());
}

TEST_CASE("suffix max along width on hand rows") {
    const Tensor row = Tensor::from_values(1, 1, 1, 4, {2, 1, 3, 0});
    CHECK(pool_suffix_max_w(row).data() == std::vector<double>{3, 3, 3, 0});
    CHECK(pool_suffix_max_w(Tensor(1, 1, 1, 4)).data() == std::vector<double>(4, 0.0));
}

TEST_CASE("suffix pooling equals reversed prefix pooling") {
    Lcg64 rng(10);
    const Tensor f = testutil::random_tensor(2, 3, 7, 9, rng);
    Tensor reversed_w(2, 3, 7, 9);
    for (int b = 0; b < 2; ++b) {
        for (int c = 0; c < 3; ++c) {
            for (int y = 0; y < 7; ++y) {
                for (int x = 0; x < 9; ++x) {
                    reversed_w.at(b, c, y, x) = f.at(b, c, y, 8 - x);
                }
            }
        }
    }
    const Tensor lhs = pool_suffix_max_w(f);
    const Tensor rhs = pool_prefix_max_w(reversed_w);
    for (int b = 0; b < 2; ++b) {
        for (int c = 0; c < 3; ++c) {
            for (int y = 0; y < 7; ++y) {
                for (int x = 0; x < 9; ++x) {
                    CHECK(lhs.at(b, c, y, x) == rhs.at(b, c, y, 8 - x));
                }
            }
        }
    }
}

TEST_CASE("directional pooling equals brute-force segment maxima") {
    Lcg64 rng(11);
    for (int round = 0; round < 20; ++round) {
        const int h = 1 + static_cast<int>(rng.below(32));
        const int w = 1 + static_cast<int>(rng.below(32));
        const Tensor f = testutil::random_tensor(1, 2, h, w, rng);
        const Tensor results[4] = {pool_prefix_max_w(f), pool_prefix_max_h(f),
                                   pool_suffix_max_w(f), pool_suffix_max_h(f)};
        const int axes[4] = {0, 1, 0, 1};
        const bool fwd[4] = {true, true, false, false};
        for (int dir = 0; dir < 4; ++dir) {
            for (int c = 0; c < 2; ++c) {
                for (int y = 0; y < h; ++y) {
                    for (int x = 0; x < w; ++x) {
                        CHECK(results[dir].at(0, c, y, x) ==
                              testutil::segment_max(f, 0, c, y, x, axes[dir], fwd[dir]));
                    }
                }
            }
        }
    }
}

TEST_CASE("the brute-force oracle catches an injected off-by-one") {
    // Negative control for the oracle itself: a pooling double whose scan
    // lags one cell must disagree with the segment maxima somewhere.
    Lcg64 rng(16);
    const Tensor f = testutil::distinct_tensor(1, 1, 6, 8, rng);
    Tensor corrupted = f;
    for (int y = 0; y < 6; ++y) {
        double running = f.at(0, 0, y, 0);
        for (int x = 0; x < 8; ++x) {
            corrupted.at(0, 0, y, x) = running;  // max over k <= x-1, lagging
            running = std::max(running, f.at(0, 0, y, x));
        }
    }
    bool caught = false;
    for (int y = 0; y < 6 && !caught; ++y) {
        for (int x = 0; x < 8 && !caught; ++x) {
            caught = corrupted.at(0, 0, y, x) != testutil::segment_max(f, 0, 0, y, x, 0, true);
        }
    }
    CHECK(caught);
}

TEST_CASE("pooling is idempotent and monotone along the scan") {
    Lcg64 rng(12);
    const Tensor f = testutil::random_tensor(1, 2, 8, 8, rng);
    const Tensor once = pool_prefix_max_w(f);
    CHECK(pool_prefix_max_w(once).data() == once.data());
    const Tensor once_h = pool_suffix_max_h(f);
    CHECK(pool_suffix_max_h(once_h).data() == once_h.data());
    for (int c = 0; c < 2; ++c) {
        for (int y = 0; y < 8; ++y) {
            for (int x = 1; x < 8; ++x) {
                CHECK(once.at(0, c, y, x) >= once.at(0, c, y, x - 1));
            }
        }
    }
}

namespace {

CornerHeadParams zero_head(int channels) {
    CornerHeadParams p = make_passthrough_head(channels, {0}, 0, 0, 1.0);
    visit_params(p, [](Tensor& t) {
        for (double& v : t.data()) v = 0.0;
    });
    return p;
}

}  // namespace

TEST_CASE("corner head with zero parameters emits zeros") {
    Lcg64 rng(13);
    const Tensor f_a = testutil::random_tensor(1, 2, 5, 5, rng);
    const Tensor f_b = testutil::random_tensor(1, 2, 5, 5, rng);
    const auto [heat, off] = corner_head(f_a, f_b, zero_head(2), CornerKind::TopLeft);
    for (const double v : heat.data()) CHECK(v == 0.0);
    for (const double v : off.data()) CHECK(v == 0.0);
    CHECK(heat.channels() == 1);
    CHECK(off.channels() == 2);
}

TEST_CASE("identity-configured corner head reduces to the pooled residual") {
    Lcg64 rng(14);
    // Non-negative inputs keep every relu transparent.
    const Tensor f_a = testutil::random_tensor(1, 1, 6, 6, rng, 0.0, 1.0);
    const Tensor f_b = testutil::random_tensor(1, 1, 6, 6, rng, 0.0, 1.0);
    const CornerHeadParams head = make_passthrough_head(1, {0}, 0, 0, 1.0);

    SUBCASE("top-left uses the suffix poolings") {
        const auto [heat, off] = corner_head(f_a, f_b, head, CornerKind::TopLeft);
        const Tensor expected =
            relu(add(add(pool_suffix_max_w(f_a), pool_suffix_max_h(f_b)), add(f_a, f_b)));
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(heat.data()[i] == doctest::Approx(expected.data()[i]).epsilon(1e-12));
            CHECK(off.data()[i] == doctest::Approx(expected.data()[i]).epsilon(1e-12));
        }
    }
    SUBCASE("bottom-right uses the prefix poolings") {
        const auto [heat, _] = corner_head(f_a, f_b, head, CornerKind::BottomRight);
        const Tensor expected =
            relu(add(add(pool_prefix_max_w(f_a), pool_prefix_max_h(f_b)), add(f_a, f_b)));
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(heat.data()[i] == doctest::Approx(expected.data()[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("corner head is deterministic across runs") {
    Lcg64 rng(15);
    const Tensor f_a = testutil::random_tensor(1, 4, 6, 6, rng);
    const Tensor f_b = testutil::random_tensor(1, 4, 6, 6, rng);
    Lcg64 param_rng(99);
    const CornerHeadParams head = make_corner_head(4, param_rng);
    const auto first = corner_head(f_a, f_b, head, CornerKind::BottomRight);
    const auto second = corner_head(f_a, f_b, head, CornerKind::BottomRight);
    CHECK(first.first.data() == second.first.data());
    CHECK(first.second.data() == second.second.data());
}

TEST_CASE("corner head rejects mismatched inputs") {
    const CornerHeadParams head = make_passthrough_head(1, {0}, 0, 0, 1.0);
    CHECK_THROWS_AS(corner_head(Tensor(1, 1, 4, 4), Tensor(1, 1, 5, 4), head,
                                CornerKind::TopLeft),
                    ShapeError);
}
