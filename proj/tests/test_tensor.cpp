#include <doctest.h>

#include "cornertrack/errors.hpp"
#include "cornertrack/tensor.hpp"
#include "test_helpers.hpp"

using namespace cornertrack;

TEST_CASE("tensor construction enforces extents and size") {
    CHECK_THROWS_AS(Tensor(0, 1, 1, 1), ShapeError);
    CHECK_THROWS_AS(Tensor(1, 1, -2, 1), ShapeError);
    CHECK_THROWS_AS(Tensor::from_values(1, 1, 2, 2, {1.0, 2.0}), ShapeError);
    const Tensor t(2, 3, 4, 5, 1.5);
    CHECK(t.size() == 120);
    CHECK(t.at(1, 2, 3, 4) == 1.5);
}

TEST_CASE("conv2d identity kernel reproduces the input") {
    const Tensor input = Tensor::from_values(1, 1, 3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    const Tensor kernel = Tensor::from_values(1, 1, 1, 1, {1.0});
    const Tensor out = conv2d(input, kernel, {0.0}, 1, 0);
    CHECK(out.same_shape(input));
    CHECK(out.data() == input.data());
}

TEST_CASE("a delta kernel with zero bias is the identity on any input") {
    Lcg64 rng(2);
    for (int round = 0; round < 10; ++round) {
        const int c = 1 + static_cast<int>(rng.below(4));
        const Tensor input = testutil::random_tensor(2, c, 1 + static_cast<int>(rng.below(6)),
                                                     1 + static_cast<int>(rng.below(6)), rng);
        Tensor kernel(c, c, 1, 1);
        for (int i = 0; i < c; ++i) kernel.at(i, i, 0, 0) = 1.0;
        const Tensor out = conv2d(input, kernel, std::vector<double>(c, 0.0), 1, 0);
        CHECK(out.data() == input.data());
    }
}

TEST_CASE("conv2d on zero input yields the bias everywhere") {
    const Tensor input(1, 2, 4, 4);
    Lcg64 rng(3);
    const Tensor kernel = testutil::random_tensor(3, 2, 3, 3, rng);
    const Tensor out = conv2d(input, kernel, {0.5, -1.0, 2.0}, 1, 1);
    for (int oc = 0; oc < 3; ++oc) {
        const double expected = oc == 0 ? 0.5 : (oc == 1 ? -1.0 : 2.0);
        for (int y = 0; y < out.height(); ++y) {
            for (int x = 0; x < out.width(); ++x) {
                CHECK(out.at(0, oc, y, x) == expected);
            }
        }
    }
}

TEST_CASE("conv2d hand-evaluated 2x2 example") {
    const Tensor input = Tensor::from_values(1, 1, 2, 2, {1, 2, 3, 4});
    const Tensor kernel = Tensor::from_values(1, 1, 2, 2, {1, 0, 0, 1});
    const Tensor out = conv2d(input, kernel, {0.0}, 1, 0);
    CHECK(out.height() == 1);
    CHECK(out.width() == 1);
    CHECK(out.at(0, 0, 0, 0) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("conv2d output extents follow the shape law") {
    Lcg64 rng(11);
    for (int round = 0; round < 30; ++round) {
        const int h = 1 + static_cast<int>(rng.below(10));
        const int w = 1 + static_cast<int>(rng.below(10));
        const int k = 1 + static_cast<int>(rng.below(3));
        const int stride = 1 + static_cast<int>(rng.below(2));
        const int pad = static_cast<int>(rng.below(2));
        if (h + 2 * pad < k || w + 2 * pad < k) continue;
        const Tensor input = testutil::random_tensor(1, 2, h, w, rng);
        const Tensor kernel = testutil::random_tensor(3, 2, k, k, rng);
        const Tensor out = conv2d(input, kernel, {0, 0, 0}, stride, pad);
        CHECK(out.height() == (h + 2 * pad - k) / stride + 1);
        CHECK(out.width() == (w + 2 * pad - k) / stride + 1);
        CHECK(out.channels() == 3);
    }
}

TEST_CASE("conv2d rejects mismatched shapes") {
    const Tensor input(1, 2, 4, 4);
    const Tensor kernel(1, 3, 3, 3);
    CHECK_THROWS_AS(conv2d(input, kernel, {0.0}, 1, 1), ShapeError);
    const Tensor ok_kernel(2, 2, 3, 3);
    CHECK_THROWS_AS(conv2d(input, ok_kernel, {0.0}, 1, 1), ShapeError);  // bias count
    CHECK_THROWS_AS(conv2d(input, Tensor(1, 2, 7, 7), {0.0}, 1, 0), ShapeError);
    CHECK_THROWS_AS(conv2d(input, ok_kernel, {0.0, 0.0}, 0, 1), InputError);
}

TEST_CASE("relu clamps negatives and is idempotent") {
    const Tensor input = Tensor::from_values(1, 1, 1, 3, {-1, 0, 2});
    const Tensor out = relu(input);
    CHECK(out.data() == std::vector<double>{0, 0, 2});

    Lcg64 rng(5);
    const Tensor x = testutil::random_tensor(2, 3, 4, 4, rng);
    CHECK(relu(relu(x)).data() == relu(x).data());
}

TEST_CASE("sigmoid midpoint and open range") {
    Tensor zero(1, 1, 1, 1);
    CHECK(sigmoid(zero).at(0, 0, 0, 0) == 0.5);
    Lcg64 rng(6);
    const Tensor x = testutil::random_tensor(1, 2, 5, 5, rng, -40.0, 40.0);
    const Tensor s = sigmoid(x);
    for (const double v : s.data()) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("add identity and shape error") {
    Lcg64 rng(7);
    const Tensor x = testutil::random_tensor(1, 2, 3, 3, rng);
    CHECK(add(x, Tensor(1, 2, 3, 3)).data() == x.data());
    CHECK_THROWS_AS(add(x, Tensor(1, 2, 3, 4)), ShapeError);
}

TEST_CASE("window_max constant and delta responses") {
    const Tensor constant(1, 1, 5, 5, 3.25);
    CHECK(window_max(constant, 3).data() == constant.data());

    Tensor delta(1, 1, 7, 7);
    delta.at(0, 0, 3, 3) = 1.0;
    const Tensor out = window_max(delta, 3);
    for (int y = 0; y < 7; ++y) {
        for (int x = 0; x < 7; ++x) {
            const bool in_block = std::abs(y - 3) <= 1 && std::abs(x - 3) <= 1;
            CHECK(out.at(0, 0, y, x) == (in_block ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("window_max sliding row example") {
    const Tensor row = Tensor::from_values(1, 1, 1, 5, {0, 2, 1, 0, 3});
    CHECK_THROWS_AS(window_max(row, 3), InputError);  // 3 exceeds height 1
    const Tensor wide = Tensor::from_values(1, 1, 3, 5, {0, 2, 1, 0, 3,  //
                                                         0, 2, 1, 0, 3,  //
                                                         0, 2, 1, 0, 3});
    const Tensor out = window_max(wide, 3);
    const std::vector<double> expected = {2, 2, 2, 3, 3};
    for (int x = 0; x < 5; ++x) {
        CHECK(out.at(0, 0, 1, x) == expected[x]);
    }
}

TEST_CASE("window_max parameter validation") {
    const Tensor x(1, 1, 4, 4);
    CHECK_THROWS_AS(window_max(x, 2), InputError);
    CHECK_THROWS_AS(window_max(x, 5), InputError);
    CHECK_THROWS_AS(window_max(x, -1), InputError);
}

TEST_CASE("window_max dominates the input and matches brute force") {
    Lcg64 rng(8);
    for (int round = 0; round < 5; ++round) {
        const Tensor x = testutil::random_tensor(1, 1, 16, 16, rng);
        const int window = 3 + 2 * static_cast<int>(rng.below(3));
        const Tensor out = window_max(x, window);
        const int r = window / 2;
        for (int y = 0; y < 16; ++y) {
            for (int xx = 0; xx < 16; ++xx) {
                double m = x.at(0, 0, y, xx);
                for (int dy = -r; dy <= r; ++dy) {
                    for (int dx = -r; dx <= r; ++dx) {
                        const int yy = y + dy, xr = xx + dx;
                        if (yy < 0 || yy >= 16 || xr < 0 || xr >= 16) continue;
                        m = std::max(m, x.at(0, 0, yy, xr));
                    }
                }
                CHECK(out.at(0, 0, y, xx) == m);
                CHECK(out.at(0, 0, y, xx) >= x.at(0, 0, y, xx));
            }
        }
    }
}
