#include <doctest.h>

#include <cmath>

#include "cornertrack/errors.hpp"
#include "cornertrack/selection.hpp"
#include "test_helpers.hpp"

using namespace cornertrack;

namespace {

CornerSet patch_set(std::vector<CornerRow> rows) {
    CornerSet s;
    s.space = CoordSpace::Patch;
    s.rows = std::move(rows);
    return s;
}

}  // namespace

TEST_CASE("scale term hand values and symmetry") {
    CHECK(scale_term(0, 0) == 0.0);
    CHECK(scale_term(16, 16) == doctest::Approx(32.0).epsilon(1e-12));
    Lcg64 rng(61);
    for (int i = 0; i < 50; ++i) {
        const double w = rng.uniform(0.0, 100.0);
        const double h = rng.uniform(0.0, 100.0);
        CHECK(scale_term(w, h) == doctest::Approx(scale_term(h, w)).epsilon(1e-12));
    }
}

TEST_CASE("fuse_levels concatenates in level order and maps to frame space") {
    const CropMapping identity{1.0, 0.0, 0.0};
    const CornerSet a = patch_set({{1, 2, 3, 4, 0.5}});
    const CornerSet b = patch_set({{5, 6, 7, 8, 0.6}});
    const CornerSet c = patch_set({{9, 10, 11, 12, 0.7}});
    const CornerSet fused = fuse_levels({a, b, c}, identity);
    REQUIRE(fused.rows.size() == 3);
    CHECK(fused.space == CoordSpace::Frame);
    CHECK(fused.rows[0].score == 0.5);
    CHECK(fused.rows[1].score == 0.6);
    CHECK(fused.rows[2].score == 0.7);
    CHECK(fused.rows[0].x_tl == 1.0);

    const CropMapping affine{0.5, 10.0, 20.0};
    const CornerSet mapped = fuse_levels({patch_set({{4, 6, 4, 6, 1.0}})}, affine);
    CHECK(mapped.rows[0].x_tl == doctest::Approx(18.0).epsilon(1e-12));
    CHECK(mapped.rows[0].y_tl == doctest::Approx(32.0).epsilon(1e-12));

    CornerSet wrong = a;
    wrong.space = CoordSpace::Heatmap;
    CHECK_THROWS_AS(fuse_levels({wrong}, identity), ContractError);
}

TEST_CASE("penalty hand values") {
    const BBox previous{0, 0, 20, 20};
    const CornerRow same{0, 0, 20, 20, 1.0};
    CHECK(penalty(same, previous, -0.1) == doctest::Approx(std::exp(-0.1)).epsilon(1e-12));
    CHECK(penalty(same, previous, 0.0) == 1.0);

    const CornerRow doubled{0, 0, 40, 40, 1.0};
    CHECK(penalty(doubled, previous, -0.1) < penalty(same, previous, -0.1));

    const CornerRow degenerate{5, 5, 5, 9, 1.0};
    CHECK(penalty(degenerate, previous, -0.1) == 0.0);
}

TEST_CASE("penalty peaks exactly when ratio and scale are unchanged") {
    const BBox previous{0, 0, 24, 36};
    const double eta = -0.2;
    const double best = penalty(CornerRow{10, 10, 34, 46, 1.0}, previous, eta);
    CHECK(best == doctest::Approx(std::exp(eta)).epsilon(1e-12));
    Lcg64 rng(62);
    for (int i = 0; i < 200; ++i) {
        const double w = rng.uniform(4.0, 80.0);
        const double h = rng.uniform(4.0, 80.0);
        const CornerRow row{0, 0, w, h, 1.0};
        const double value = penalty(row, previous, eta);
        CHECK(value <= best + 1e-12);
        CHECK(value > 0.0);
        const bool unchanged = std::fabs(w - 24.0) < 1e-9 && std::fabs(h - 36.0) < 1e-9;
        if (!unchanged) {
            CHECK(value < best);
        }
    }
}

TEST_CASE("motion rank orders by total variation, largest first") {
    const BBox previous{0, 0, 10, 10};
    SUBCASE("unchanged candidate ranks last") {
        const CornerSet set = patch_set({{0, 0, 10, 10, 1.0}, {10, 0, 20, 10, 1.0}});
        const auto rank = motion_rank(set, previous);
        CHECK(rank == std::vector<int>{1, 0});
    }
    SUBCASE("hand-computed variations 7.5, 2.0, 11.0") {
        // Centers shifted by exactly 7.5, 2.0 and 11.0 with size unchanged.
        const CornerSet set = patch_set({
            {7.5, 0, 17.5, 10, 1.0},
            {2.0, 0, 12.0, 10, 1.0},
            {0, 11.0, 10, 21.0, 1.0},
        });
        const auto rank = motion_rank(set, previous);
        CHECK(rank == std::vector<int>{2, 0, 1});
    }
    SUBCASE("ties break by ascending row index") {
        const CornerSet set = patch_set({{1, 0, 11, 10, 1.0}, {0, 1, 10, 11, 1.0}});
        const auto rank = motion_rank(set, previous);
        CHECK(rank == std::vector<int>{0, 1});
    }
}

TEST_CASE("window blend limits and hann values") {
    // 45 rows (three levels of 15): u = 45 gives 1, u = 1 gives the documented ramp start.
    std::vector<double> penalized(45, 0.0);
    std::vector<int> rank(45);
    for (int i = 0; i < 45; ++i) rank[i] = i;

    const auto pure_window = window_blend(penalized, rank, 1.0);
    CHECK(pure_window[rank[44]] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pure_window[rank[0]] ==
          doctest::Approx(0.5 * (1.0 - std::cos(3.14159265358979323846 / 45.0)))
              .epsilon(1e-9));

    Lcg64 rng(63);
    std::vector<double> scores(45);
    for (double& v : scores) v = rng.next01();
    const auto no_window = window_blend(scores, rank, 0.0);
    CHECK(no_window == scores);

    const auto blended = window_blend(scores, rank, 0.3);
    CHECK(blended.size() == scores.size());
    for (const double v : blended) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("window blend with gamma 1 selects the least-moving candidate") {
    const BBox previous{0, 0, 10, 10};
    const CornerSet set = patch_set({
        {30, 30, 44, 44, 0.99},  // big motion, high raw score
        {0.5, 0, 10.5, 10, 0.10},  // barely moved, low raw score
    });
    std::vector<double> penalized(2);
    for (int i = 0; i < 2; ++i) {
        penalized[i] = penalty(set.rows[i], previous, -0.1) * set.rows[i].score;
    }
    const auto rank = motion_rank(set, previous);
    const auto final_scores = window_blend(penalized, rank, 1.0);
    const Selection sel = select_and_smooth(set, final_scores, previous, 0.3);
    CHECK(sel.row == 1);
}

TEST_CASE("argmax is invariant to positive scaling of raw scores at gamma 0") {
    Lcg64 rng(64);
    const BBox previous{0, 0, 30, 30};
    for (int round = 0; round < 20; ++round) {
        CornerSet set;
        set.space = CoordSpace::Frame;
        for (int i = 0; i < 45; ++i) {
            const double x = rng.uniform(0.0, 60.0);
            const double y = rng.uniform(0.0, 60.0);
            set.rows.push_back(CornerRow{x, y, x + rng.uniform(2.0, 50.0),
                                         y + rng.uniform(2.0, 50.0), rng.next01()});
        }
        const auto rank = motion_rank(set, previous);
        const auto score_with = [&](double kappa) {
            std::vector<double> penalized(set.rows.size());
            for (std::size_t i = 0; i < set.rows.size(); ++i) {
                penalized[i] =
                    penalty(set.rows[i], previous, -0.15) * set.rows[i].score * kappa;
            }
            const auto final_scores = window_blend(penalized, rank, 0.0);
            return select_and_smooth(set, final_scores, previous, 0.5).row;
        };
        CHECK(score_with(1.0) == score_with(7.3));
        CHECK(score_with(1.0) == score_with(0.02));
    }
}

TEST_CASE("select_and_smooth interpolates the size and keeps the picked center") {
    const BBox previous{0, 0, 20, 20};
    const CornerSet set = patch_set({{40, 40, 80, 80, 0.9}});

    const Selection full = select_and_smooth(set, {0.9}, previous, 1.0);
    CHECK(full.box.x_tl == doctest::Approx(40.0));
    CHECK(full.box.y_br == doctest::Approx(80.0));

    const Selection slow = select_and_smooth(set, {0.9}, previous, 1e-9);
    CHECK(slow.box.width() == doctest::Approx(20.0).epsilon(1e-6));
    CHECK(slow.box.center_x() == doctest::Approx(60.0));

    const Selection mid = select_and_smooth(set, {0.9}, previous, 0.3);
    CHECK(mid.box.width() == doctest::Approx(26.0).epsilon(1e-12));
    CHECK(mid.box.height() == doctest::Approx(26.0).epsilon(1e-12));
}

TEST_CASE("all-zero scores keep the previous box") {
    const BBox previous{5, 5, 25, 30};
    const CornerSet set = patch_set({{0, 0, 10, 10, 0.0}, {1, 1, 12, 12, 0.0}});
    const Selection sel = select_and_smooth(set, {0.0, 0.0}, previous, 0.3);
    CHECK(sel.row == -1);
    CHECK(sel.box.x_tl == previous.x_tl);
    CHECK(sel.box.y_br == previous.y_br);
}

TEST_CASE("select_and_smooth never emits a degenerate box") {
    Lcg64 rng(65);
    const BBox previous{0, 0, 16, 16};
    for (int round = 0; round < 100; ++round) {
        CornerSet set;
        set.space = CoordSpace::Frame;
        std::vector<double> scores;
        for (int i = 0; i < 10; ++i) {
            // Mix valid and inverted candidates.
            const double x0 = rng.uniform(0.0, 40.0);
            const double y0 = rng.uniform(0.0, 40.0);
            const double dx = rng.uniform(-10.0, 30.0);
            const double dy = rng.uniform(-10.0, 30.0);
            set.rows.push_back(CornerRow{x0, y0, x0 + dx, y0 + dy, rng.next01()});
            scores.push_back(rng.next01());
        }
        const Selection sel = select_and_smooth(set, scores, previous, 0.4);
        CHECK(sel.box.width() > 0.0);
        CHECK(sel.box.height() > 0.0);
    }
}

TEST_CASE("selection contract errors") {
    const BBox previous{0, 0, 10, 10};
    CornerSet empty;
    CHECK_THROWS_AS(motion_rank(empty, previous), ContractError);
    CHECK_THROWS_AS(select_and_smooth(empty, {}, previous, 0.3), ContractError);
    const CornerSet one = patch_set({{0, 0, 5, 5, 1.0}});
    CHECK_THROWS_AS(select_and_smooth(one, {0.5, 0.5}, previous, 0.3), ContractError);
    CHECK_THROWS_AS(select_and_smooth(one, {0.5}, previous, 0.0), ContractError);
    CHECK_THROWS_AS(window_blend({0.5}, {0, 1}, 0.5), ContractError);
    CHECK_THROWS_AS(window_blend({0.5}, {0}, 1.5), ContractError);
}
