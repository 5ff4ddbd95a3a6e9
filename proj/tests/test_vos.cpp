#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>

#include "vosedge/eval.hpp"
#include "vosedge/image.hpp"
#include "vosedge/vos.hpp"
#include "support.hpp"

using namespace vosedge;

namespace {

constexpr double kPi = 3.14159265358979323846;

Window3x3 constant_window(PixelVector p) {
    Window3x3 w;
    w.cells.fill(p);
    return w;
}

// Eight black cells with a single white outlier at the center.
Window3x3 outlier_window() {
    Window3x3 w = constant_window({0, 0, 0});
    w.cells[4] = {255, 255, 255};
    return w;
}

GradientField uniform_direction_field(const ScalarPlane& magnitude, double angle) {
    GradientField g{magnitude, ScalarPlane(magnitude.width(), magnitude.height(), angle)};
    return g;
}

}  // namespace

TEST_CASE("pixel distance") {
    CHECK(pixel_distance({0, 0, 0}, {0, 0, 0}) == 0.0);
    CHECK(pixel_distance({255, 0, 0}, {0, 0, 0}) == 255.0);
    CHECK(pixel_distance({1, 2, 2}, {0, 0, 0}) == 3.0);
    CHECK(pixel_distance({10, 200, 31}, {44, 1, 250}) ==
          pixel_distance({44, 1, 250}, {10, 200, 31}));
}

TEST_CASE("distance set") {
    const DistanceSet zero = distance_set(constant_window({42, 17, 200}));
    for (double v : zero) CHECK(v == 0.0);

    const DistanceSet a = distance_set(outlier_window());
    const double unit = 255.0 * std::sqrt(3.0);
    CHECK(a[4] == Catch::Approx(8.0 * unit).epsilon(1e-12));  // 3533.3836...
    for (int i = 0; i < 9; ++i) {
        if (i != 4) CHECK(a[static_cast<std::size_t>(i)] == Catch::Approx(unit).epsilon(1e-12));
    }

    const auto oracle = testsupport::brute_force_distance_sums(outlier_window());
    for (int i = 0; i < 9; ++i) CHECK(a[static_cast<std::size_t>(i)] == oracle[static_cast<std::size_t>(i)]);
}

TEST_CASE("distance sum total is permutation invariant", "[property]") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        Window3x3 w = testsupport::random_window(rng);
        const DistanceSet a = distance_set(w);
        double total = 0.0;
        for (double v : a) total += v;

        Window3x3 shuffled = w;
        std::shuffle(shuffled.cells.begin(), shuffled.cells.end(), rng);
        const DistanceSet b = distance_set(shuffled);
        double shuffled_total = 0.0;
        for (double v : b) shuffled_total += v;

        REQUIRE(total == Catch::Approx(shuffled_total).epsilon(1e-12));
    }
}

TEST_CASE("aggregate ordering") {
    const auto identity = aggregate_order(constant_window({7, 7, 7}));
    for (int i = 0; i < 9; ++i) CHECK(identity[static_cast<std::size_t>(i)] == i);

    CHECK(aggregate_order(outlier_window())[8] == 4);
}

TEST_CASE("aggregate ordering matches the brute-force oracle", "[property]") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 1000; ++trial) {
        // Small palettes force plenty of exact ties.
        const Window3x3 w = testsupport::random_window(rng, trial % 3 == 0 ? 2 : 256);
        REQUIRE(aggregate_order(w) == testsupport::brute_force_order(w));
    }
}

TEST_CASE("vector range") {
    CHECK(vector_range(constant_window({3, 3, 3})) == 0.0);
    CHECK(vector_range(outlier_window()) ==
          Catch::Approx(255.0 * std::sqrt(3.0)).epsilon(1e-12));

    Window3x3 near_constant = constant_window({10, 10, 10});
    near_constant.cells[7] = {10, 10, 11};
    CHECK(vector_range(near_constant) == 1.0);
    CHECK(vector_range(near_constant) == testsupport::brute_force_vector_range(near_constant));
}

TEST_CASE("vector range equals the oracle and is translation invariant", "[property]") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        Window3x3 w = testsupport::random_window(rng, 120);  // room to translate
        REQUIRE(vector_range(w) == testsupport::brute_force_vector_range(w));

        Window3x3 shifted = w;
        const std::uint8_t dr = static_cast<std::uint8_t>(rng() % 100);
        const std::uint8_t dg = static_cast<std::uint8_t>(rng() % 100);
        const std::uint8_t db = static_cast<std::uint8_t>(rng() % 100);
        for (auto& c : shifted.cells) {
            c.r = static_cast<std::uint8_t>(c.r + dr);
            c.g = static_cast<std::uint8_t>(c.g + dg);
            c.b = static_cast<std::uint8_t>(c.b + db);
        }
        REQUIRE(vector_range(shifted) == Catch::Approx(vector_range(w)).margin(1e-12));
    }
}

TEST_CASE("vector range is zero exactly when the ranked extremes coincide") {
    // All cells share one value: extremes equal, range zero.
    CHECK(vector_range(constant_window({100, 50, 25})) == 0.0);
    // Two values present: extremes differ, range positive.
    Window3x3 w = constant_window({100, 50, 25});
    w.cells[0] = {100, 50, 26};
    CHECK(vector_range(w) > 0.0);
}

TEST_CASE("vector-range field") {
    const ColorImage flat(6, 5, PixelVector{80, 90, 100});
    const ScalarPlane zero = vr_field(flat, BorderPolicy::Replicate);
    for (double v : zero.data()) CHECK(v == 0.0);

    // Half-and-half split: only the two columns adjacent to the boundary see
    // mixed windows under the replicate border.
    ColorImage split(8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) split.at(x, y) = x < 4 ? PixelVector{0, 0, 0} : PixelVector{255, 255, 255};
    const ScalarPlane vr = vr_field(split, BorderPolicy::Replicate);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            if (x == 3 || x == 4) {
                CHECK(vr.at(x, y) == Catch::Approx(255.0 * std::sqrt(3.0)).epsilon(1e-12));
            } else {
                CHECK(vr.at(x, y) == 0.0);
            }
        }
    }

    // Per-pixel agreement with the window-level oracle.
    std::mt19937_64 rng(31);
    const ColorImage img = testsupport::random_image(rng, 9, 7);
    const ScalarPlane field = vr_field(img, BorderPolicy::Replicate);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            REQUIRE(field.at(x, y) == testsupport::brute_force_vector_range(
                                          extract_window(img, x, y, BorderPolicy::Replicate)));
        }
    }
}

TEST_CASE("vr field is invariant under image-wide channel permutation") {
    std::mt19937_64 rng(32);
    const ColorImage img = testsupport::random_image(rng, 10, 6);
    ColorImage permuted(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const PixelVector p = img.data()[i];
        permuted.data()[i] = {p.b, p.r, p.g};
    }
    CHECK(vr_field(img, BorderPolicy::Replicate) == vr_field(permuted, BorderPolicy::Replicate));
}

TEST_CASE("gradient masks carry the published coefficients") {
    const double fx[9] = {3, 4, 4, 3, 4, 5, 4, 4, 4};
    const double fy[9] = {3, 4, 4, 4, 4, 3, 4, 4, 4};
    for (int i = 0; i < 9; ++i) {
        CHECK(kGradientMaskX.coeff[static_cast<std::size_t>(i)] == fx[i]);
        CHECK(kGradientMaskY.coeff[static_cast<std::size_t>(i)] == fy[i]);
    }
    CHECK(kGradientMaskX.coefficient_sum() == 35.0);
    CHECK(kGradientMaskY.coefficient_sum() == 34.0);
}

TEST_CASE("mask application on a constant plane") {
    const double c = 2.5;
    const GradientField g = apply_masks(ScalarPlane(7, 5, c), BorderPolicy::Replicate);
    const double expected_mag = c * std::sqrt(35.0 * 35.0 + 34.0 * 34.0);  // c * 48.7955
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 7; ++x) {
            CHECK(g.magnitude.at(x, y) == Catch::Approx(expected_mag).epsilon(1e-12));
            CHECK(g.direction.at(x, y) == Catch::Approx(std::atan2(34.0, 35.0)).epsilon(1e-12));
        }
    }

    const GradientField zero = apply_masks(ScalarPlane(4, 4, 0.0), BorderPolicy::Replicate);
    for (double v : zero.magnitude.data()) CHECK(v == 0.0);
    for (double v : zero.direction.data()) CHECK(v == 0.0);

    // Zero-mean variant kills the DC response entirely.
    const GradientField zm = apply_masks(ScalarPlane(4, 4, c), BorderPolicy::Replicate, true);
    for (double v : zm.magnitude.data()) CHECK(v == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("mask application follows the convolution convention") {
    // A unit impulse reproduces each mask un-mirrored: the response at offset
    // (dy, dx) from the impulse equals mask cell (1 + dy, 1 + dx).
    ScalarPlane plane(7, 7, 0.0);
    plane.at(3, 3) = 1.0;
    const GradientField g = apply_masks(plane, BorderPolicy::ZeroPad);

    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const int x = 3 + dx;
            const int y = 3 + dy;
            // Independent enumeration of the convolution sums at (x, y).
            double gx = 0.0;
            double gy = 0.0;
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) {
                    const int sx = x - (c - 1);
                    const int sy = y - (r - 1);
                    const double v = (sx == 3 && sy == 3) ? 1.0 : 0.0;
                    gx += kGradientMaskX.at(r, c) * v;
                    gy += kGradientMaskY.at(r, c) * v;
                }
            }
            CHECK(gx == kGradientMaskX.at(1 + dy, 1 + dx));
            CHECK(gy == kGradientMaskY.at(1 + dy, 1 + dx));
            CHECK(g.magnitude.at(x, y) == Catch::Approx(std::sqrt(gx * gx + gy * gy)).epsilon(1e-12));
        }
    }
}

TEST_CASE("direction quantization") {
    CHECK(quantize_direction(0.0) == Direction4::Horizontal);
    CHECK(quantize_direction(kPi / 2.0) == Direction4::Vertical);
    CHECK(quantize_direction(kPi) == Direction4::Horizontal);
    CHECK(quantize_direction(kPi / 4.0) == Direction4::Diagonal45);
    CHECK(quantize_direction(3.0 * kPi / 4.0) == Direction4::Diagonal135);
    CHECK(quantize_direction(-kPi / 2.0) == Direction4::Vertical);
    CHECK(quantize_direction(-kPi / 4.0) == Direction4::Diagonal135);

    // Bin boundaries: 22.5 degrees belongs to the next bin up.
    const double deg = kPi / 180.0;
    CHECK(quantize_direction(22.5 * deg) == Direction4::Diagonal45);
    CHECK(quantize_direction(67.5 * deg) == Direction4::Vertical);
    CHECK(quantize_direction(112.5 * deg) == Direction4::Diagonal135);
    CHECK(quantize_direction(157.5 * deg) == Direction4::Horizontal);
    CHECK(quantize_direction(-22.5 * deg) == Direction4::Horizontal);
}

TEST_CASE("non-maximum suppression") {
    // Constant nonzero magnitude: nothing strictly exceeds its neighbors.
    const GradientField flat = uniform_direction_field(ScalarPlane(5, 5, 3.0), 0.0);
    const ScalarPlane strict = non_max_suppress(flat, true);
    for (double v : strict.data()) CHECK(v == 0.0);

    // Single-column ridge with horizontal gradient survives intact.
    ScalarPlane ridge(5, 5, 0.0);
    for (int y = 0; y < 5; ++y) ridge.at(2, y) = 10.0;
    const ScalarPlane kept = non_max_suppress(uniform_direction_field(ridge, 0.0), true);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 5; ++x) {
            CHECK(kept.at(x, y) == (x == 2 ? 10.0 : 0.0));
        }
    }
}

TEST_CASE("two-pixel plateaus survive only non-strict suppression") {
    ScalarPlane plateau(6, 1, 0.0);
    plateau.at(2, 0) = 5.0;
    plateau.at(3, 0) = 5.0;
    const GradientField g = uniform_direction_field(plateau, 0.0);

    const ScalarPlane strict = non_max_suppress(g, true);
    for (double v : strict.data()) CHECK(v == 0.0);

    const ScalarPlane loose = non_max_suppress(g, false);
    CHECK(loose.at(2, 0) == 5.0);
    CHECK(loose.at(3, 0) == 5.0);
    CHECK(loose.at(1, 0) == 0.0);
    CHECK(loose.at(4, 0) == 0.0);
}

TEST_CASE("suppression output is bounded by its input", "[property]") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> mag(0.0, 100.0);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    GradientField g{ScalarPlane(9, 8), ScalarPlane(9, 8)};
    for (std::size_t i = 0; i < g.magnitude.size(); ++i) {
        g.magnitude.data()[i] = mag(rng);
        g.direction.data()[i] = ang(rng);
    }
    for (bool strict : {true, false}) {
        const ScalarPlane out = non_max_suppress(g, strict);
        for (std::size_t i = 0; i < out.size(); ++i) {
            REQUIRE(out.data()[i] <= g.magnitude.data()[i]);
            REQUIRE((out.data()[i] == 0.0 || out.data()[i] == g.magnitude.data()[i]));
        }
    }
}

TEST_CASE("thresholding") {
    ScalarPlane plane(3, 1, 0.0);
    plane.at(1, 0) = 5.0;
    plane.at(2, 0) = 10.0;

    const EdgeMap mid = threshold(plane, 0.4);  // cut at 4
    CHECK(mid.at(0, 0) == 0);
    CHECK(mid.at(1, 0) == 1);
    CHECK(mid.at(2, 0) == 1);

    const EdgeMap top = threshold(plane, 1.0);
    CHECK(count_edges(top) == 0);

    const EdgeMap none = threshold(ScalarPlane(4, 4, 0.0), 0.3);
    CHECK(count_edges(none) == 0);

    CHECK_THROWS_AS(threshold(plane, -0.1), InvalidThresholdError);
    CHECK_THROWS_AS(threshold(plane, 1.5), InvalidThresholdError);
}

TEST_CASE("threshold depends only on the plane's ratio to its max", "[property]") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> mag(0.0, 50.0);
    ScalarPlane plane(7, 7);
    for (double& v : plane.data()) v = mag(rng);

    ScalarPlane scaled = plane;
    for (double& v : scaled.data()) v *= 3.5;

    for (double t : {0.0, 0.25, 0.8}) {
        REQUIRE(threshold(plane, t) == threshold(scaled, t));
    }
}

TEST_CASE("detector yields nothing on flat images") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 5; ++trial) {
        const ColorImage img(20, 15, testsupport::random_pixel(rng));
        CHECK(count_edges(detect_edges(img, VosParams{})) == 0);
    }
}

TEST_CASE("detector localizes a clean color step") {
    SyntheticSpec spec;
    spec.color_a = {255, 0, 0};
    spec.color_b = {0, 0, 255};
    const SyntheticImage synth = generate_synthetic(spec);

    VosParams params;
    params.threshold = 0.2;
    const EdgeMap edges = detect_edges(synth.image, params);

    const int boundary = spec.width / 2;
    for (int y = 0; y < edges.height(); ++y) {
        int per_row = 0;
        for (int x = 0; x < edges.width(); ++x) {
            if (edges.at(x, y)) {
                CHECK(std::abs(x - boundary) <= 1);
                ++per_row;
            }
        }
        CHECK(per_row >= 1);
    }
}

TEST_CASE("detector commutes with a quarter turn away from the border") {
    for (const EdgeProfile profile : {EdgeProfile::Step, EdgeProfile::Ridge}) {
        SyntheticSpec spec;
        spec.profile = profile;
        spec.transition_width = profile == EdgeProfile::Ridge ? 5 : 1;
        spec.color_a = {20, 200, 40};
        spec.color_b = {230, 30, 90};
        const SyntheticImage synth = generate_synthetic(spec);

        VosParams params;
        const EdgeMap direct = detect_edges(testsupport::rot90cw(synth.image), params);
        const EdgeMap rotated = testsupport::rot90cw(detect_edges(synth.image, params));

        REQUIRE(direct.width() == rotated.width());
        REQUIRE(direct.height() == rotated.height());
        for (int y = 1; y < direct.height() - 1; ++y) {
            for (int x = 1; x < direct.width() - 1; ++x) {
                REQUIRE(direct.at(x, y) == rotated.at(x, y));
            }
        }
    }
}

TEST_CASE("raster stages are worker-count invariant") {
    std::mt19937_64 rng(77);
    const ColorImage img = testsupport::random_image(rng, 61, 47);

    const ScalarPlane vr1 = vr_field(img, BorderPolicy::Replicate, 1);
    const GradientField g1 = apply_masks(vr1, BorderPolicy::Replicate, false, 1);
    const ScalarPlane nms1 = non_max_suppress(g1, true, 1);

    for (int workers : {2, 3, 8}) {
        REQUIRE(vr_field(img, BorderPolicy::Replicate, workers) == vr1);
        const GradientField g = apply_masks(vr1, BorderPolicy::Replicate, false, workers);
        REQUIRE(g.magnitude == g1.magnitude);
        REQUIRE(g.direction == g1.direction);
        REQUIRE(non_max_suppress(g1, true, workers) == nms1);
        REQUIRE(detect_edges(img, VosParams{}, workers) == detect_edges(img, VosParams{}, 1));
    }
}

TEST_CASE("detector params validate") {
    VosParams params;
    params.threshold = 1.2;
    CHECK_THROWS_AS(detect_edges(ColorImage(4, 4), params), InvalidThresholdError);
}
