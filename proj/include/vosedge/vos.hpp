#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "vosedge/errors.hpp"
#include "vosedge/image.hpp"
#include "vosedge/parallel.hpp"

namespace vosedge {

/// Euclidean distance between two RGB vectors.
inline double pixel_distance(PixelVector a, PixelVector b) {
    const double dr = static_cast<double>(a.r) - static_cast<double>(b.r);
    const double dg = static_cast<double>(a.g) - static_cast<double>(b.g);
    const double db = static_cast<double>(a.b) - static_cast<double>(b.b);
    return std::sqrt(dr * dr + dg * dg + db * db);
}

/// Aggregate distance score per window cell: a[i] is the sum of Euclidean
/// distances from cell i to every cell of the window (reduced ordering key).
using DistanceSet = std::array<double, 9>;

inline DistanceSet distance_set(const Window3x3& w) {
    DistanceSet a{};
    for (int i = 0; i < 9; ++i) {
        for (int j = i + 1; j < 9; ++j) {
            const double d = pixel_distance(w.cells[i], w.cells[j]);
            a[i] += d;
            a[j] += d;
        }
    }
    return a;
}

/// Window cell indices sorted ascending by aggregate distance score.
/// Ties break toward the lower window index so the ordering is deterministic.
inline std::array<int, 9> aggregate_order(const Window3x3& w) {
    const DistanceSet a = distance_set(w);
    std::array<int, 9> idx;
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&a](int i, int j) {
        if (a[i] != a[j]) return a[i] < a[j];
        return i < j;
    });
    return idx;
}

namespace detail {

// First/last elements of the aggregate ordering without the full sort.
struct OrderExtremes {
    int first = 0;
    int last = 0;
};

inline OrderExtremes order_extremes(const DistanceSet& a) {
    OrderExtremes e;
    for (int i = 1; i < 9; ++i) {
        if (a[i] < a[e.first]) e.first = i;   // tie keeps the lower index
        if (a[i] >= a[e.last]) e.last = i;    // tie takes the higher index
    }
    return e;
}

}  // namespace detail

/// Vector range of a window: the Euclidean norm of the difference between the
/// highest- and lowest-ranked pixels of the aggregate ordering.
inline double vector_range(const Window3x3& w) {
    const DistanceSet a = distance_set(w);
    const auto e = detail::order_extremes(a);
    return pixel_distance(w.cells[e.last], w.cells[e.first]);
}

/// Vector-range field: vector_range of the 3x3 window at every pixel.
inline ScalarPlane vr_field(const ColorImage& img, BorderPolicy border, int workers = 1) {
    ScalarPlane out(img.width(), img.height());
    const int w = img.width();
    parallel_rows(img.height(), workers, [&](int y) {
        double* out_row = out.row(y);
        for (int x = 0; x < w; ++x) {
            out_row[x] = vector_range(extract_window(img, x, y, border));
        }
    });
    return out;
}

/// 3x3 real coefficient mask.
struct Mask3x3 {
    std::array<double, 9> coeff{};

    double at(int r, int c) const { return coeff[static_cast<std::size_t>(r) * 3 + c]; }

    double coefficient_sum() const {
        double s = 0.0;
        for (double v : coeff) s += v;
        return s;
    }

    Mask3x3 zero_mean() const {
        const double mean = coefficient_sum() / 9.0;
        Mask3x3 m = *this;
        for (double& v : m.coeff) v -= mean;
        return m;
    }
};

// Collection-scheme gradient masks, row-major.
inline constexpr Mask3x3 kGradientMaskX{{3, 4, 4,
                                         3, 4, 5,
                                         4, 4, 4}};
inline constexpr Mask3x3 kGradientMaskY{{3, 4, 4,
                                         4, 4, 3,
                                         4, 4, 4}};

/// Gradient magnitude and direction planes of equal dimensions.
/// Directions are atan2 angles in (-pi, pi]; atan2(0, 0) is 0.
struct GradientField {
    ScalarPlane magnitude;
    ScalarPlane direction;
};

/// Convolves a scalar plane with both gradient masks and combines the
/// responses into magnitude sqrt(Gx^2 + Gy^2) and direction atan2(Gy, Gx).
/// Convolution convention: mask cell (r, c) multiplies plane pixel
/// (x - (c-1), y - (r-1)).
inline GradientField apply_masks(const ScalarPlane& plane, BorderPolicy border,
                                 bool zero_mean_masks = false, int workers = 1) {
    const Mask3x3 mx = zero_mean_masks ? kGradientMaskX.zero_mean() : kGradientMaskX;
    const Mask3x3 my = zero_mean_masks ? kGradientMaskY.zero_mean() : kGradientMaskY;

    GradientField field{ScalarPlane(plane.width(), plane.height()),
                        ScalarPlane(plane.width(), plane.height())};
    const int w = plane.width();
    parallel_rows(plane.height(), workers, [&](int y) {
        double* mag_row = field.magnitude.row(y);
        double* dir_row = field.direction.row(y);
        for (int x = 0; x < w; ++x) {
            double gx = 0.0;
            double gy = 0.0;
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) {
                    const double v = sample(plane, x - (c - 1), y - (r - 1), border);
                    gx += mx.at(r, c) * v;
                    gy += my.at(r, c) * v;
                }
            }
            mag_row[x] = std::sqrt(gx * gx + gy * gy);
            dir_row[x] = std::atan2(gy, gx);
        }
    });
    return field;
}

/// The four edge-normal directions used by non-maximum suppression.
enum class Direction4 {
    Horizontal,   // 0 degrees
    Diagonal45,   // 45 degrees
    Vertical,     // 90 degrees
    Diagonal135,  // 135 degrees
};

/// Quantizes an angle (radians, mod pi) into the nearest of the four
/// directions: [-22.5, 22.5) -> Horizontal, [22.5, 67.5) -> Diagonal45,
/// [67.5, 112.5) -> Vertical, [112.5, 157.5) -> Diagonal135.
inline Direction4 quantize_direction(double theta) {
    constexpr double kPi = 3.14159265358979323846;
    double deg = theta * (180.0 / kPi);
    deg = std::fmod(deg, 180.0);
    if (deg < 0.0) deg += 180.0;
    if (deg < 22.5) return Direction4::Horizontal;
    if (deg < 67.5) return Direction4::Diagonal45;
    if (deg < 112.5) return Direction4::Vertical;
    if (deg < 157.5) return Direction4::Diagonal135;
    return Direction4::Horizontal;
}

namespace detail {

struct NeighborOffsets {
    int dx1, dy1, dx2, dy2;
};

// Comparison neighbors lie along the gradient (across the edge):
// Horizontal -> (W, E), Vertical -> (N, S),
// Diagonal45 -> (SW, NE), Diagonal135 -> (NW, SE).
inline NeighborOffsets nms_neighbors(Direction4 dir) {
    switch (dir) {
        case Direction4::Horizontal:  return {-1, 0, 1, 0};
        case Direction4::Vertical:    return {0, -1, 0, 1};
        case Direction4::Diagonal45:  return {-1, 1, 1, -1};
        case Direction4::Diagonal135: return {-1, -1, 1, 1};
    }
    return {-1, 0, 1, 0};
}

}  // namespace detail

/// Keeps each pixel's magnitude only where it is a local maximum along its
/// quantized gradient direction; all other pixels become zero.
///
/// strict = true requires the magnitude to exceed both neighbors (two-pixel
/// plateaus are suppressed entirely); strict = false keeps plateau pixels
/// that are >= both neighbors and > at least one. Off-image neighbor
/// positions clamp to the nearest in-image pixel, so border pixels always
/// compare against two real magnitudes.
inline ScalarPlane non_max_suppress(const GradientField& g, bool strict, int workers = 1) {
    if (!g.magnitude.same_size(g.direction)) {
        throw DimensionMismatchError("non_max_suppress: magnitude and direction planes differ");
    }
    ScalarPlane out(g.magnitude.width(), g.magnitude.height(), 0.0);
    const int w = g.magnitude.width();
    const int h = g.magnitude.height();
    parallel_rows(h, workers, [&](int y) {
        double* out_row = out.row(y);
        const double* mag_row = g.magnitude.row(y);
        const double* dir_row = g.direction.row(y);
        for (int x = 0; x < w; ++x) {
            const double m = mag_row[x];
            const auto n = detail::nms_neighbors(quantize_direction(dir_row[x]));
            const double n1 = sample(g.magnitude, x + n.dx1, y + n.dy1, BorderPolicy::Replicate);
            const double n2 = sample(g.magnitude, x + n.dx2, y + n.dy2, BorderPolicy::Replicate);
            const bool keep = strict ? (m > n1 && m > n2)
                                     : (m >= n1 && m >= n2 && (m > n1 || m > n2));
            if (keep) out_row[x] = m;
        }
    });
    return out;
}

/// Marks pixels whose value strictly exceeds t * max(plane). A zero-max plane
/// yields an all-false map.
inline EdgeMap threshold(const ScalarPlane& plane, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw InvalidThresholdError("threshold: t must lie in [0, 1], got " + std::to_string(t));
    }
    EdgeMap out(plane.width(), plane.height(), 0);
    double maxv = 0.0;
    for (double v : plane.data()) maxv = std::max(maxv, v);
    if (maxv <= 0.0) return out;
    const double cut = t * maxv;
    for (std::size_t i = 0; i < plane.size(); ++i) {
        out.data()[i] = plane.data()[i] > cut ? 1 : 0;
    }
    return out;
}

/// Parameters of the vector-order-statistics detector.
struct VosParams {
    double threshold = 0.2;  // fraction of the maximum suppressed magnitude
    BorderPolicy border = BorderPolicy::Replicate;
    bool strict_nms = true;
    bool zero_mean_masks = false;

    void validate() const {
        if (!(threshold >= 0.0 && threshold <= 1.0)) {
            throw InvalidThresholdError("VosParams: threshold must lie in [0, 1], got " +
                                        std::to_string(threshold));
        }
    }
};

/// Full detector pipeline: vector-range field -> gradient masks ->
/// non-maximum suppression -> fraction-of-max threshold.
inline EdgeMap detect_edges(const ColorImage& img, const VosParams& params, int workers = 1) {
    params.validate();
    const ScalarPlane vr = vr_field(img, params.border, workers);
    const GradientField g = apply_masks(vr, params.border, params.zero_mean_masks, workers);
    const ScalarPlane nms = non_max_suppress(g, params.strict_nms, workers);
    return threshold(nms, params.threshold);
}

}  // namespace vosedge
