#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vosedge/errors.hpp"
#include "vosedge/image.hpp"
#include "vosedge/parallel.hpp"
#include "vosedge/vos.hpp"

namespace vosedge {

enum class BaselineKind {
    Sobel,
    Prewitt,
    Roberts,
    Laplacian,
    Canny,
};

struct CannyParams {
    double gaussian_sigma = 1.0;
    double low_ratio = 0.10;   // fraction of max gradient magnitude
    double high_ratio = 0.25;

    void validate() const {
        if (!(gaussian_sigma > 0.0)) {
            throw std::invalid_argument("CannyParams: sigma must be > 0");
        }
        if (!(low_ratio > 0.0 && low_ratio < high_ratio && high_ratio < 1.0)) {
            throw InvalidThresholdError(
                "CannyParams: need 0 < low_ratio < high_ratio < 1, got low=" +
                std::to_string(low_ratio) + " high=" + std::to_string(high_ratio));
        }
    }
};

/// Separable Gaussian blur, kernel truncated at radius ceil(3*sigma) and
/// normalized. sigma <= 0 returns the input unchanged.
inline GrayImage gaussian_blur(const GrayImage& img, double sigma,
                               BorderPolicy border = BorderPolicy::Replicate, int workers = 1) {
    if (sigma <= 0.0) return img;

    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (double& v : kernel) v /= sum;

    const int w = img.width();
    const int h = img.height();

    GrayImage tmp(w, h);
    parallel_rows(h, workers, [&](int y) {
        double* out_row = tmp.row(y);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<std::size_t>(k + radius)] * sample(img, x + k, y, border);
            }
            out_row[x] = acc;
        }
    });

    GrayImage out(w, h);
    parallel_rows(h, workers, [&](int y) {
        double* out_row = out.row(y);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<std::size_t>(k + radius)] * sample(tmp, x, y + k, border);
            }
            out_row[x] = acc;
        }
    });
    return out;
}

/// Gradient field of a grayscale image under the named operator.
/// Sobel applies [[-1,0,1],[-2,0,2],[-1,0,1]] and its transpose, Prewitt the
/// all-ones variant; Roberts uses the 2x2 cross differences
/// gx = I(x,y) - I(x+1,y+1), gy = I(x+1,y) - I(x,y+1). The kernels are
/// evaluated as neighbor differences so constant regions respond with an
/// exact zero rather than accumulation dust (the fraction-of-max threshold
/// would happily amplify dust into edges).
inline GradientField gradient_field(const GrayImage& img, BaselineKind kind,
                                    BorderPolicy border = BorderPolicy::Replicate,
                                    int workers = 1) {
    GradientField field{ScalarPlane(img.width(), img.height()),
                        ScalarPlane(img.width(), img.height())};
    const int w = img.width();

    if (kind == BaselineKind::Roberts) {
        parallel_rows(img.height(), workers, [&](int y) {
            double* mag_row = field.magnitude.row(y);
            double* dir_row = field.direction.row(y);
            for (int x = 0; x < w; ++x) {
                const double p00 = img.at(x, y);
                const double p10 = sample(img, x + 1, y, border);
                const double p01 = sample(img, x, y + 1, border);
                const double p11 = sample(img, x + 1, y + 1, border);
                const double gx = p00 - p11;
                const double gy = p10 - p01;
                mag_row[x] = std::sqrt(gx * gx + gy * gy);
                dir_row[x] = std::atan2(gy, gx);
            }
        });
        return field;
    }

    if (kind != BaselineKind::Sobel && kind != BaselineKind::Prewitt) {
        throw std::invalid_argument("gradient_field: kind has no kernel pair");
    }
    const double center_weight = kind == BaselineKind::Sobel ? 2.0 : 1.0;
    parallel_rows(img.height(), workers, [&](int y) {
        double* mag_row = field.magnitude.row(y);
        double* dir_row = field.direction.row(y);
        for (int x = 0; x < w; ++x) {
            const double tl = sample(img, x - 1, y - 1, border);
            const double tc = sample(img, x, y - 1, border);
            const double tr = sample(img, x + 1, y - 1, border);
            const double ml = sample(img, x - 1, y, border);
            const double mr = sample(img, x + 1, y, border);
            const double bl = sample(img, x - 1, y + 1, border);
            const double bc = sample(img, x, y + 1, border);
            const double br = sample(img, x + 1, y + 1, border);
            const double gx = (tr - tl) + center_weight * (mr - ml) + (br - bl);
            const double gy = (bl - tl) + center_weight * (bc - tc) + (br - tr);
            mag_row[x] = std::sqrt(gx * gx + gy * gy);
            dir_row[x] = std::atan2(gy, gx);
        }
    });
    return field;
}

/// Sobel/Prewitt/Roberts detector: gradient magnitude thresholded at t * max.
inline EdgeMap gradient_baseline(const GrayImage& img, BaselineKind kind, double t,
                                 BorderPolicy border = BorderPolicy::Replicate,
                                 int workers = 1) {
    if (kind != BaselineKind::Sobel && kind != BaselineKind::Prewitt &&
        kind != BaselineKind::Roberts) {
        throw std::invalid_argument("gradient_baseline: kind must be Sobel, Prewitt or Roberts");
    }
    const GradientField g = gradient_field(img, kind, border, workers);
    return threshold(g.magnitude, t);
}

/// Signed response of the 4-neighbor Laplacian [[0,1,0],[1,-4,1],[0,1,0]],
/// evaluated as neighbor differences so constants respond with exact zero.
inline ScalarPlane laplacian_plane(const GrayImage& img,
                                   BorderPolicy border = BorderPolicy::Replicate,
                                   int workers = 1) {
    ScalarPlane out(img.width(), img.height());
    const int w = img.width();
    parallel_rows(img.height(), workers, [&](int y) {
        double* out_row = out.row(y);
        for (int x = 0; x < w; ++x) {
            const double c = img.at(x, y);
            out_row[x] = ((sample(img, x - 1, y, border) - c) +
                          (sample(img, x + 1, y, border) - c)) +
                         ((sample(img, x, y - 1, border) - c) +
                          (sample(img, x, y + 1, border) - c));
        }
    });
    return out;
}

/// Laplacian detector: |response| thresholded at t * max|response|.
inline EdgeMap laplacian_baseline(const GrayImage& img, double t,
                                  BorderPolicy border = BorderPolicy::Replicate,
                                  int workers = 1) {
    ScalarPlane mag = laplacian_plane(img, border, workers);
    for (double& v : mag.data()) v = std::abs(v);
    return threshold(mag, t);
}

/// Double threshold plus hysteresis on a suppressed magnitude plane: strong
/// pixels (> high) are edges; weak pixels (> low) survive only if 8-connected
/// to a strong pixel through other surviving pixels.
inline EdgeMap hysteresis(const ScalarPlane& plane, double low, double high) {
    const int w = plane.width();
    const int h = plane.height();
    EdgeMap out(w, h, 0);
    std::vector<std::uint8_t> weak(plane.size(), 0);
    std::queue<std::pair<int, int>> frontier;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = plane.at(x, y);
            if (v > high) {
                out.at(x, y) = 1;
                frontier.push({x, y});
            } else if (v > low) {
                weak[static_cast<std::size_t>(y) * w + x] = 1;
            }
        }
    }

    while (!frontier.empty()) {
        const auto [cx, cy] = frontier.front();
        frontier.pop();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = cx + dx;
                const int ny = cy + dy;
                if (!out.in_bounds(nx, ny)) continue;
                const std::size_t i = static_cast<std::size_t>(ny) * w + nx;
                if (weak[i] && !out.data()[i]) {
                    out.data()[i] = 1;
                    frontier.push({nx, ny});
                }
            }
        }
    }
    return out;
}

/// Canny detector: Gaussian blur -> Sobel gradient -> non-maximum suppression
/// (non-strict, shared with the VOS pipeline) -> double threshold at
/// high_ratio/low_ratio of the max suppressed magnitude -> hysteresis.
inline EdgeMap canny_baseline(const GrayImage& img, const CannyParams& params,
                              BorderPolicy border = BorderPolicy::Replicate, int workers = 1) {
    params.validate();
    const GrayImage smoothed = gaussian_blur(img, params.gaussian_sigma, border, workers);
    const GradientField g = gradient_field(smoothed, BaselineKind::Sobel, border, workers);
    const ScalarPlane nms = non_max_suppress(g, /*strict=*/false, workers);
    double maxv = 0.0;
    for (double v : nms.data()) maxv = std::max(maxv, v);
    if (maxv <= 0.0) return EdgeMap(img.width(), img.height(), 0);
    return hysteresis(nms, params.low_ratio * maxv, params.high_ratio * maxv);
}

}  // namespace vosedge
