#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vosedge/baselines.hpp"
#include "vosedge/errors.hpp"
#include "vosedge/image.hpp"
#include "vosedge/vos.hpp"

namespace vosedge {

namespace detail {

// Large finite sentinel for "no feature in this column"; any reachable
// squared distance is far below it.
constexpr double kDtInf = 1e20;

// 1-D squared-distance transform via the lower envelope of parabolas
// (Felzenszwalb & Huttenlocher). f holds squared distances, out gets
// min_j (i - j)^2 + f[j].
inline void dt_1d(const std::vector<double>& f, std::vector<double>& out,
                  std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    int k = 0;
    v[0] = 0;
    z[0] = -kDtInf;
    z[1] = kDtInf;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + static_cast<double>(q) * q) -
                    (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
                   (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + static_cast<double>(q) * q) -
                 (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
                (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kDtInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double d = static_cast<double>(q) - v[k];
        out[static_cast<std::size_t>(q)] = d * d + f[v[k]];
    }
}

}  // namespace detail

/// Exact squared Euclidean distance from every pixel to the nearest edge
/// pixel of `truth`. Separable two-pass transform: columns first (1-D
/// distances within each column), then rows (lower-envelope combine).
inline ScalarPlane squared_distance_transform(const EdgeMap& truth) {
    if (count_edges(truth) == 0) {
        throw EmptyTruthError("distance_transform: edge map has no edge pixels");
    }
    const int w = truth.width();
    const int h = truth.height();
    ScalarPlane sq(w, h);

    std::vector<double> f(static_cast<std::size_t>(h));
    std::vector<double> d(static_cast<std::size_t>(h));
    std::vector<int> v;
    std::vector<double> z;
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            f[static_cast<std::size_t>(y)] = truth.at(x, y) ? 0.0 : detail::kDtInf;
        }
        detail::dt_1d(f, d, v, z);
        for (int y = 0; y < h; ++y) sq.at(x, y) = d[static_cast<std::size_t>(y)];
    }

    std::vector<double> fr(static_cast<std::size_t>(w));
    std::vector<double> dr(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) fr[static_cast<std::size_t>(x)] = sq.at(x, y);
        detail::dt_1d(fr, dr, v, z);
        for (int x = 0; x < w; ++x) sq.at(x, y) = dr[static_cast<std::size_t>(x)];
    }
    return sq;
}

/// Exact Euclidean distance from every pixel to the nearest edge pixel.
inline ScalarPlane distance_transform(const EdgeMap& truth) {
    ScalarPlane sq = squared_distance_transform(truth);
    for (double& v : sq.data()) v = std::sqrt(v);
    return sq;
}

/// Pratt Figure of Merit score with its edge-pixel counts.
struct PfomResult {
    double score = 0.0;        // R in [0, 1]
    std::int64_t n_actual = 0;    // ground-truth edge pixels (N_I)
    std::int64_t n_detected = 0;  // detected edge pixels (N_A)
    double m = 1.0 / 9.0;      // scaling constant
};

/// R = (1 / max(N_I, N_A)) * sum over detected pixels of 1 / (1 + m * d^2),
/// where d is each detected pixel's distance to the nearest actual edge
/// pixel. Exactly one empty map scores 0; two empty maps are an error.
inline PfomResult pfom(const EdgeMap& detected, const EdgeMap& actual, double m = 1.0 / 9.0) {
    if (!detected.same_size(actual)) {
        throw DimensionMismatchError("pfom: detected and actual maps differ in size");
    }
    if (!(m >= 0.0)) {
        throw std::invalid_argument("pfom: m must be >= 0");
    }
    PfomResult res;
    res.m = m;
    res.n_actual = count_edges(actual);
    res.n_detected = count_edges(detected);
    if (res.n_actual == 0 && res.n_detected == 0) {
        throw BothEmptyError("pfom: both maps are empty");
    }
    if (res.n_actual == 0 || res.n_detected == 0) {
        res.score = 0.0;
        return res;
    }
    const ScalarPlane sq = squared_distance_transform(actual);
    double sum = 0.0;
    for (std::size_t i = 0; i < detected.size(); ++i) {
        if (detected.data()[i]) {
            sum += 1.0 / (1.0 + m * sq.data()[i]);
        }
    }
    res.score = sum / static_cast<double>(std::max(res.n_actual, res.n_detected));
    return res;
}

/// Cross-sectional shapes of synthetic edges.
enum class EdgeProfile { Step, Ramp, Roof, Ridge };

/// Which way the synthetic edge line runs.
enum class Orientation { Vertical, Horizontal };

struct SyntheticSpec {
    EdgeProfile profile = EdgeProfile::Step;
    Orientation orientation = Orientation::Vertical;
    int width = 64;
    int height = 64;
    PixelVector color_a{0, 0, 0};
    PixelVector color_b{255, 255, 255};
    int transition_width = 1;      // band width for Ramp/Roof/Ridge
    double noise_sigma = 0.0;      // Gaussian noise per channel
    std::uint64_t seed = 0;

    void validate() const {
        if (width < 2 || height < 2) {
            throw InvalidSpecError("SyntheticSpec: image must be at least 2x2");
        }
        if (transition_width < 1 || transition_width >= std::min(width, height)) {
            throw InvalidSpecError("SyntheticSpec: transition_width must be in [1, min(w, h))");
        }
        if (!(noise_sigma >= 0.0)) {
            throw InvalidSpecError("SyntheticSpec: noise_sigma must be >= 0");
        }
    }
};

struct SyntheticImage {
    ColorImage image;
    EdgeMap truth;
};

namespace detail {

// Seeded standard-normal sampler. Box-Muller over raw mt19937_64 draws;
// std::normal_distribution is not pinned by the standard, this is, so the
// same seed gives the same image on every toolchain.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
        const double u2 = static_cast<double>(rng_() >> 11) * 0x1p-53;          // [0, 1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline std::uint8_t clamp_channel(double v) {
    const double r = std::round(v);
    if (r <= 0.0) return 0;
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

inline PixelVector lerp_color(PixelVector a, PixelVector b, double t) {
    return PixelVector{clamp_channel(a.r + t * (b.r - a.r)),
                       clamp_channel(a.g + t * (b.g - a.g)),
                       clamp_channel(a.b + t * (b.b - a.b))};
}

}  // namespace detail

/// Builds a profile image plus its ground-truth edge map.
///
/// With `i` the coordinate across the edge (x for vertical edges), n its
/// extent, mid = n/2 and s = mid - transition_width/2:
///   Step:  color_a for i < mid, color_b from mid on; truth at i == mid
///          (the first line of the second region).
///   Ramp:  linear blend a->b over [s, s + tw); truth at i == mid.
///   Roof:  blend a->b->a peaking at i == mid within the band; truth at mid.
///   Ridge: color_b stripe covering [s, s + tw); truth on the stripe's first
///          and last lines.
/// Noise is i.i.d. Gaussian per channel, rounded and clamped to [0, 255];
/// fixed seeds give bit-identical images.
inline SyntheticImage generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const bool vertical = spec.orientation == Orientation::Vertical;
    const int n = vertical ? spec.width : spec.height;
    const int mid = n / 2;
    const int tw = spec.transition_width;
    const int s = mid - tw / 2;

    std::vector<PixelVector> line(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> truth_line(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        PixelVector c;
        switch (spec.profile) {
            case EdgeProfile::Step:
                c = i < mid ? spec.color_a : spec.color_b;
                break;
            case EdgeProfile::Ramp:
                if (i < s) {
                    c = spec.color_a;
                } else if (i >= s + tw) {
                    c = spec.color_b;
                } else {
                    c = detail::lerp_color(spec.color_a, spec.color_b,
                                           static_cast<double>(i - s + 1) / (tw + 1));
                }
                break;
            case EdgeProfile::Roof:
                if (i < s || i >= s + tw) {
                    c = spec.color_a;
                } else {
                    const double k = (tw + 1) / 2.0;
                    const double u = 1.0 - std::abs(i - mid) / k;
                    c = detail::lerp_color(spec.color_a, spec.color_b, u);
                }
                break;
            case EdgeProfile::Ridge:
                c = (i >= s && i < s + tw) ? spec.color_b : spec.color_a;
                break;
        }
        line[static_cast<std::size_t>(i)] = c;
    }

    switch (spec.profile) {
        case EdgeProfile::Step:
        case EdgeProfile::Ramp:
        case EdgeProfile::Roof:
            truth_line[static_cast<std::size_t>(mid)] = 1;
            break;
        case EdgeProfile::Ridge:
            truth_line[static_cast<std::size_t>(s)] = 1;
            truth_line[static_cast<std::size_t>(s + tw - 1)] = 1;
            break;
    }

    SyntheticImage out{ColorImage(spec.width, spec.height), EdgeMap(spec.width, spec.height, 0)};
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const int i = vertical ? x : y;
            out.image.at(x, y) = line[static_cast<std::size_t>(i)];
            out.truth.at(x, y) = truth_line[static_cast<std::size_t>(i)];
        }
    }

    if (spec.noise_sigma > 0.0) {
        detail::GaussianSampler noise(spec.seed);
        for (PixelVector& p : out.image.data()) {
            p.r = detail::clamp_channel(p.r + spec.noise_sigma * noise.next());
            p.g = detail::clamp_channel(p.g + spec.noise_sigma * noise.next());
            p.b = detail::clamp_channel(p.b + spec.noise_sigma * noise.next());
        }
    }
    return out;
}

/// A named detector ready to run on a color image.
struct DetectorConfig {
    std::string name;
    std::function<EdgeMap(const ColorImage&)> detect;
};

struct ComparisonRow {
    std::string name;
    PfomResult result;
};

/// Runs every configured detector on the image and scores it against the
/// ground truth. Rows come back in configuration order.
inline std::vector<ComparisonRow> compare_detectors(const ColorImage& img, const EdgeMap& truth,
                                                    const std::vector<DetectorConfig>& configs,
                                                    double m = 1.0 / 9.0) {
    if (img.width() != truth.width() || img.height() != truth.height()) {
        throw DimensionMismatchError("compare_detectors: image and truth sizes differ");
    }
    std::vector<ComparisonRow> rows;
    rows.reserve(configs.size());
    for (const auto& cfg : configs) {
        rows.push_back({cfg.name, pfom(cfg.detect(img), truth, m)});
    }
    return rows;
}

/// The five traditional detectors plus the VOS detector, in the order
/// sobel, prewitt, roberts, laplacian, canny, vos. The grayscale baselines
/// convert internally; VOS consumes the color image directly.
inline std::vector<DetectorConfig> default_detector_suite(const VosParams& vos_params,
                                                          double baseline_threshold,
                                                          const CannyParams& canny_params,
                                                          int workers = 1) {
    const BorderPolicy border = vos_params.border;
    auto gradient = [=](BaselineKind kind) {
        return [=](const ColorImage& img) {
            return gradient_baseline(to_grayscale(img), kind, baseline_threshold, border, workers);
        };
    };
    return {
        {"sobel", gradient(BaselineKind::Sobel)},
        {"prewitt", gradient(BaselineKind::Prewitt)},
        {"roberts", gradient(BaselineKind::Roberts)},
        {"laplacian",
         [=](const ColorImage& img) {
             return laplacian_baseline(to_grayscale(img), baseline_threshold, border, workers);
         }},
        {"canny",
         [=](const ColorImage& img) {
             return canny_baseline(to_grayscale(img), canny_params, border, workers);
         }},
        {"vos", [=](const ColorImage& img) { return detect_edges(img, vos_params, workers); }},
    };
}

inline std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream os;
    os << "name,pfom,n_actual,n_detected\n";
    for (const auto& row : rows) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", row.result.score);
        os << row.name << ',' << buf << ',' << row.result.n_actual << ','
           << row.result.n_detected << '\n';
    }
    return os.str();
}

inline std::string comparison_json(const std::vector<ComparisonRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        arr.push_back({{"name", row.name},
                       {"pfom", row.result.score},
                       {"n_actual", row.result.n_actual},
                       {"n_detected", row.result.n_detected}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace vosedge
