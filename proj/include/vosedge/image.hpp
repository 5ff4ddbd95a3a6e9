#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "vosedge/errors.hpp"

namespace vosedge {

/// One pixel of a color image: an RGB vector with 8 bits per channel.
struct PixelVector {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const PixelVector&, const PixelVector&) = default;
};

/// Row-major raster of T. Rasters are filled at construction and treated as
/// immutable by every pipeline stage, so const references are safe to share
/// across worker threads.
template <typename T>
class Raster {
public:
    Raster() = default;

    Raster(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        if (width < 1 || height < 1) {
            throw std::invalid_argument("Raster: dimensions must be >= 1, got " +
                                        std::to_string(width) + "x" + std::to_string(height));
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t size() const noexcept { return data_.size(); }

    bool in_bounds(int x, int y) const noexcept {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    bool same_size(const Raster& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    T& at(int x, int y) {
        assert(in_bounds(x, y));
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }
    const T& at(int x, int y) const {
        assert(in_bounds(x, y));
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }

    T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
    const T* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// The input data model: a vector field mapping each pixel to its RGB vector.
using ColorImage = Raster<PixelVector>;

/// Real-valued plane (vector-range field, gradient magnitude, distances, ...).
using ScalarPlane = Raster<double>;

/// Grayscale image with real intensities in [0, 255].
using GrayImage = Raster<double>;

/// Binary edge map; nonzero = edge pixel.
using EdgeMap = Raster<std::uint8_t>;

inline std::int64_t count_edges(const EdgeMap& map) {
    std::int64_t n = 0;
    for (std::uint8_t v : map.data()) n += (v != 0);
    return n;
}

/// How window extraction and kernels treat coordinates outside the image.
enum class BorderPolicy {
    Replicate,  // clamp to the nearest edge pixel
    Reflect,    // mirror about the edge pixel (no edge duplication)
    ZeroPad,    // outside pixels read as zero
};

inline int clamp_coord(int i, int n) {
    return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

inline int reflect_coord(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

/// Reads a raster at (x, y) with the given border policy.
template <typename T>
T sample(const Raster<T>& img, int x, int y, BorderPolicy policy) {
    if (img.in_bounds(x, y)) return img.at(x, y);
    switch (policy) {
        case BorderPolicy::Replicate:
            return img.at(clamp_coord(x, img.width()), clamp_coord(y, img.height()));
        case BorderPolicy::Reflect:
            return img.at(reflect_coord(x, img.width()), reflect_coord(y, img.height()));
        case BorderPolicy::ZeroPad:
            return T{};
    }
    return T{};
}

/// A 3x3 pixel neighborhood in row-major order; the center is cells[4].
struct Window3x3 {
    static constexpr int kCenter = 4;

    std::array<PixelVector, 9> cells{};

    PixelVector center() const { return cells[kCenter]; }
};

/// Returns the 3x3 window centered at (x, y). The center must lie inside the
/// image; out-of-image neighbors are filled per the border policy.
inline Window3x3 extract_window(const ColorImage& img, int x, int y, BorderPolicy policy) {
    if (!img.in_bounds(x, y)) {
        throw OutOfBoundsError("extract_window: center (" + std::to_string(x) + ", " +
                               std::to_string(y) + ") outside " + std::to_string(img.width()) +
                               "x" + std::to_string(img.height()) + " image");
    }
    Window3x3 w;
    int i = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            w.cells[i++] = sample(img, x + dx, y + dy, policy);
        }
    }
    return w;
}

/// BT.601 luma of one pixel, kept real (not rounded).
inline double luma(PixelVector p) {
    return 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
}

inline GrayImage to_grayscale(const ColorImage& img) {
    GrayImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        out.data()[i] = luma(img.data()[i]);
    }
    return out;
}

}  // namespace vosedge
