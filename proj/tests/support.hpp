// Shared test utilities: brute-force oracles kept independent of the library
// implementations they check, plus fixture generators.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "vosedge/image.hpp"

namespace testsupport {

// --- oracles -------------------------------------------------------------

// Naive O(81) aggregate distance sums: for each cell, sum the Euclidean
// distance to every cell of the window in index order.
inline std::array<double, 9> brute_force_distance_sums(const vosedge::Window3x3& w) {
    std::array<double, 9> sums{};
    for (int i = 0; i < 9; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 9; ++j) {
            const double dr = static_cast<double>(w.cells[i].r) - w.cells[j].r;
            const double dg = static_cast<double>(w.cells[i].g) - w.cells[j].g;
            const double db = static_cast<double>(w.cells[i].b) - w.cells[j].b;
            acc += std::sqrt(dr * dr + dg * dg + db * db);
        }
        sums[static_cast<std::size_t>(i)] = acc;
    }
    return sums;
}

// Stable sort of window indices by (sum, index).
inline std::array<int, 9> brute_force_order(const vosedge::Window3x3& w) {
    const auto sums = brute_force_distance_sums(w);
    std::array<std::pair<double, int>, 9> keyed;
    for (int i = 0; i < 9; ++i) keyed[static_cast<std::size_t>(i)] = {sums[static_cast<std::size_t>(i)], i};
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::array<int, 9> order;
    for (int i = 0; i < 9; ++i) order[static_cast<std::size_t>(i)] = keyed[static_cast<std::size_t>(i)].second;
    return order;
}

inline double brute_force_vector_range(const vosedge::Window3x3& w) {
    const auto order = brute_force_order(w);
    const vosedge::PixelVector lo = w.cells[static_cast<std::size_t>(order[0])];
    const vosedge::PixelVector hi = w.cells[static_cast<std::size_t>(order[8])];
    const double dr = static_cast<double>(hi.r) - lo.r;
    const double dg = static_cast<double>(hi.g) - lo.g;
    const double db = static_cast<double>(hi.b) - lo.b;
    return std::sqrt(dr * dr + dg * dg + db * db);
}

// Exact nearest-edge-pixel distance by scanning every pixel of the map.
inline double brute_force_nearest_distance(const vosedge::EdgeMap& truth, int x, int y) {
    std::int64_t best = -1;
    for (int ty = 0; ty < truth.height(); ++ty) {
        for (int tx = 0; tx < truth.width(); ++tx) {
            if (!truth.at(tx, ty)) continue;
            const std::int64_t dx = tx - x;
            const std::int64_t dy = ty - y;
            const std::int64_t d2 = dx * dx + dy * dy;
            if (best < 0 || d2 < best) best = d2;
        }
    }
    return best < 0 ? -1.0 : std::sqrt(static_cast<double>(best));
}

// --- generators ----------------------------------------------------------

inline vosedge::PixelVector random_pixel(std::mt19937_64& rng) {
    return {static_cast<std::uint8_t>(rng() & 0xff), static_cast<std::uint8_t>(rng() & 0xff),
            static_cast<std::uint8_t>(rng() & 0xff)};
}

inline vosedge::Window3x3 random_window(std::mt19937_64& rng, int distinct_values = 256) {
    vosedge::Window3x3 w;
    std::uniform_int_distribution<int> pick(0, distinct_values - 1);
    for (auto& cell : w.cells) {
        cell = {static_cast<std::uint8_t>(pick(rng)), static_cast<std::uint8_t>(pick(rng)),
                static_cast<std::uint8_t>(pick(rng))};
    }
    return w;
}

inline vosedge::ColorImage random_image(std::mt19937_64& rng, int width, int height) {
    vosedge::ColorImage img(width, height);
    for (auto& p : img.data()) p = random_pixel(rng);
    return img;
}

inline vosedge::EdgeMap random_edge_map(std::mt19937_64& rng, int width, int height,
                                        double density) {
    vosedge::EdgeMap map(width, height, 0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (auto& v : map.data()) v = coin(rng) < density ? 1 : 0;
    return map;
}

// Ensures at least one edge pixel so distance transforms are defined.
inline vosedge::EdgeMap random_nonempty_edge_map(std::mt19937_64& rng, int width, int height,
                                                 double density) {
    vosedge::EdgeMap map = random_edge_map(rng, width, height, density);
    if (vosedge::count_edges(map) == 0) {
        map.at(static_cast<int>(rng() % static_cast<std::uint64_t>(width)),
               static_cast<int>(rng() % static_cast<std::uint64_t>(height))) = 1;
    }
    return map;
}

// --- geometry helpers ----------------------------------------------------

// Clockwise quarter turn; output dimensions are swapped.
template <typename T>
vosedge::Raster<T> rot90cw(const vosedge::Raster<T>& in) {
    vosedge::Raster<T> out(in.height(), in.width());
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            out.at(x, y) = in.at(y, in.height() - 1 - x);
        }
    }
    return out;
}

// --- filesystem ----------------------------------------------------------

struct TempDir {
    std::filesystem::path path;

    TempDir() {
        std::random_device rd;
        path = std::filesystem::temp_directory_path() /
               ("vosedge_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testsupport
