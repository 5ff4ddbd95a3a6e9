#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "vosedge/errors.hpp"
#include "vosedge/image.hpp"

namespace vosedge {

namespace detail {

struct FileHandle {
    std::FILE* fp = nullptr;
    ~FileHandle() {
        if (fp) std::fclose(fp);
    }
};

inline std::string lower_extension(const std::string& path) {
    std::string ext = std::filesystem::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// Skips PNM whitespace and '#' comment lines, then parses one decimal field.
inline int read_pnm_int(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) {
        throw CorruptDataError(path + ": malformed PNM header");
    }
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1'000'000'000L) throw CorruptDataError(path + ": PNM header field too large");
        c = in.get();
    }
    return static_cast<int>(value);
}

inline ColorImage load_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");

    char magic[2] = {0, 0};
    in.read(magic, 2);
    const bool color = magic[0] == 'P' && magic[1] == '6';
    const bool gray = magic[0] == 'P' && magic[1] == '5';
    if (!color && !gray) throw UnsupportedFormatError(path + ": not a P6/P5 PNM file");

    const int width = read_pnm_int(in, path);
    const int height = read_pnm_int(in, path);
    const int maxval = read_pnm_int(in, path);
    if (width < 1 || height < 1) throw CorruptDataError(path + ": bad PNM dimensions");
    if (maxval != 255) {
        throw UnsupportedFormatError(path + ": only 8-bit PNM supported (maxval 255, got " +
                                     std::to_string(maxval) + ")");
    }
    // read_pnm_int consumed the single whitespace byte after maxval

    const std::size_t channels = color ? 3 : 1;
    std::vector<char> raw(static_cast<std::size_t>(width) * height * channels);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw CorruptDataError(path + ": truncated PNM payload");
    }

    ColorImage img(width, height);
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (color) {
            img.data()[i] = {static_cast<std::uint8_t>(raw[i * 3]),
                             static_cast<std::uint8_t>(raw[i * 3 + 1]),
                             static_cast<std::uint8_t>(raw[i * 3 + 2])};
        } else {
            const auto v = static_cast<std::uint8_t>(raw[i]);
            img.data()[i] = {v, v, v};
        }
    }
    return img;
}

inline ColorImage load_png(const std::string& path) {
    FileHandle file;
    file.fp = std::fopen(path.c_str(), "rb");
    if (!file.fp) throw IoError(path + ": cannot open for reading");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError(path + ": libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError(path + ": libpng init failed");
    }

    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    ColorImage img;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw CorruptDataError(path + ": PNG decode failed");
    }

    png_init_io(png, file.fp);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (bit_depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormatError(path + ": 16-bit PNG rejected (8-bit only)");
    }
    if (width < 1 || height < 1 || width > 1'000'000 || height > 1'000'000) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw CorruptDataError(path + ": bad PNG dimensions");
    }

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    if (png_get_rowbytes(png, info) != static_cast<std::size_t>(width) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormatError(path + ": unsupported PNG layout");
    }

    // png_read_image handles interlaced files, so decode the whole frame.
    const std::size_t stride = static_cast<std::size_t>(width) * 3;
    pixels.resize(stride * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    img = ColorImage(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t i = 0; i < img.size(); ++i) {
        img.data()[i] = {pixels[i * 3], pixels[i * 3 + 1], pixels[i * 3 + 2]};
    }
    return img;
}

// rows: packed 8-bit samples, `channels` per pixel (1 = gray, 3 = RGB).
inline void save_png_bytes(const std::string& path, int width, int height, int channels,
                           const std::vector<std::uint8_t>& bytes) {
    FileHandle file;
    file.fp = std::fopen(path.c_str(), "wb");
    if (!file.fp) throw IoError(path + ": cannot open for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError(path + ": libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError(path + ": libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError(path + ": PNG encode failed");
    }

    png_init_io(png, file.fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y) {
        png_write_row(png, const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * stride));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

inline void save_pnm_bytes(const std::string& path, int width, int height, int channels,
                           const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << (channels == 3 ? "P6" : "P5") << '\n' << width << ' ' << height << '\n' << "255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path + ": write failed");
}

inline void save_bytes(const std::string& path, int width, int height, int channels,
                       const std::vector<std::uint8_t>& bytes) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") {
        save_png_bytes(path, width, height, channels, bytes);
    } else if (ext == ".ppm" && channels == 3) {
        save_pnm_bytes(path, width, height, channels, bytes);
    } else if (ext == ".pgm" && channels == 1) {
        save_pnm_bytes(path, width, height, channels, bytes);
    } else {
        throw IoError(path + ": unsupported output extension for this image type");
    }
}

}  // namespace detail

/// Loads an 8-bit PNG (RGB, RGBA with alpha dropped, gray or palette
/// expanded) or a binary PPM P6 / PGM P5 file. 16-bit sources are rejected.
inline ColorImage load_image(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        throw FileNotFoundError(path + ": no such file");
    }
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError(path + ": cannot open for reading");
    unsigned char magic[8] = {0};
    probe.read(reinterpret_cast<char*>(magic), 8);
    probe.close();

    static const unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (std::equal(std::begin(kPngSig), std::end(kPngSig), magic)) {
        return detail::load_png(path);
    }
    if (magic[0] == 'P' && (magic[1] == '6' || magic[1] == '5')) {
        return detail::load_pnm(path);
    }
    throw UnsupportedFormatError(path + ": unrecognized format (need 8-bit PNG, P6 PPM or P5 PGM)");
}

/// Writes a color image as PNG (.png) or binary PPM (.ppm).
inline void save_image(const ColorImage& img, const std::string& path) {
    std::vector<std::uint8_t> bytes(img.size() * 3);
    for (std::size_t i = 0; i < img.size(); ++i) {
        bytes[i * 3] = img.data()[i].r;
        bytes[i * 3 + 1] = img.data()[i].g;
        bytes[i * 3 + 2] = img.data()[i].b;
    }
    detail::save_bytes(path, img.width(), img.height(), 3, bytes);
}

/// Writes a grayscale image as PNG (.png) or binary PGM (.pgm); values are
/// rounded and clamped to [0, 255].
inline void save_image(const GrayImage& img, const std::string& path) {
    std::vector<std::uint8_t> bytes(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double v = std::round(img.data()[i]);
        bytes[i] = v <= 0.0 ? 0 : (v >= 255.0 ? 255 : static_cast<std::uint8_t>(v));
    }
    detail::save_bytes(path, img.width(), img.height(), 1, bytes);
}

/// Writes an edge map as PNG (.png) or binary PGM (.pgm): edge pixels white
/// (255), everything else black (0).
inline void save_image(const EdgeMap& map, const std::string& path) {
    std::vector<std::uint8_t> bytes(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        bytes[i] = map.data()[i] ? 255 : 0;
    }
    detail::save_bytes(path, map.width(), map.height(), 1, bytes);
}

/// Reads an image as a binary edge map: a pixel is an edge iff its luma
/// exceeds 127 (round-trips the 0/255 encoding of save_image).
inline EdgeMap load_edge_map(const std::string& path) {
    const ColorImage img = load_image(path);
    EdgeMap map(img.width(), img.height(), 0);
    for (std::size_t i = 0; i < img.size(); ++i) {
        map.data()[i] = luma(img.data()[i]) > 127.0 ? 1 : 0;
    }
    return map;
}

}  // namespace vosedge
