#include "elas/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

namespace elas {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

// Reads any PNG into 8-bit rows with the requested channel count (1 or 3).
std::vector<std::vector<uint8_t>> read_rows(const std::string& path, int channels, int& w, int& h) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    std::vector<std::vector<uint8_t>> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_packing(png);
    int color = png_get_color_type(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (channels == 1)
        png_set_rgb_to_gray(png, 1, -1, -1);
    else if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    w = int(png_get_image_width(png, info));
    h = int(png_get_image_height(png, info));
    rows.assign(size_t(h), std::vector<uint8_t>(png_get_rowbytes(png, info)));
    std::vector<png_bytep> ptrs;
    ptrs.resize(size_t(h));
    for (int y = 0; y < h; ++y) ptrs[size_t(y)] = rows[size_t(y)].data();
    png_read_image(png, ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return rows;
}

void write_rows(const std::string& path, const uint8_t* data, int w, int h, int channels) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(w), png_uint_32(h), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> ptrs;
    ptrs.resize(size_t(h));
    for (int y = 0; y < h; ++y) ptrs[size_t(y)] = const_cast<uint8_t*>(data) + size_t(y) * w * channels;
    png_write_image(png, ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

GrayImage read_png_gray(const std::string& path) {
    int w = 0, h = 0;
    auto rows = read_rows(path, 1, w, h);
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        std::copy(rows[size_t(y)].begin(), rows[size_t(y)].begin() + w, img.data.begin() + size_t(y) * w);
    return img;
}

ColorImage read_png_color(const std::string& path) {
    int w = 0, h = 0;
    auto rows = read_rows(path, 3, w, h);
    ColorImage img(w, h);
    for (int y = 0; y < h; ++y)
        std::copy(rows[size_t(y)].begin(), rows[size_t(y)].begin() + size_t(w) * 3,
                  img.data.begin() + size_t(y) * w * 3);
    return img;
}

void write_png(const std::string& path, const GrayImage& img) {
    write_rows(path, img.data.data(), img.width, img.height, 1);
}

void write_png(const std::string& path, const ColorImage& img) {
    write_rows(path, img.data.data(), img.width, img.height, 3);
}

void write_png(const std::string& path, const BinaryMap& map) {
    GrayImage img(map.width, map.height);
    for (size_t i = 0; i < map.data.size(); ++i) img.data[i] = map.data[i] ? 255 : 0;
    write_rows(path, img.data.data(), img.width, img.height, 1);
}

}  // namespace elas
