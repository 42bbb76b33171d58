#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace elas {

// Row-major 8-bit single-channel raster. Origin top-left, y grows downward.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, uint8_t fill = 0) : width(w), height(h), data(size_t(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("GrayImage: dimensions must be positive");
    }

    uint8_t at(int x, int y) const { return data[size_t(y) * width + x]; }
    uint8_t& at(int x, int y) { return data[size_t(y) * width + x]; }
    bool inside(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    size_t pixels() const { return data.size(); }

    bool same_shape(const GrayImage& o) const { return width == o.width && height == o.height; }
};

// Binary raster; nonzero pixels are "evidences".
struct BinaryMap {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;  // 0 or 1

    BinaryMap() = default;
    BinaryMap(int w, int h, uint8_t fill = 0) : width(w), height(h), data(size_t(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("BinaryMap: dimensions must be positive");
    }

    uint8_t at(int x, int y) const { return data[size_t(y) * width + x]; }
    uint8_t& at(int x, int y) { return data[size_t(y) * width + x]; }
    bool inside(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    void set(int x, int y, bool v) { data[size_t(y) * width + x] = v ? 1 : 0; }
    size_t count() const {
        size_t n = 0;
        for (uint8_t v : data) n += (v != 0);
        return n;
    }
    bool empty_map() const { return count() == 0; }
    bool same_shape(const BinaryMap& o) const { return width == o.width && height == o.height; }
    bool same_shape(const GrayImage& o) const { return width == o.width && height == o.height; }
};

// Interleaved RGB, 8 bits per channel.
struct ColorImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;  // r,g,b per pixel

    ColorImage() = default;
    ColorImage(int w, int h) : width(w), height(h), data(size_t(w) * h * 3, 0) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("ColorImage: dimensions must be positive");
    }

    const uint8_t* px(int x, int y) const { return &data[(size_t(y) * width + x) * 3]; }
    uint8_t* px(int x, int y) { return &data[(size_t(y) * width + x) * 3]; }
    bool inside(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

struct Rect {
    int x = 0, y = 0, width = 0, height = 0;
    bool contains(int px, int py) const {
        return px >= x && px < x + width && py >= y && py < y + height;
    }
    Rect dilated(int margin, int clamp_w, int clamp_h) const {
        Rect r;
        r.x = std::max(0, x - margin);
        r.y = std::max(0, y - margin);
        r.width = std::min(clamp_w, x + width + margin) - r.x;
        r.height = std::min(clamp_h, y + height + margin) - r.y;
        return r;
    }
};

}  // namespace elas
