#pragma once

#include <stdexcept>
#include <string>

#include "elas/image.hpp"

namespace elas {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// PNG input is normalized: 16-bit is stripped, palette expanded, alpha dropped.
GrayImage read_png_gray(const std::string& path);
ColorImage read_png_color(const std::string& path);

void write_png(const std::string& path, const GrayImage& img);
void write_png(const std::string& path, const ColorImage& img);
void write_png(const std::string& path, const BinaryMap& map);  // 0/255

}  // namespace elas
