#pragma once

#include <vector>

#include "elas/geometry.hpp"
#include "elas/image.hpp"

namespace elas::kernels {

// Hot pixel loops of the pipeline. These run OpenMP-parallel; every kernel has
// a plain serial twin in kernels::serial that tests compare against and the
// kernel benchmark times. Results are identical: loops are pure per-pixel maps
// or integer reductions.

// Inverse-mapped warp with bilinear sampling; pixels falling outside the
// source are 0. inv maps destination coordinates to source coordinates.
GrayImage warp_gray(const GrayImage& src, const Homography& inv, int out_w, int out_h);
ColorImage warp_color(const ColorImage& src, const Homography& inv, int out_w, int out_h);
// Binary maps are warped as 0/255 intensities and re-thresholded at 128.
BinaryMap warp_binary(const BinaryMap& src, const Homography& inv, int out_w, int out_h);

// Step row filter y = 2x_i - (x_{i-t} + x_{i+t}) - |x_{i-t} - x_{i+t}| with the
// half-width t interpolated linearly from tau_top (row 0) to tau_bottom
// (bottom row). Columns closer than t to either edge stay 0.
BinaryMap step_row_filter(const GrayImage& img, int tau_top, int tau_bottom, int thresh);

// 1-D horizontal convolution followed by a threshold (response > thresh).
BinaryMap conv1d_h_threshold(const GrayImage& img, const std::vector<float>& kernel, float thresh);

// Central vertical derivative |I(x,y+1) - I(x,y-1)|/2 > thresh.
BinaryMap vertical_abs_derivative(const GrayImage& img, float thresh);

// Rectangular structuring element, odd dimensions. Out-of-bounds samples are
// ignored (dilate ORs, erode ANDs over the in-bounds support).
BinaryMap dilate(const BinaryMap& map, int kw, int kh);
BinaryMap erode(const BinaryMap& map, int kw, int kh);

// Mean/stddev of img intensities over pixels selected by (mask == select).
// Returns false when no pixel is selected.
bool masked_stats(const GrayImage& img, const BinaryMap& mask, bool select, double& mean, double& stddev);

BinaryMap binary_and(const BinaryMap& a, const BinaryMap& b);
BinaryMap binary_or(const BinaryMap& a, const BinaryMap& b);

GrayImage luma(const ColorImage& img);
GrayImage resize_nearest(const GrayImage& img, int out_w, int out_h);
GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h);
ColorImage resize_nearest(const ColorImage& img, int out_w, int out_h);
ColorImage resize_bilinear(const ColorImage& img, int out_w, int out_h);

namespace serial {

GrayImage warp_gray(const GrayImage& src, const Homography& inv, int out_w, int out_h);
BinaryMap step_row_filter(const GrayImage& img, int tau_top, int tau_bottom, int thresh);
BinaryMap conv1d_h_threshold(const GrayImage& img, const std::vector<float>& kernel, float thresh);
BinaryMap vertical_abs_derivative(const GrayImage& img, float thresh);
BinaryMap dilate(const BinaryMap& map, int kw, int kh);
BinaryMap erode(const BinaryMap& map, int kw, int kh);
bool masked_stats(const GrayImage& img, const BinaryMap& mask, bool select, double& mean, double& stddev);

}  // namespace serial

}  // namespace elas::kernels
