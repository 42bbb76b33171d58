#pragma once

#include <optional>
#include <vector>

#include "elas/geometry.hpp"
#include "elas/image.hpp"
#include "elas/rng.hpp"

namespace elas {

// A probabilistic-Hough line segment. rho/theta describe the infinite line:
// rho is the column where it crosses the bottom image row, theta the direction
// angle in degrees, theta in [0, 180).
struct HoughLine {
    double rho = 0.0;
    double theta = 90.0;
    Point2 p0, p1;   // segment endpoints
    int support = 0; // evidences within 1 px of the segment

    // Column of the infinite line at a given row.
    double x_at(double y, int image_height) const;
};

struct HoughParams {
    double theta_res_deg = 1.0;
    int min_votes = 20;
    int min_length = 20;
    int max_gap = 5;
    uint64_t seed = 1;
};

// Warp with inverse mapping and bilinear interpolation. h maps source
// coordinates into destination (IPM) coordinates.
GrayImage warp_ipm(const GrayImage& img, const Homography& h, int out_w, int out_h);
ColorImage warp_ipm(const ColorImage& img, const Homography& h, int out_w, int out_h);
BinaryMap warp_ipm(const BinaryMap& map, const Homography& h, int out_w, int out_h);

std::vector<HoughLine> hough_lines_probabilistic(const BinaryMap& map, const HoughParams& params);

// Count of evidences within max_dist of the segment (perpendicular), used both
// to fill HoughLine::support and by tests to re-check it.
int segment_support(const BinaryMap& map, const Point2& p0, const Point2& p1, double max_dist);

// Iterative 8-connectivity thinning (Zhang-Suen). Result is a subset of the
// input with stroke width <= 2 and the same component count.
BinaryMap skeletonize(const BinaryMap& map);

enum class MorphOp { Close, Erode, Dilate };
BinaryMap morph(const BinaryMap& map, MorphOp op, int kw, int kh);

// Normalized cross-correlation of two same-sized patches. Zero-variance
// candidate scores 0 by convention.
double ncc(const GrayImage& candidate, const BinaryMap& tmpl);

// In-place rotation of a binary map around its center, nearest-neighbor.
BinaryMap rotate_binary(const BinaryMap& map, double angle_deg);

}  // namespace elas
