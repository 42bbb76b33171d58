#pragma once

#include <cmath>

namespace elas {

// Per-frame lane observation. p_b / p_t are the columns where the lane center
// crosses the bottom and top image rows, width is measured at the bottom row.
struct LaneMeasurement {
    enum class Source { Pair, SingleLeft, SingleRight, CarryOver };
    double p_b = 0;
    double p_t = 0;
    double width = 0;
    double theta = 90;
    Source source = Source::Pair;

    bool from_single_line() const {
        return source == Source::SingleLeft || source == Source::SingleRight;
    }
};

// Kalman-smoothed near-field lane description.
struct LaneBase {
    double p_b = 0;
    double p_t = 0;
    double width = 0;

    double theta(int ipm_height) const {
        return std::atan2(double(ipm_height - 1), p_t - p_b) * 180.0 / M_PI;
    }
};

// Final lane estimate: a spline through three control points at fixed rows
// (bottom, middle, top), with a linearly interpolated width profile.
struct LaneEstimate {
    double x1 = 0, x2 = 0, x3 = 0;  // center columns at rows y1 > y2 > y3
    double y1 = 0, y2 = 0, y3 = 0;
    double w1 = 0, w2 = 0;  // bottom and top lane widths
    int trust_h = 0;        // rows from the bottom considered reliable
    double theta = 90;      // base direction, degrees

    // Quadratic interpolation through the three control points.
    double center_at(double y) const {
        double d1 = (y - y2) * (y - y3) / ((y1 - y2) * (y1 - y3));
        double d2 = (y - y1) * (y - y3) / ((y2 - y1) * (y2 - y3));
        double d3 = (y - y1) * (y - y2) / ((y3 - y1) * (y3 - y2));
        return x1 * d1 + x2 * d2 + x3 * d3;
    }
    double width_at(double y) const {
        double t = (y1 - y) / (y1 - y3);
        return w1 + (w2 - w1) * t;
    }
    double left_at(double y) const { return center_at(y) - width_at(y) * 0.5; }
    double right_at(double y) const { return center_at(y) + width_at(y) * 0.5; }
};

}  // namespace elas
