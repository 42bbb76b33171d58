#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace elas {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

class CalibrationError : public std::runtime_error {
public:
    explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

// 3x3 planar homography, row-major. Must be invertible.
class Homography {
public:
    Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}
    explicit Homography(const std::array<double, 9>& rowMajor) : m_(rowMajor) {
        if (std::abs(det()) < 1e-9) throw CalibrationError("Homography: matrix is singular");
    }

    static Homography identity() { return Homography(); }
    static Homography translation(double tx, double ty) {
        return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1});
    }
    // Least-squares-free exact solve from 4 point correspondences (8x8 system).
    static Homography from_quad(const std::array<Point2, 4>& src, const std::array<Point2, 4>& dst);

    double det() const {
        return m_[0] * (m_[4] * m_[8] - m_[5] * m_[7]) - m_[1] * (m_[3] * m_[8] - m_[5] * m_[6]) +
               m_[2] * (m_[3] * m_[7] - m_[4] * m_[6]);
    }

    Homography inverse() const;

    Point2 apply(const Point2& p) const {
        double w = m_[6] * p.x + m_[7] * p.y + m_[8];
        if (std::abs(w) < 1e-12) throw CalibrationError("Homography: point maps to infinity");
        return {(m_[0] * p.x + m_[1] * p.y + m_[2]) / w, (m_[3] * p.x + m_[4] * p.y + m_[5]) / w};
    }

    const std::array<double, 9>& coeffs() const { return m_; }

private:
    std::array<double, 9> m_;
};

// Degrees in [0, 180) for the direction of (dx, dy), image coordinates (y down).
// A vertical segment maps to 90, a horizontal one to 0.
inline double direction_angle_deg(double dx, double dy) {
    double a = std::atan2(-dy, dx) * 180.0 / M_PI;
    a = std::fmod(a + 360.0, 180.0);
    return a;
}

}  // namespace elas
