#include "elas/geometry.hpp"

#include <Eigen/Dense>

namespace elas {

Homography Homography::inverse() const {
    Eigen::Matrix3d m;
    m << m_[0], m_[1], m_[2], m_[3], m_[4], m_[5], m_[6], m_[7], m_[8];
    if (std::abs(m.determinant()) < 1e-9) throw CalibrationError("Homography: matrix is singular");
    Eigen::Matrix3d inv = m.inverse();
    std::array<double, 9> out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out[size_t(r * 3 + c)] = inv(r, c);
    return Homography(out);
}

Homography Homography::from_quad(const std::array<Point2, 4>& src, const std::array<Point2, 4>& dst) {
    // Standard DLT with h22 fixed to 1: 8 equations, 8 unknowns.
    Eigen::Matrix<double, 8, 8> A = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> b;
    for (int i = 0; i < 4; ++i) {
        double x = src[size_t(i)].x, y = src[size_t(i)].y;
        double u = dst[size_t(i)].x, v = dst[size_t(i)].y;
        A(2 * i, 0) = x;
        A(2 * i, 1) = y;
        A(2 * i, 2) = 1;
        A(2 * i, 6) = -u * x;
        A(2 * i, 7) = -u * y;
        b(2 * i) = u;
        A(2 * i + 1, 3) = x;
        A(2 * i + 1, 4) = y;
        A(2 * i + 1, 5) = 1;
        A(2 * i + 1, 6) = -v * x;
        A(2 * i + 1, 7) = -v * y;
        b(2 * i + 1) = v;
    }
    Eigen::Matrix<double, 8, 1> h = A.fullPivLu().solve(b);
    return Homography({h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0});
}

}  // namespace elas
