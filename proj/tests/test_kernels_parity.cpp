// The OpenMP kernels must match the serial references exactly: every loop is
// a pure per-pixel map or an integer reduction, so there is no tolerance here.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "elas/kernels.hpp"
#include "test_util.hpp"

using namespace elas;
namespace k = elas::kernels;

TEST_CASE("warp_gray parity") {
    Rng rng(1);
    GrayImage img = testutil::random_gray(160, 120, rng);
    std::array<Point2, 4> src = {{{0, 0}, {159, 0}, {159, 119}, {0, 119}}};
    std::array<Point2, 4> dst = {{{5, 3}, {150, 8}, {148, 110}, {9, 115}}};
    Homography inv = Homography::from_quad(src, dst).inverse();
    CHECK(k::warp_gray(img, inv, 160, 120).data == k::serial::warp_gray(img, inv, 160, 120).data);
}

TEST_CASE("step_row_filter parity") {
    Rng rng(2);
    GrayImage img = testutil::random_gray(200, 150, rng);
    CHECK(k::step_row_filter(img, 5, 25, 30).data == k::serial::step_row_filter(img, 5, 25, 30).data);
}

TEST_CASE("conv1d parity") {
    Rng rng(3);
    GrayImage img = testutil::random_gray(200, 80, rng);
    std::vector<float> kernel;
    for (int i = -10; i <= 10; ++i) kernel.push_back(float(std::exp(-i * i / 8.0) - std::exp(-i * i / 72.0)));
    CHECK(k::conv1d_h_threshold(img, kernel, 20).data == k::serial::conv1d_h_threshold(img, kernel, 20).data);
}

TEST_CASE("vertical derivative parity") {
    Rng rng(4);
    GrayImage img = testutil::random_gray(100, 100, rng);
    CHECK(k::vertical_abs_derivative(img, 20).data == k::serial::vertical_abs_derivative(img, 20).data);
}

TEST_CASE("morphology parity") {
    Rng rng(5);
    BinaryMap m = testutil::random_map(90, 70, 0.3, rng);
    CHECK(k::dilate(m, 5, 3).data == k::serial::dilate(m, 5, 3).data);
    CHECK(k::erode(m, 3, 5).data == k::serial::erode(m, 3, 5).data);
}

TEST_CASE("masked stats parity") {
    Rng rng(6);
    GrayImage img = testutil::random_gray(128, 96, rng);
    BinaryMap mask = testutil::random_map(128, 96, 0.4, rng);
    double m1, s1, m2, s2;
    REQUIRE(k::masked_stats(img, mask, true, m1, s1));
    REQUIRE(k::serial::masked_stats(img, mask, true, m2, s2));
    CHECK(m1 == m2);
    CHECK(s1 == s2);
    REQUIRE(k::masked_stats(img, mask, false, m1, s1));
    REQUIRE(k::serial::masked_stats(img, mask, false, m2, s2));
    CHECK(m1 == m2);
    CHECK(s1 == s2);
}
