#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "elas/imaging.hpp"
#include "test_util.hpp"

using namespace elas;

namespace {

// Independent 8x8 Gaussian-elimination solve of the homography system,
// used as the oracle for the quad-mapping warp test.
std::array<double, 9> solve_quad_oracle(const std::array<Point2, 4>& src, const std::array<Point2, 4>& dst) {
    double A[8][9] = {};
    for (int i = 0; i < 4; ++i) {
        double x = src[size_t(i)].x, y = src[size_t(i)].y;
        double u = dst[size_t(i)].x, v = dst[size_t(i)].y;
        double r0[9] = {x, y, 1, 0, 0, 0, -u * x, -u * y, u};
        double r1[9] = {0, 0, 0, x, y, 1, -v * x, -v * y, v};
        for (int c = 0; c < 9; ++c) {
            A[2 * i][c] = r0[c];
            A[2 * i + 1][c] = r1[c];
        }
    }
    for (int col = 0; col < 8; ++col) {
        int piv = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[piv], A[col]);
        for (int r = 0; r < 8; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            for (int c = col; c < 9; ++c) A[r][c] -= f * A[col][c];
        }
    }
    std::array<double, 9> h;
    for (int i = 0; i < 8; ++i) h[size_t(i)] = A[i][8] / A[i][i];
    h[8] = 1.0;
    return h;
}

// Full standard Hough accumulator (normal parameterization), the oracle for
// the probabilistic transform.
struct AccuOracle {
    int n_theta = 180;
    int diag;
    std::vector<int> acc;
    explicit AccuOracle(const BinaryMap& m) : diag(int(std::ceil(std::hypot(m.width, m.height)))) {
        acc.assign(size_t(n_theta) * (2 * diag + 1), 0);
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x) {
                if (!m.at(x, y)) continue;
                for (int t = 0; t < n_theta; ++t) {
                    double a = t * M_PI / 180.0;
                    int r = int(std::lround(x * std::cos(a) + y * std::sin(a)));
                    acc[size_t(t) * (2 * diag + 1) + size_t(r + diag)]++;
                }
            }
    }
    int votes(double theta_normal_deg, double r) const {
        int t = int(std::lround(theta_normal_deg));
        t = ((t % 180) + 180) % 180;
        int ri = std::clamp(int(std::lround(r)) + diag, 0, 2 * diag);
        return acc[size_t(t) * (2 * diag + 1) + size_t(ri)];
    }
};

}  // namespace

TEST_CASE("warp: identity homography returns the input") {
    Rng rng(7);
    GrayImage img = testutil::random_gray(64, 48, rng);
    GrayImage out = warp_ipm(img, Homography::identity(), 64, 48);
    CHECK(out.data == img.data);
}

TEST_CASE("warp: pure horizontal translation shifts columns") {
    Rng rng(8);
    GrayImage img = testutil::random_gray(120, 40, rng);
    // H maps src -> dst as x+10, so output column k+10 equals input column k.
    GrayImage out = warp_ipm(img, Homography::translation(10, 0), 120, 40);
    for (int y = 0; y < 40; ++y)
        for (int x = 10; x < 120; ++x) CHECK(out.at(x, y) == img.at(x - 10, y));
}

TEST_CASE("warp: 4-point quad mapping lands corners on targets") {
    std::array<Point2, 4> src = {{{0, 0}, {639, 0}, {639, 479}, {0, 479}}};
    std::array<Point2, 4> dst = {{{100, 30}, {540, 25}, {610, 460}, {40, 470}}};
    Homography h = Homography::from_quad(src, dst);
    auto oracle = solve_quad_oracle(src, dst);
    for (int i = 0; i < 4; ++i) {
        Point2 p = h.apply(src[size_t(i)]);
        CHECK(std::abs(p.x - dst[size_t(i)].x) < 0.5);
        CHECK(std::abs(p.y - dst[size_t(i)].y) < 0.5);
        // and the independently solved matrix agrees
        double w = oracle[6] * src[size_t(i)].x + oracle[7] * src[size_t(i)].y + oracle[8];
        double ox = (oracle[0] * src[size_t(i)].x + oracle[1] * src[size_t(i)].y + oracle[2]) / w;
        double oy = (oracle[3] * src[size_t(i)].x + oracle[4] * src[size_t(i)].y + oracle[5]) / w;
        CHECK(std::abs(p.x - ox) < 1e-6);
        CHECK(std::abs(p.y - oy) < 1e-6);
    }
}

TEST_CASE("warp: round trip through H then H^-1 is close to identity") {
    Rng rng(9);
    GrayImage img(200, 150, 100);
    for (int i = 0; i < 40; ++i)
        testutil::fill_rect(img, int(rng.below(180)), int(rng.below(130)), 12, 12, uint8_t(rng.below(256)));
    std::array<Point2, 4> src = {{{0, 0}, {199, 0}, {199, 149}, {0, 149}}};
    std::array<Point2, 4> dst = {{{8, 4}, {190, 6}, {186, 140}, {12, 144}}};
    Homography h = Homography::from_quad(src, dst);
    GrayImage fwd = warp_ipm(img, h, 200, 150);
    GrayImage back = warp_ipm(fwd, h.inverse(), 200, 150);
    double mae = 0;
    int n = 0;
    for (int y = 20; y < 130; ++y)
        for (int x = 20; x < 180; ++x) {
            mae += std::abs(int(back.at(x, y)) - int(img.at(x, y)));
            ++n;
        }
    CHECK(mae / n < 2.0);
}

TEST_CASE("warp: non-invertible homography is rejected") {
    CHECK_THROWS_AS(Homography({1, 2, 3, 2, 4, 6, 0, 0, 1}), CalibrationError);
}

TEST_CASE("hough: all-black map gives no lines") {
    BinaryMap m(320, 240);
    CHECK(hough_lines_probabilistic(m, {}).empty());
}

TEST_CASE("hough: single vertical stroke") {
    BinaryMap m(320, 240);
    testutil::draw_vline(m, 100, 0, 239);
    auto lines = hough_lines_probabilistic(m, {});
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].theta == doctest::Approx(90.0).epsilon(0.02));
    CHECK(std::abs(lines[0].rho - 100.0) <= 1.0);
    CHECK(lines[0].support >= 20);
}

TEST_CASE("hough: two parallel 45-degree strokes, accumulator oracle") {
    BinaryMap m(400, 400);
    // 40 px perpendicular separation -> 40/sin(45) =~ 56.57 px horizontally
    const int x_off = 57;
    for (int t = 0; t < 250; ++t) {
        m.set(80 + t, 350 - t, true);
        m.set(80 + x_off + t, 350 - t, true);
    }
    auto lines = hough_lines_probabilistic(m, {});
    REQUIRE(lines.size() == 2);
    CHECK(std::abs(lines[0].theta - lines[1].theta) < 2.0);
    CHECK(lines[0].theta == doctest::Approx(45.0).epsilon(0.05));
    double drho = std::abs(lines[0].rho - lines[1].rho);
    CHECK(std::abs(drho - 40.0 / std::sin(M_PI / 4)) <= 2.0);

    AccuOracle oracle(m);
    for (const auto& l : lines) {
        // normal parameterization of the reported line: direction phi has
        // normal (sin phi, cos phi), i.e. standard theta = 90 - phi
        double tn = std::fmod(90.0 - l.theta + 360.0, 180.0);
        double a = tn * M_PI / 180.0;
        double r = l.p0.x * std::cos(a) + l.p0.y * std::sin(a);
        int best = 0;
        for (int dt = -1; dt <= 1; ++dt)
            for (int dr = -2; dr <= 2; ++dr) best = std::max(best, oracle.votes(tn + dt, r + dr));
        CHECK(best >= 200);  // the full accumulator confirms a strong peak on this line
    }
}

TEST_CASE("hough: reported support is reproducible by re-scanning the map") {
    Rng rng(11);
    BinaryMap m(320, 240);
    testutil::draw_vline(m, 60, 10, 230);
    testutil::draw_vline(m, 250, 40, 200);
    for (int i = 0; i < 60; ++i) m.set(int(rng.below(320)), int(rng.below(240)), true);
    auto lines = hough_lines_probabilistic(m, {});
    REQUIRE(!lines.empty());
    for (const auto& l : lines) {
        int rescan = segment_support(m, l.p0, l.p1, 1.0);
        CHECK(rescan == l.support);
        CHECK(rescan >= 20);
    }
}

TEST_CASE("skeletonize: empty and already-thin maps are unchanged") {
    BinaryMap empty(64, 64);
    CHECK(skeletonize(empty).count() == 0);
    BinaryMap thin(64, 64);
    testutil::draw_vline(thin, 30, 5, 58);
    BinaryMap sk = skeletonize(thin);
    CHECK(sk.data == thin.data);
}

TEST_CASE("skeletonize: filled bar reduces to a thin medial axis") {
    BinaryMap m(64, 220);
    testutil::fill_rect(m, 20, 10, 9, 200);
    BinaryMap sk = skeletonize(m);
    CHECK(testutil::subset_of(sk, m));
    CHECK(testutil::component_count(sk) == 1);
    // per-row width scan oracle; thinning legitimately eats the bar ends
    for (int y = 10; y < 210; ++y) {
        int w = 0;
        for (int x = 0; x < 64; ++x) w += sk.at(x, y);
        CHECK(w <= 2);
        if (y >= 16 && y < 204) CHECK(w >= 1);
    }
}

TEST_CASE("morph: trivial cases") {
    BinaryMap white(32, 32, 1);
    CHECK(morph(white, MorphOp::Close, 5, 5).count() == white.count());
    BinaryMap dot(32, 32);
    dot.set(16, 16, true);
    CHECK(morph(dot, MorphOp::Erode, 3, 3).count() == 0);
}

TEST_CASE("morph: close fills a 2 px hole, checked against the set definition") {
    BinaryMap m(64, 64);
    testutil::fill_rect(m, 10, 10, 40, 12);
    m.at(30, 15) = 0;
    m.at(31, 15) = 0;
    BinaryMap closed = morph(m, MorphOp::Close, 5, 5);
    CHECK(closed.at(30, 15) == 1);
    CHECK(closed.at(31, 15) == 1);

    // set-definition oracle: dilation then erosion evaluated literally
    auto dil = [&](const BinaryMap& in) {
        BinaryMap out(in.width, in.height);
        for (int y = 0; y < in.height; ++y)
            for (int x = 0; x < in.width; ++x)
                for (int dy = -2; dy <= 2; ++dy)
                    for (int dx = -2; dx <= 2; ++dx)
                        if (in.inside(x + dx, y + dy) && in.at(x + dx, y + dy)) out.at(x, y) = 1;
        return out;
    };
    auto ero = [&](const BinaryMap& in) {
        BinaryMap out(in.width, in.height, 1);
        for (int y = 0; y < in.height; ++y)
            for (int x = 0; x < in.width; ++x)
                for (int dy = -2; dy <= 2; ++dy)
                    for (int dx = -2; dx <= 2; ++dx)
                        if (in.inside(x + dx, y + dy) && !in.at(x + dx, y + dy)) out.at(x, y) = 0;
        return out;
    };
    CHECK(closed.data == ero(dil(m)).data);
}

TEST_CASE("morph: monotonicity and duality properties") {
    Rng rng(13);
    for (int rep = 0; rep < 5; ++rep) {
        BinaryMap a = testutil::random_map(48, 48, 0.2, rng);
        BinaryMap b = a;
        for (size_t i = 0; i < b.data.size(); ++i)
            if (rng.uniform() < 0.1) b.data[i] = 1;  // b is a superset
        CHECK(testutil::subset_of(morph(a, MorphOp::Dilate, 3, 3), morph(b, MorphOp::Dilate, 3, 3)));
        CHECK(testutil::subset_of(morph(a, MorphOp::Erode, 3, 3), morph(b, MorphOp::Erode, 3, 3)));

        // erode(A) == not(dilate(not A))
        BinaryMap na = a;
        for (auto& v : na.data) v = v ? 0 : 1;
        BinaryMap d = morph(na, MorphOp::Dilate, 3, 3);
        for (auto& v : d.data) v = v ? 0 : 1;
        CHECK(morph(a, MorphOp::Erode, 3, 3).data == d.data);
    }
}

TEST_CASE("ncc: self, complement, and noisy copies") {
    Rng rng(17);
    BinaryMap tmpl(32, 32);
    testutil::fill_rect(tmpl, 8, 4, 16, 24);
    GrayImage self(32, 32);
    for (size_t i = 0; i < self.data.size(); ++i) self.data[i] = tmpl.data[i] ? 255 : 0;
    CHECK(ncc(self, tmpl) == doctest::Approx(1.0));

    GrayImage comp(32, 32);
    for (size_t i = 0; i < comp.data.size(); ++i) comp.data[i] = tmpl.data[i] ? 0 : 255;
    CHECK(ncc(comp, tmpl) == doctest::Approx(-1.0));

    GrayImage noisy = self;
    for (size_t i = 0; i < noisy.data.size(); ++i)
        if (rng.uniform() < 0.3) noisy.data[i] = uint8_t(rng.below(256));
    double score = ncc(noisy, tmpl);
    CHECK(score > 0.5);

    // direct-formula oracle
    double ma = 0, mb = 0;
    for (size_t i = 0; i < noisy.data.size(); ++i) {
        ma += noisy.data[i];
        mb += tmpl.data[i];
    }
    ma /= 1024.0;
    mb /= 1024.0;
    double num = 0, va = 0, vb = 0;
    for (size_t i = 0; i < noisy.data.size(); ++i) {
        num += (noisy.data[i] - ma) * (tmpl.data[i] - mb);
        va += (noisy.data[i] - ma) * (noisy.data[i] - ma);
        vb += (tmpl.data[i] - mb) * (tmpl.data[i] - mb);
    }
    CHECK(score == doctest::Approx(num / std::sqrt(va * vb)).epsilon(1e-9));
}

TEST_CASE("ncc: zero-variance candidate scores 0 and |ncc| stays bounded") {
    BinaryMap tmpl(32, 32);
    testutil::fill_rect(tmpl, 0, 0, 16, 32);
    GrayImage flat(32, 32, 128);
    CHECK(ncc(flat, tmpl) == 0.0);

    Rng rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        GrayImage c = testutil::random_gray(32, 32, rng);
        BinaryMap t = testutil::random_map(32, 32, 0.5, rng);
        CHECK(std::abs(ncc(c, t)) <= 1.0 + 1e-9);
    }
}
