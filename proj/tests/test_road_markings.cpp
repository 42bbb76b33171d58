#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "elas/kernels.hpp"
#include "elas/road_markings.hpp"
#include "test_util.hpp"

using namespace elas;

namespace {

LaneEstimate vertical_lane(double center, double width, int ipm_h) {
    LaneEstimate lane;
    lane.x1 = lane.x2 = lane.x3 = center;
    lane.y1 = ipm_h - 1;
    lane.y2 = (ipm_h - 1) * 0.5;
    lane.y3 = 0;
    lane.w1 = lane.w2 = width;
    lane.trust_h = ipm_h;
    lane.theta = 90;
    return lane;
}

// strips drawn into a map: count strips, width, gap, starting at x0
void draw_strips(BinaryMap& m, int n, int x0, int strip_w, int gap, int y0, int y1, double angle_deg = 0) {
    double t = std::tan(angle_deg * M_PI / 180.0);
    double yc = 0.5 * (y0 + y1);
    for (int k = 0; k < n; ++k)
        for (int y = y0; y <= y1; ++y) {
            int shift = int(std::lround((yc - y) * t));
            for (int x = 0; x < strip_w; ++x) {
                int xx = x0 + k * (strip_w + gap) + x + shift;
                if (m.inside(xx, y)) m.at(xx, y) = 1;
            }
        }
}

}  // namespace

TEST_CASE("histogram: empty, single line binning, additivity") {
    Histogram2D empty = angle_histogram_2d({}, {});
    CHECK(empty.total() == 0.0);

    HoughLine l;
    l.rho = 10;
    l.theta = 90.4;
    Histogram2D one = angle_histogram_2d({l}, {7.0});
    CHECK(one.weight(3, 90) == 7.0);
    CHECK(one.total() == 7.0);

    HoughLine l2 = l;
    l2.rho = 11.5;  // same 3 px bin
    Histogram2D two = angle_histogram_2d({l, l2}, {7.0, 2.0});
    CHECK(two.weight(3, 90) == 9.0);
}

TEST_CASE("dominant angle: windowed argmax with wrap-around") {
    HoughLine a;
    a.rho = 30;
    a.theta = 45.0;
    Histogram2D h = angle_histogram_2d({a}, {1.0});
    CHECK(*dominant_angle(h, 5) == 45.0);

    // 44,45,46 with weight 1 each beats an isolated 90 with weight 2
    std::vector<HoughLine> lines(4);
    std::vector<double> ws = {1, 1, 1, 2};
    lines[0].theta = 44.2;
    lines[1].theta = 45.2;
    lines[2].theta = 46.2;
    lines[3].theta = 90.2;
    for (auto& l : lines) l.rho = 30;
    Histogram2D h2 = angle_histogram_2d(lines, ws);
    double alpha = *dominant_angle(h2, 5);

    // exhaustive oracle: alpha must attain the maximal windowed sum
    auto windowed = [&](int i) {
        double s = 0;
        for (int k = -5; k <= 5; ++k) {
            int bin = ((i + k) % 360 + 360) % 360;
            for (int x = 0; x < h2.n_rho(); ++x) s += h2.weight(x, bin);
        }
        return s;
    };
    double best_sum = -1;
    for (int i = 0; i < 360; ++i) best_sum = std::max(best_sum, windowed(i));
    CHECK(windowed(int(alpha)) == best_sum);
    CHECK(best_sum == 3.0);  // the 44..46 cluster beats the lone weight-2 bin
    CHECK(alpha == 45.0);

    Histogram2D zero = angle_histogram_2d({}, {});
    CHECK(!dominant_angle(zero, 5).has_value());
}

TEST_CASE("crosswalk: blank region is not detected") {
    BinaryMap dog(640, 480);
    CrosswalkParams params;
    CrosswalkResult r = detect_crosswalk(dog, std::nullopt, params);
    CHECK(!r.detected);
    CHECK(!r.dominant_angle_deg.has_value());
}

TEST_CASE("crosswalk: periodic strips are detected, solid block is not") {
    CrosswalkParams params;
    BinaryMap dog(640, 480);
    draw_strips(dog, 6, 230, 20, 20, 170, 410);
    CrosswalkResult r = detect_crosswalk(dog, std::nullopt, params);
    CHECK(r.detected);
    CHECK(r.f_r > 0.0);

    // direct convolution oracle on the ideal projected row
    std::vector<int> s(200, 0);
    for (int k = 0; k < 6; ++k)
        for (int x = 0; x < 20; ++x)
            if (10 + k * 40 + x < 200) s[size_t(10 + k * 40 + x)] = 1;
    CHECK(crosswalk_score(s) > 0.0);

    BinaryMap solid(640, 480);
    testutil::fill_rect(solid, 200, 280, 260, 40);  // single block, no periodicity
    CrosswalkResult rs = detect_crosswalk(solid, std::nullopt, params);
    CHECK(rs.f_r <= 0.0);
    CHECK(!rs.detected);
}

TEST_CASE("crosswalk: center of the correlation is the global minimum for periodic strips") {
    std::vector<int> s(200, 0);
    for (int k = 0; k < 5; ++k)
        for (int x = 0; x < 20; ++x) s[size_t(k * 40 + x)] = 1;
    std::vector<int> sig(s.size());
    for (size_t i = 0; i < s.size(); ++i) sig[i] = s[i] ? 1 : -1;
    int n = int(s.size());
    auto corr_neg = [&](int lag) {
        int lo = std::max(0, -lag), hi = std::min(n, n - lag);
        long acc = 0;
        for (int i = lo; i < hi; ++i) acc += sig[size_t(i)] * sig[size_t(i + lag)];
        return double(-acc);
    };
    double center = corr_neg(0);
    for (int lag = -n / 2; lag <= n / 2; ++lag) CHECK(center <= corr_neg(lag));
}

TEST_CASE("crosswalk: rotated strips are still detected") {
    CrosswalkParams params;
    for (double phi : {-20.0, -10.0, 10.0, 20.0}) {
        BinaryMap dog(640, 480);
        draw_strips(dog, 6, 230, 20, 20, 170, 410, phi);
        CrosswalkResult r = detect_crosswalk(dog, std::nullopt, params);
        INFO("phi = ", phi);
        CHECK(r.detected);
    }
}

TEST_CASE("sign candidates: empty maps give an empty list") {
    BinaryMap dog(640, 480), vad(640, 480);
    GrayImage gray(640, 480, 60);
    CHECK(extract_sign_candidates(dog, vad, gray, std::nullopt, {}).empty());
}

TEST_CASE("sign candidates: centered blob is boxed, edge blob is rejected") {
    BinaryMap dog(640, 480), vad(640, 480);
    GrayImage gray(640, 480, 60);
    testutil::fill_rect(dog, 304, 200, 32, 48);
    testutil::fill_rect(gray, 304, 200, 32, 48, 200);
    auto lane = vertical_lane(320, 210, 480);
    auto boxes = extract_sign_candidates(dog, vad, gray, lane, {});
    REQUIRE(boxes.size() == 1);

    // component-scan oracle: tight bbox of the blob
    CHECK(std::abs(boxes[0].x - 304) <= 2);
    CHECK(std::abs(boxes[0].y - 200) <= 2);
    CHECK(std::abs(boxes[0].width - 32) <= 2);
    CHECK(std::abs(boxes[0].height - 48) <= 2);

    BinaryMap dog2(640, 480), vad2(640, 480);
    GrayImage gray2(640, 480, 60);
    testutil::fill_rect(dog2, 405, 200, 32, 48);  // hugs the right lane edge
    testutil::fill_rect(gray2, 405, 200, 32, 48, 200);
    CHECK(extract_sign_candidates(dog2, vad2, gray2, lane, {}).empty());
}

TEST_CASE("classify: template self-identity is exact for all eight arrows") {
    TemplateSet set = default_template_set();
    for (int i = 0; i < 8; ++i) {
        GrayImage cand(32, 32);
        for (size_t k = 0; k < cand.data.size(); ++k)
            cand.data[k] = set.arrows[size_t(i)].data[k] ? 255 : 0;
        RoadSign s = classify_sign(cand, Rect{0, 0, 32, 48}, set, 4.0, 0.6);
        CHECK(s.cls == SignClass(int(SignClass::Arrow1) + i));
        CHECK(s.score >= 0.99);
    }
}

TEST_CASE("classify: wide candidates are stop lines, noisy templates still match") {
    TemplateSet set = default_template_set();
    GrayImage wide(300, 20, 200);
    RoadSign s = classify_sign(wide, Rect{0, 0, 300, 20}, set, 4.0, 0.6);
    CHECK(s.cls == SignClass::StopLine);

    Rng rng(41);
    int correct = 0;
    for (int i = 0; i < 8; ++i) {
        GrayImage cand(32, 32);
        for (size_t k = 0; k < cand.data.size(); ++k)
            cand.data[k] = set.arrows[size_t(i)].data[k] ? 255 : 0;
        for (size_t k = 0; k < cand.data.size(); ++k)
            if (rng.uniform() < 0.2) cand.data[k] = uint8_t(rng.below(256));
        RoadSign noisy = classify_sign(cand, Rect{0, 0, 32, 48}, set, 4.0, 0.6);
        if (noisy.cls == SignClass(int(SignClass::Arrow1) + i)) ++correct;

        // direct NCC oracle for the matching template
        double ma = 0, mb = 0;
        const auto& t = set.arrows[size_t(i)];
        for (size_t k = 0; k < cand.data.size(); ++k) {
            ma += cand.data[k];
            mb += t.data[k];
        }
        ma /= 1024;
        mb /= 1024;
        double num = 0, va = 0, vb = 0;
        for (size_t k = 0; k < cand.data.size(); ++k) {
            num += (cand.data[k] - ma) * (t.data[k] - mb);
            va += (cand.data[k] - ma) * (cand.data[k] - ma);
            vb += (t.data[k] - mb) * (t.data[k] - mb);
        }
        double oracle = num / std::sqrt(va * vb);
        CHECK(ncc(cand, t) == doctest::Approx(oracle).epsilon(1e-9));
    }
    CHECK(correct == 8);
}

TEST_CASE("classify: degenerate flat candidate is unknown") {
    TemplateSet set = default_template_set();
    GrayImage flat(40, 40, 77);
    RoadSign s = classify_sign(flat, Rect{0, 0, 40, 40}, set, 4.0, 0.6);
    CHECK(s.cls == SignClass::Unknown);
}

TEST_CASE("template set round-trips through PNG files") {
    TemplateSet set = default_template_set();
    std::string dir = "template_roundtrip_tmp";
    save_template_set(set, dir);
    TemplateSet loaded = load_template_set(dir);
    for (int i = 0; i < 8; ++i) CHECK(loaded.arrows[size_t(i)].data == set.arrows[size_t(i)].data);
}

TEST_CASE("removal: clears the union of detections and nothing else") {
    Rng rng(43);
    FeatureMaps maps;
    maps.srf = testutil::random_map(200, 150, 0.2, rng);
    maps.dog = testutil::random_map(200, 150, 0.2, rng);
    maps.vad = testutil::random_map(200, 150, 0.2, rng);
    maps.inb = testutil::random_map(200, 150, 0.2, rng);
    maps.cmb = combined_map(maps.srf, maps.inb);

    CrosswalkResult none;
    FeatureMaps unchanged = remove_markings(maps, none, {});
    CHECK(unchanged.srf.data == maps.srf.data);
    CHECK(unchanged.cmb.data == maps.cmb.data);

    std::vector<RoadSign> signs(2);
    signs[0].bbox = Rect{40, 30, 30, 40};
    signs[1].bbox = Rect{60, 50, 30, 40};  // overlaps the first
    FeatureMaps removed = remove_markings(maps, none, signs);

    // pixel-loop oracle: dilated union cleared, everything else untouched
    auto in_union = [&](int x, int y) {
        return signs[0].bbox.dilated(2, 200, 150).contains(x, y) ||
               signs[1].bbox.dilated(2, 200, 150).contains(x, y);
    };
    for (int y = 0; y < 150; ++y)
        for (int x = 0; x < 200; ++x) {
            if (in_union(x, y)) {
                CHECK(removed.srf.at(x, y) == 0);
                CHECK(removed.dog.at(x, y) == 0);
                CHECK(removed.vad.at(x, y) == 0);
                CHECK(removed.inb.at(x, y) == 0);
            } else {
                CHECK(removed.srf.at(x, y) == maps.srf.at(x, y));
                CHECK(removed.dog.at(x, y) == maps.dog.at(x, y));
                CHECK(removed.vad.at(x, y) == maps.vad.at(x, y));
                CHECK(removed.inb.at(x, y) == maps.inb.at(x, y));
            }
        }
    CHECK(testutil::subset_of(removed.srf, maps.srf));
    CHECK(removed.cmb.data == combined_map(removed.srf, removed.inb).data);
}
