#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "elas/lane_base.hpp"
#include "test_util.hpp"

using namespace elas;

namespace {

LaneMeasurement meas(double pb, double pt, double w,
                     LaneMeasurement::Source src = LaneMeasurement::Source::Pair) {
    LaneMeasurement z;
    z.p_b = pb;
    z.p_t = pt;
    z.width = w;
    z.theta = std::atan2(479.0, pt - pb) * 180.0 / M_PI;
    z.source = src;
    return z;
}

bool psd(const KalmanCore::Mat6& p, double tol = 1e-9) {
    Eigen::SelfAdjointEigenSolver<KalmanCore::Mat6> es(p);
    return es.eigenvalues().minCoeff() >= -tol;
}

// Reference interpreter of the tracker hysteresis, written straight from the
// three-state description; drives the trace-equivalence check.
struct FsmRef {
    enum S { Fresh, Active, Inactive, Disabled } s = Fresh;
    int with = 0, without = 0;
    S step(bool z) {
        switch (s) {
            case Fresh:
                if (z) s = Active;
                return s == Fresh ? Active : s;  // fresh reports as Active
            case Active:
                if (!z) {
                    s = Inactive;
                    with = without = 0;
                }
                return s;
            case Inactive:
                if (z) {
                    without = 0;
                    if (++with >= 10) {
                        s = Active;
                        with = 0;
                    }
                } else {
                    with = 0;
                    if (++without >= 10) {
                        s = Disabled;
                        without = 0;
                    }
                }
                return s;
            case Disabled:
                if (z) {
                    if (++with >= 10) {
                        s = Active;
                        with = 0;
                    }
                } else {
                    with = 0;
                }
                return s;
        }
        return s;
    }
};

}  // namespace

TEST_CASE("kalman: converges onto a constant measurement") {
    KalmanCore k;
    k.init_from(meas(320, 330, 240));
    LaneBase b;
    for (int i = 0; i < 50; ++i) b = k.step(meas(300, 310, 230));
    CHECK(std::abs(b.p_b - 300) < 0.1);
    CHECK(std::abs(b.p_t - 310) < 0.1);
    CHECK(std::abs(b.width - 230) < 0.1);
}

TEST_CASE("kalman: constant-velocity model tracks a ramp with small lag") {
    KalmanCore k;
    k.init_from(meas(100, 100, 240));
    LaneBase b;
    double pb = 100;
    for (int i = 0; i < 120; ++i) {
        pb += 2.0;  // +2 px per frame
        b = k.step(meas(pb, pb, 240));
    }
    CHECK(std::abs(b.p_b - pb) < 2.0);  // steady-state lag below one frame step
}

TEST_CASE("kalman: single-line measurements never move the width") {
    KalmanCore k;
    k.init_from(meas(320, 320, 240));
    for (int i = 0; i < 30; ++i) k.step(meas(320, 320, 240));
    LaneBase b;
    for (int i = 0; i < 25; ++i)
        b = k.step(meas(322, 322, 999, LaneMeasurement::Source::SingleLeft));
    CHECK(std::abs(b.width - 240) <= 1e-6);
    CHECK(std::abs(b.p_b - 322) < 1.0);  // positions still corrected
}

TEST_CASE("kalman: non-finite measurement is rejected, prediction only") {
    KalmanCore k;
    k.init_from(meas(320, 320, 240));
    k.step(meas(320, 320, 240));
    bool rejected = false;
    LaneBase b = k.step(meas(std::nan(""), 320, 240), &rejected);
    CHECK(rejected);
    CHECK(std::isfinite(b.p_b));
}

TEST_CASE("kalman: covariance stays PSD over 10k random steps") {
    Rng rng(61);
    KalmanCore k;
    k.init_from(meas(320, 320, 240));
    for (int i = 0; i < 10000; ++i) {
        std::optional<LaneMeasurement> z;
        double roll = rng.uniform();
        if (roll < 0.6)
            z = meas(rng.uniform(0, 640), rng.uniform(0, 640), rng.uniform(50, 400));
        else if (roll < 0.8)
            z = meas(rng.uniform(0, 640), rng.uniform(0, 640), rng.uniform(50, 400),
                     LaneMeasurement::Source::SingleRight);
        k.step(z);
        if (i % 13 == 0) REQUIRE(psd(k.covariance()));
    }
    CHECK(psd(k.covariance()));
}

TEST_CASE("kalman: with zero process noise a constant input becomes exactly constant") {
    KalmanCore::Params params;
    params.q_pos = 0.0;
    params.q_vel = 0.0;
    KalmanCore k(params);
    k.init_from(meas(320, 320, 240));
    for (int i = 0; i < 4000; ++i) k.step(meas(320, 320, 240));
    LaneBase a = k.step(meas(320, 320, 240));
    LaneBase b = k.step(meas(320, 320, 240));
    CHECK(a.p_b == b.p_b);
    CHECK(a.p_t == b.p_t);
    CHECK(a.width == b.width);
}

TEST_CASE("tracker: fresh tracker activates on the first measurement") {
    LaneTracker t;
    BinaryMap cmb(640, 480);
    auto out = t.step(meas(320, 320, 240), cmb, 100.0);
    REQUIRE(out.has_value());
    CHECK(t.fsm() == LaneTracker::Fsm::Active);
    CHECK(out->p_b == doctest::Approx(320.0));
}

TEST_CASE("tracker: ten empty frames after activity disable the output") {
    LaneTracker t;
    BinaryMap cmb(640, 480);
    testutil::draw_vline(cmb, 200, 0, 479);
    testutil::draw_vline(cmb, 440, 0, 479);
    for (int i = 0; i < 5; ++i) t.step(meas(320, 320, 240), cmb, 100.0);

    // frame 1 of the outage: Active -> Inactive, held output still valid
    auto out = t.step(std::nullopt, cmb, 100.0);
    CHECK(t.fsm() == LaneTracker::Fsm::Inactive);
    CHECK(out.has_value());
    for (int i = 2; i <= 10; ++i) {
        out = t.step(std::nullopt, cmb, 100.0);
        CHECK(t.fsm() == LaneTracker::Fsm::Inactive);
    }
    out = t.step(std::nullopt, cmb, 100.0);  // frame 11
    CHECK(t.fsm() == LaneTracker::Fsm::Disabled);
    CHECK(!out.has_value());

    // disabled stays silent even with sporadic measurements
    out = t.step(meas(320, 320, 240), cmb, 100.0);
    CHECK(!out.has_value());
    out = t.step(std::nullopt, cmb, 100.0);
    CHECK(!out.has_value());

    // ten consecutive measurements reactivate
    for (int i = 0; i < 10; ++i) out = t.step(meas(321, 321, 240), cmb, 100.0);
    CHECK(t.fsm() == LaneTracker::Fsm::Active);
    REQUIRE(out.has_value());
    CHECK(out->p_b == doctest::Approx(321.0));
}

TEST_CASE("tracker: inactive hold is gated by current evidence") {
    LaneTracker t;
    BinaryMap supported(640, 480);
    testutil::draw_vline(supported, 200, 0, 479);
    testutil::draw_vline(supported, 440, 0, 479);
    for (int i = 0; i < 5; ++i) t.step(meas(320, 320, 240), supported, 100.0);

    auto held = t.step(std::nullopt, supported, 100.0);
    CHECK(held.has_value());  // evidence still under the held lane

    BinaryMap empty(640, 480);
    auto gated = t.step(std::nullopt, empty, 100.0);
    CHECK(t.fsm() == LaneTracker::Fsm::Inactive);
    CHECK(!gated.has_value());  // stale estimate, no support, no report
}

TEST_CASE("tracker: state trace matches the reference interpreter") {
    Rng rng(67);
    for (int rep = 0; rep < 30; ++rep) {
        LaneTracker t;
        FsmRef ref;
        bool started = false;
        BinaryMap cmb(640, 480);
        for (int i = 0; i < 200; ++i) {
            bool z = rng.uniform() < 0.55;
            if (!started && !z) continue;  // reference starts at first measurement
            started = true;
            t.step(z ? std::optional<LaneMeasurement>(meas(320, 320, 240)) : std::nullopt, cmb, 1.0);
            FsmRef::S want = ref.step(z);
            LaneTracker::Fsm got = t.fsm();
            if (want == FsmRef::Active) CHECK(got == LaneTracker::Fsm::Active);
            if (want == FsmRef::Inactive) CHECK(got == LaneTracker::Fsm::Inactive);
            if (want == FsmRef::Disabled) CHECK(got == LaneTracker::Fsm::Disabled);
        }
    }
}

TEST_CASE("tracker: reset reinitializes from the next measurement") {
    LaneTracker t;
    BinaryMap cmb(640, 480);
    for (int i = 0; i < 20; ++i) t.step(meas(320, 320, 240), cmb, 1.0);
    t.request_reset();
    auto out = t.step(meas(500, 500, 200), cmb, 1.0);
    REQUIRE(out.has_value());
    CHECK(out->p_b == doctest::Approx(500.0));  // hard jump, no smoothing
    CHECK(out->width == doctest::Approx(200.0));
}
