#pragma once

#include <Eigen/Dense>
#include <optional>

#include "elas/image.hpp"
#include "elas/lane_types.hpp"

namespace elas {

// Constant-velocity Kalman filter over the observation z = (p_b, p_t, w).
// State is (p_b, vp_b, p_t, vp_t, w, vw). Measurements derived from a single
// line never update the width: its velocity is zeroed and the width row is
// masked out of the correction.
class KalmanCore {
public:
    using Vec6 = Eigen::Matrix<double, 6, 1>;
    using Mat6 = Eigen::Matrix<double, 6, 6>;

    struct Params {
        double q_pos = 1e-2;
        double q_vel = 1e-1;
        double r = 4.0;
        double init_pos_var = 4.0;
        double init_vel_var = 25.0;
    };

    KalmanCore() = default;
    explicit KalmanCore(const Params& params) : params_(params) {}

    bool initialized() const { return initialized_; }
    void init_from(const LaneMeasurement& z, double cov_inflation = 1.0);
    void reset() { initialized_ = false; }

    // One predict (+ correct when z is present) cycle. Non-finite
    // measurements are rejected: prediction only, *rejected set.
    LaneBase step(const std::optional<LaneMeasurement>& z, bool* rejected = nullptr);

    LaneBase base() const;
    const Vec6& state() const { return x_; }
    const Mat6& covariance() const { return p_; }

private:
    void predict();
    void correct_full(const LaneMeasurement& z);
    void correct_masked(const LaneMeasurement& z);

    Params params_;
    bool initialized_ = false;
    Vec6 x_ = Vec6::Zero();
    Mat6 p_ = Mat6::Identity();
};

// Hysteresis state machine gating the Kalman filter on measurement presence.
class LaneTracker {
public:
    enum class Fsm { Active, Inactive, Disabled };

    struct Params {
        KalmanCore::Params kalman;
        int hysteresis_frames = 10;
        double b = 5.0;
        double reset_inflation = 100.0;
    };

    LaneTracker() : kalman_(params_.kalman) {}
    explicit LaneTracker(const Params& params) : params_(params), kalman_(params.kalman) {}

    // Advance one frame. The held estimate reported from the Inactive state
    // must still be supported by evidence in the current combined map.
    std::optional<LaneBase> step(const std::optional<LaneMeasurement>& z, const BinaryMap& cmb,
                                 double validity_thresh);

    // Buffer swap: reinitialize from the next measurement, inflated.
    void request_reset() { pending_reset_ = true; }

    Fsm fsm() const { return fsm_; }
    int streak_with() const { return streak_with_; }
    int streak_without() const { return streak_without_; }
    const KalmanCore& kalman() const { return kalman_; }
    bool last_measurement_rejected() const { return last_rejected_; }

private:
    std::optional<LaneBase> gated_hold(const BinaryMap& cmb, double validity_thresh) const;
    LaneBase run_kalman(const LaneMeasurement& z);

    Params params_;
    KalmanCore kalman_;
    Fsm fsm_ = Fsm::Active;
    int streak_with_ = 0;
    int streak_without_ = 0;
    bool pending_reset_ = false;
    bool last_rejected_ = false;
    std::optional<LaneBase> held_;
};

const char* to_string(LaneTracker::Fsm state);

}  // namespace elas
