#include "elas/lane_base.hpp"

#include <cmath>

#include "elas/lane_measurement.hpp"

namespace elas {

namespace {

Eigen::Matrix<double, 6, 6> transition() {
    Eigen::Matrix<double, 6, 6> f = Eigen::Matrix<double, 6, 6>::Identity();
    f(0, 1) = f(2, 3) = f(4, 5) = 1.0;
    return f;
}

bool finite_measurement(const LaneMeasurement& z) {
    return std::isfinite(z.p_b) && std::isfinite(z.p_t) && std::isfinite(z.width) && z.width > 0;
}

}  // namespace

void KalmanCore::init_from(const LaneMeasurement& z, double cov_inflation) {
    x_.setZero();
    x_(0) = z.p_b;
    x_(2) = z.p_t;
    x_(4) = z.width;
    p_.setZero();
    for (int i = 0; i < 3; ++i) {
        p_(2 * i, 2 * i) = params_.init_pos_var * cov_inflation;
        p_(2 * i + 1, 2 * i + 1) = params_.init_vel_var * cov_inflation;
    }
    initialized_ = true;
}

void KalmanCore::predict() {
    static const Mat6 f = transition();
    x_ = f * x_;
    p_ = f * p_ * f.transpose();
    for (int i = 0; i < 3; ++i) {
        p_(2 * i, 2 * i) += params_.q_pos;
        p_(2 * i + 1, 2 * i + 1) += params_.q_vel;
    }
    p_ = 0.5 * (p_ + p_.transpose().eval());
}

void KalmanCore::correct_full(const LaneMeasurement& z) {
    Eigen::Matrix<double, 3, 6> h = Eigen::Matrix<double, 3, 6>::Zero();
    h(0, 0) = h(1, 2) = h(2, 4) = 1.0;
    Eigen::Vector3d zv(z.p_b, z.p_t, z.width);
    Eigen::Matrix3d s = h * p_ * h.transpose() + params_.r * Eigen::Matrix3d::Identity();
    Eigen::Matrix<double, 6, 3> k = p_ * h.transpose() * s.inverse();
    x_ += k * (zv - h * x_);
    p_ = (Mat6::Identity() - k * h) * p_;
    p_ = 0.5 * (p_ + p_.transpose().eval());
}

void KalmanCore::correct_masked(const LaneMeasurement& z) {
    // Width must not move: freeze its velocity, update the position rows
    // only, and cut the cross-covariance so the gain cannot leak into w.
    double w_saved = x_(4);
    x_(5) = 0.0;
    for (int i = 0; i < 6; ++i) {
        if (i == 4 || i == 5) continue;
        p_(4, i) = p_(i, 4) = 0.0;
        p_(5, i) = p_(i, 5) = 0.0;
    }
    Eigen::Matrix<double, 2, 6> h = Eigen::Matrix<double, 2, 6>::Zero();
    h(0, 0) = h(1, 2) = 1.0;
    Eigen::Vector2d zv(z.p_b, z.p_t);
    Eigen::Matrix2d s = h * p_ * h.transpose() + params_.r * Eigen::Matrix2d::Identity();
    Eigen::Matrix<double, 6, 2> k = p_ * h.transpose() * s.inverse();
    x_ += k * (zv - h * x_);
    p_ = (Mat6::Identity() - k * h) * p_;
    p_ = 0.5 * (p_ + p_.transpose().eval());
    x_(4) = w_saved;
    x_(5) = 0.0;
}

LaneBase KalmanCore::step(const std::optional<LaneMeasurement>& z, bool* rejected) {
    if (!initialized_) throw std::logic_error("KalmanCore::step before initialization");
    if (rejected) *rejected = false;

    bool masked = z && z->from_single_line();
    if (masked) x_(5) = 0.0;  // keep w constant through the prediction too
    predict();
    if (z) {
        if (!finite_measurement(*z)) {
            if (rejected) *rejected = true;
        } else if (masked) {
            correct_masked(*z);
        } else {
            correct_full(*z);
        }
    }
    return base();
}

LaneBase KalmanCore::base() const {
    LaneBase b;
    b.p_b = x_(0);
    b.p_t = x_(2);
    b.width = x_(4);
    return b;
}

const char* to_string(LaneTracker::Fsm state) {
    switch (state) {
        case LaneTracker::Fsm::Active: return "active";
        case LaneTracker::Fsm::Inactive: return "inactive";
        case LaneTracker::Fsm::Disabled: return "disabled";
    }
    return "disabled";
}

std::optional<LaneBase> LaneTracker::gated_hold(const BinaryMap& cmb, double validity_thresh) const {
    if (!held_) return std::nullopt;
    double v = lane_validity_score(cmb, held_->p_b, held_->p_t, held_->width, params_.b);
    if (v > validity_thresh) return held_;
    return std::nullopt;
}

LaneBase LaneTracker::run_kalman(const LaneMeasurement& z) {
    if (pending_reset_ || !kalman_.initialized()) {
        double inflation = pending_reset_ && kalman_.initialized() ? params_.reset_inflation : 1.0;
        kalman_.init_from(z, inflation);
        pending_reset_ = false;
        last_rejected_ = false;
        held_ = kalman_.base();
        return *held_;
    }
    LaneBase b = kalman_.step(z, &last_rejected_);
    held_ = b;
    return b;
}

std::optional<LaneBase> LaneTracker::step(const std::optional<LaneMeasurement>& z, const BinaryMap& cmb,
                                          double validity_thresh) {
    const int n = params_.hysteresis_frames;
    switch (fsm_) {
        case Fsm::Active:
            if (z) {
                streak_with_ = 0;
                streak_without_ = 0;
                return run_kalman(*z);
            }
            if (!kalman_.initialized()) return std::nullopt;  // nothing tracked yet
            fsm_ = Fsm::Inactive;
            streak_with_ = 0;
            streak_without_ = 0;
            return gated_hold(cmb, validity_thresh);

        case Fsm::Inactive:
            if (z) {
                ++streak_with_;
                streak_without_ = 0;
                if (streak_with_ >= n) {
                    fsm_ = Fsm::Active;
                    streak_with_ = 0;
                    return run_kalman(*z);
                }
                return gated_hold(cmb, validity_thresh);
            }
            ++streak_without_;
            streak_with_ = 0;
            if (streak_without_ >= n) {
                fsm_ = Fsm::Disabled;
                streak_without_ = 0;
                return std::nullopt;
            }
            return gated_hold(cmb, validity_thresh);

        case Fsm::Disabled:
            if (z) {
                ++streak_with_;
                if (streak_with_ >= n) {
                    fsm_ = Fsm::Active;
                    streak_with_ = 0;
                    kalman_.reset();  // stale after a long outage
                    return run_kalman(*z);
                }
            } else {
                streak_with_ = 0;
            }
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace elas
