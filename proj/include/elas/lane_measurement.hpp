#pragma once

#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "elas/image.hpp"
#include "elas/imaging.hpp"
#include "elas/lane_types.hpp"
#include "elas/road_markings.hpp"

namespace elas {

struct RhoTheta {
    double rho = 0;
    double theta = 90;
};

// Evidence score v(L): one sample per row along the segment, each contributing
// max(0, b - dist) where dist is the horizontal distance to the nearest
// evidence in that row.
double line_evidence_score(const HoughLine& line, const BinaryMap& cmb, double b);

// Full-height line through (rho, bottom row) with the given direction angle.
HoughLine make_full_height_line(double rho, double theta_deg, int width, int height);

// Score of the left/right lines derived from a lane description, used by the
// measurement validity gate and the tracker's Inactive-state gate.
double lane_validity_score(const BinaryMap& cmb, double p_b, double p_t, double width, double b);

// Outward scan from the neutral band: each value is scaled by
// (1 - gamma * m) where m is the maximum original value strictly closer to
// the split on the same half (neutral band excluded). Indices are histogram
// bins.
std::vector<double> apply_punishment(const std::vector<double>& h1d, int split_index, double gamma,
                                     int neutral_halfwidth_bins);

struct SideCandidateParams {
    double gamma = 0.7;
    double delta_deg = 15.0;
    int d = 5;
    double b = 5.0;
    double neutral_halfwidth = 40.0;  // px
};

struct SideCandidates {
    std::optional<HoughLine> left;
    std::optional<HoughLine> right;
    std::optional<double> dominant_angle_deg;
};

SideCandidates select_side_candidates(const std::vector<HoughLine>& lines, const BinaryMap& cmb,
                                      double vehicle_x, const SideCandidateParams& params);

// Temporal reinforcement buffers for one lane side. A candidate is accepted
// while B_correct is filling or when it stays within dist_thresh of the
// buffer mean; ten consecutive rejections swap the buffers and request a
// filter reset.
class SideBuffers {
public:
    static constexpr size_t kCapacity = 10;

    struct Update {
        bool accepted = false;
        bool force_swap = false;
    };

    Update update(const std::optional<RhoTheta>& candidate, double dist_thresh = 15.0);

    const std::deque<RhoTheta>& correct() const { return correct_; }
    const std::deque<RhoTheta>& incorrect() const { return incorrect_; }
    RhoTheta mean_correct() const;
    void clear();

private:
    std::deque<RhoTheta> correct_;
    std::deque<RhoTheta> incorrect_;
};

// Combine the accepted side candidates into one lane measurement. A missing
// side is mirrored across the lane with the previous width; a fully missing
// pair carries the previous measurement forward. The result must pass the
// evidence validity gate, otherwise nothing is reported.
std::optional<LaneMeasurement> build_measurement(const std::optional<HoughLine>& left,
                                                 const std::optional<HoughLine>& right,
                                                 const std::optional<LaneMeasurement>& prev,
                                                 const BinaryMap& cmb, double validity_thresh,
                                                 double b = 5.0);

}  // namespace elas
