#pragma once

#include <optional>
#include <vector>

#include "elas/image.hpp"
#include "elas/lane_types.hpp"
#include "elas/rng.hpp"
#include "elas/road_markings.hpp"

namespace elas {

// Spline lane hypothesis. w1/x1 come from the Kalman base every frame; the
// filter only estimates w2, x2, x3 (control rows are fixed).
struct LaneParticle {
    double w1 = 0, w2 = 0;
    double x1 = 0, x2 = 0, x3 = 0;
};

struct TrustArea {
    int h = 0;  // rows from the bottom considered reliable
};

struct CurvatureParams {
    int particle_count = 400;
    double sigma_fixed_x = 3.0;  // jitter around the reference point
    double sigma_fixed_w = 2.0;  // top-width random walk
    double sigma_init = 10.0;
    double sigma1 = 1.0 / 3.0;   // boundary-coverage Gaussian
    double sigma2 = 1.0 / 12.0;  // inner-cleanness Gaussian
    int min_trust_rows = 8;      // below this the filter coasts
    int inner_inset = 6;         // skip the marking itself in the inner band
    int d_inner(double w1) const { return std::max(1, int(std::lround(w1 / 4.0))); }
};

// Trust horizon: cut at the nearest stop line and at the nearest obstacle
// evidence in the middle of the previous lane (recognized sign paint does not
// count as an obstacle).
TrustArea trust_area(const BinaryMap& vad, const std::optional<LaneEstimate>& prev,
                     const std::vector<RoadSign>& signs);

std::vector<LaneParticle> reset_filter(const LaneBase& base, int ipm_h, const CurvatureParams& params,
                                       Rng& rng);

void predict(std::vector<LaneParticle>& particles, const LaneBase& base, int ipm_h,
             const CurvatureParams& params, Rng& rng);

struct WeighDetail {
    double l = 0, r = 0;
    double w1_prime = 0, w2_prime = 0;
    double w = 0;
};
WeighDetail weigh_detailed(const LaneParticle& p, const BinaryMap& cmb, const TrustArea& trust,
                           const CurvatureParams& params);
double weigh(const LaneParticle& p, const BinaryMap& cmb, const TrustArea& trust,
             const CurvatureParams& params);

struct ResampleResult {
    std::vector<LaneParticle> particles;
    LaneEstimate estimate;
    bool degenerate_weights = false;  // all-zero weights: uniform fallback
};

// Low-variance (systematic) resampling plus the weighted-average virtual
// particle, averaged over the pre-resampling set.
ResampleResult resample_and_estimate(const std::vector<LaneParticle>& particles,
                                     const std::vector<double>& weights, const LaneBase& base,
                                     int ipm_h, const CurvatureParams& params, Rng& rng);

LaneEstimate estimate_from_base(const LaneBase& base, int ipm_h, int trust_h);

// Per-stream filter state.
class CurvatureFilter {
public:
    explicit CurvatureFilter(const CurvatureParams& params) : params_(params) {}
    CurvatureFilter() = default;

    bool initialized() const { return !particles_.empty(); }
    void reset() { particles_.clear(); }

    LaneEstimate step(const LaneBase& base, const BinaryMap& cmb, const TrustArea& trust, Rng& rng);

    const std::vector<LaneParticle>& particles() const { return particles_; }
    bool last_degenerate() const { return last_degenerate_; }

private:
    CurvatureParams params_;
    std::vector<LaneParticle> particles_;
    bool last_degenerate_ = false;
};

}  // namespace elas
