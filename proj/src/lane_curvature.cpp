#include "elas/lane_curvature.hpp"

#include <algorithm>
#include <cmath>

namespace elas {

namespace {

struct ControlRows {
    double y1, y2, y3;
};

ControlRows control_rows(int ipm_h) {
    return {double(ipm_h - 1), (ipm_h - 1) * 0.5, 0.0};
}

double base_line_at(const LaneBase& base, int ipm_h, double y) {
    // straight line through (p_b, bottom) and (p_t, top)
    double t = (ipm_h - 1 - y) / double(ipm_h - 1);
    return base.p_b + (base.p_t - base.p_b) * t;
}

LaneEstimate particle_to_estimate(const LaneParticle& p, const LaneBase& base, int ipm_h, int trust_h) {
    ControlRows rows = control_rows(ipm_h);
    LaneEstimate e;
    e.x1 = p.x1;
    e.x2 = p.x2;
    e.x3 = p.x3;
    e.y1 = rows.y1;
    e.y2 = rows.y2;
    e.y3 = rows.y3;
    e.w1 = p.w1;
    e.w2 = p.w2;
    e.trust_h = trust_h;
    e.theta = base.theta(ipm_h);
    return e;
}

// mirrored draw: Gaussian magnitude applied toward the target side
double mirrored_gaussian(double center, double toward, double sigma, Rng& rng) {
    double g = std::abs(rng.gaussian(0.0, sigma));
    double dir = toward >= center ? 1.0 : -1.0;
    return center + dir * g;
}

}  // namespace

TrustArea trust_area(const BinaryMap& vad, const std::optional<LaneEstimate>& prev,
                     const std::vector<RoadSign>& signs) {
    const int H = vad.height;
    int h = H;

    for (const auto& s : signs) {
        if (s.cls != SignClass::StopLine) continue;
        int near_row = s.bbox.y + s.bbox.height - 1;
        h = std::min(h, H - 1 - near_row);
    }

    if (prev) {
        for (int y = H - 1; y >= 0; --y) {
            if (H - 1 - y >= h) break;  // rows above an existing delimiter cannot shrink h
            double center = prev->center_at(y);
            double quarter = prev->width_at(y) * 0.25;
            int x0 = std::clamp(int(center - quarter), 0, vad.width - 1);
            int x1 = std::clamp(int(center + quarter), 0, vad.width - 1);
            for (int x = x0; x <= x1; ++x) {
                if (!vad.at(x, y)) continue;
                bool inside_sign = false;
                for (const auto& s : signs) {
                    if (s.cls == SignClass::StopLine) continue;
                    if (s.bbox.contains(x, y)) {
                        inside_sign = true;
                        break;
                    }
                }
                if (!inside_sign) {
                    h = std::min(h, H - 1 - y);
                    break;
                }
            }
        }
    }
    return TrustArea{std::max(0, h)};
}

std::vector<LaneParticle> reset_filter(const LaneBase& base, int ipm_h, const CurvatureParams& params,
                                       Rng& rng) {
    ControlRows rows = control_rows(ipm_h);
    std::vector<LaneParticle> out(size_t(params.particle_count));
    for (auto& p : out) {
        p.w1 = base.width;
        p.x1 = base.p_b;
        p.x2 = base_line_at(base, ipm_h, rows.y2) + rng.gaussian(0.0, params.sigma_init);
        p.x3 = base_line_at(base, ipm_h, rows.y3) + rng.gaussian(0.0, params.sigma_init);
        p.w2 = std::max(2.0, base.width + rng.gaussian(0.0, params.sigma_init));
    }
    return out;
}

void predict(std::vector<LaneParticle>& particles, const LaneBase& base, int ipm_h,
             const CurvatureParams& params, Rng& rng) {
    ControlRows rows = control_rows(ipm_h);
    double theta = base.theta(ipm_h) * M_PI / 180.0;
    double cot = std::abs(std::sin(theta)) < 1e-9 ? 0.0 : std::cos(theta) / std::sin(theta);
    for (auto& p : particles) {
        p.w1 = base.width;
        p.x1 = base.p_b;

        // x2: projection of the base point along the lane direction
        double proj2 = p.x1 + (rows.y1 - rows.y2) * cot;
        double sigma2 = std::abs(p.x2 - proj2) / 3.0;
        double ref2 = mirrored_gaussian(p.x2, proj2, sigma2, rng);
        double x2 = ref2 + rng.gaussian(0.0, params.sigma_fixed_x);

        // x3: same scheme, full-size dynamic sigma, projected through the
        // newly chosen x2
        double proj3 = p.x1 + (x2 - p.x1) * (rows.y1 - rows.y3) / (rows.y1 - rows.y2);
        double sigma3 = std::abs(p.x3 - proj3);
        double ref3 = mirrored_gaussian(p.x3, proj3, sigma3, rng);
        double x3 = ref3 + rng.gaussian(0.0, params.sigma_fixed_x);

        p.x2 = x2;
        p.x3 = x3;
        p.w2 = std::max(2.0, p.w2 + rng.gaussian(0.0, params.sigma_fixed_w));
    }
}

WeighDetail weigh_detailed(const LaneParticle& p, const BinaryMap& cmb, const TrustArea& trust,
                           const CurvatureParams& params) {
    WeighDetail detail;
    const int H = cmb.height;
    const int h = std::clamp(trust.h, 1, H);
    LaneEstimate e;
    ControlRows rows = control_rows(H);
    e.x1 = p.x1;
    e.x2 = p.x2;
    e.x3 = p.x3;
    e.y1 = rows.y1;
    e.y2 = rows.y2;
    e.y3 = rows.y3;
    e.w1 = p.w1;
    e.w2 = p.w2;

    const int d = params.d_inner(p.w1);
    const int inset = params.inner_inset;
    long on_left = 0, on_right = 0, inner = 0;

    auto evidence_near = [&](double x, int y) {
        int xc = int(std::lround(x));
        for (int off = -1; off <= 1; ++off) {
            int xx = xc + off;
            if (xx >= 0 && xx < cmb.width && cmb.at(xx, y)) return true;
        }
        return false;
    };

    for (int k = 0; k < h; ++k) {
        int y = H - 1 - k;
        double left = e.left_at(y);
        double right = e.right_at(y);
        if (evidence_near(left, y)) ++on_left;
        if (evidence_near(right, y)) ++on_right;
        int lx = int(std::lround(left));
        int rx = int(std::lround(right));
        for (int j = inset; j < inset + d; ++j) {
            int xl = lx + j;
            int xr = rx - j;
            if (xl >= 0 && xl < cmb.width && cmb.at(xl, y)) ++inner;
            if (xr >= 0 && xr < cmb.width && cmb.at(xr, y)) ++inner;
        }
    }

    detail.l = double(on_left) / h;
    detail.r = double(on_right) / h;
    double lr = detail.l * detail.r;
    detail.w1_prime = 1.0 - (lr + (1.0 - lr) * 0.5 * (detail.l + detail.r));
    detail.w2_prime = double(inner) / double(2 * d * h);

    auto g = [](double x, double sigma) { return std::exp(-0.5 * x * x / (sigma * sigma)); };
    detail.w = g(detail.w1_prime, params.sigma1) * g(detail.w2_prime, params.sigma2);
    return detail;
}

double weigh(const LaneParticle& p, const BinaryMap& cmb, const TrustArea& trust,
             const CurvatureParams& params) {
    return weigh_detailed(p, cmb, trust, params).w;
}

LaneEstimate estimate_from_base(const LaneBase& base, int ipm_h, int trust_h) {
    ControlRows rows = control_rows(ipm_h);
    LaneEstimate e;
    e.x1 = base.p_b;
    e.x2 = base_line_at(base, ipm_h, rows.y2);
    e.x3 = base.p_t;
    e.y1 = rows.y1;
    e.y2 = rows.y2;
    e.y3 = rows.y3;
    e.w1 = e.w2 = base.width;
    e.trust_h = trust_h;
    e.theta = base.theta(ipm_h);
    return e;
}

ResampleResult resample_and_estimate(const std::vector<LaneParticle>& particles,
                                     const std::vector<double>& weights, const LaneBase& base,
                                     int ipm_h, const CurvatureParams& params, Rng& rng) {
    if (particles.empty() || weights.size() != particles.size())
        throw std::invalid_argument("resample_and_estimate: bad inputs");
    ResampleResult result;
    const size_t n = particles.size();

    double total = 0;
    for (double w : weights) total += w;
    std::vector<double> eff = weights;
    if (total <= 0) {
        result.degenerate_weights = true;
        std::fill(eff.begin(), eff.end(), 1.0);
        total = double(n);
    }

    // virtual particle: weighted average of the current set
    LaneParticle mean;
    mean.x1 = base.p_b;
    mean.w1 = base.width;
    for (size_t i = 0; i < n; ++i) {
        double w = eff[i] / total;
        mean.x2 += w * particles[i].x2;
        mean.x3 += w * particles[i].x3;
        mean.w2 += w * particles[i].w2;
    }
    result.estimate = particle_to_estimate(mean, base, ipm_h, ipm_h);

    // systematic resampling: one uniform draw
    double step = total / double(n);
    double pos = rng.uniform() * step;
    result.particles.reserve(n);
    double cum = eff[0];
    size_t idx = 0;
    for (size_t k = 0; k < n; ++k) {
        double target = pos + double(k) * step;
        while (cum < target && idx + 1 < n) cum += eff[++idx];
        result.particles.push_back(particles[idx]);
    }
    return result;
}

LaneEstimate CurvatureFilter::step(const LaneBase& base, const BinaryMap& cmb, const TrustArea& trust,
                                   Rng& rng) {
    const int ipm_h = cmb.height;
    if (params_.particle_count <= 0) throw std::invalid_argument("CurvatureFilter: no particles");
    if (!initialized()) particles_ = reset_filter(base, ipm_h, params_, rng);

    predict(particles_, base, ipm_h, params_, rng);
    last_degenerate_ = false;

    if (trust.h < params_.min_trust_rows) {
        // coasting: no correction, report the unweighted cloud mean
        std::vector<double> uniform(particles_.size(), 1.0);
        ResampleResult r = resample_and_estimate(particles_, uniform, base, ipm_h, params_, rng);
        r.estimate.trust_h = trust.h;
        return r.estimate;
    }

    std::vector<double> weights(particles_.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < long(particles_.size()); ++i)
        weights[size_t(i)] = weigh(particles_[size_t(i)], cmb, trust, params_);

    ResampleResult r = resample_and_estimate(particles_, weights, base, ipm_h, params_, rng);
    particles_ = std::move(r.particles);
    last_degenerate_ = r.degenerate_weights;
    r.estimate.trust_h = trust.h;
    return r.estimate;
}

}  // namespace elas
