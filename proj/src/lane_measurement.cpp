#include "elas/lane_measurement.hpp"

#include <algorithm>
#include <cmath>

namespace elas {

double line_evidence_score(const HoughLine& line, const BinaryMap& cmb, double b) {
    if (b <= 0) throw std::invalid_argument("line_evidence_score: b must be positive");
    int y0 = std::clamp(int(std::ceil(std::min(line.p0.y, line.p1.y))), 0, cmb.height - 1);
    int y1 = std::clamp(int(std::floor(std::max(line.p0.y, line.p1.y))), 0, cmb.height - 1);
    double dy = line.p1.y - line.p0.y;
    double score = 0.0;
    const int reach = int(std::ceil(b));
    for (int y = y0; y <= y1; ++y) {
        double x;
        if (std::abs(dy) < 1e-9)
            x = 0.5 * (line.p0.x + line.p1.x);
        else
            x = line.p0.x + (y - line.p0.y) * (line.p1.x - line.p0.x) / dy;
        int xc = int(std::lround(x));
        double dist = std::numeric_limits<double>::infinity();
        for (int off = -reach; off <= reach; ++off) {
            int xx = xc + off;
            if (xx < 0 || xx >= cmb.width || !cmb.at(xx, y)) continue;
            dist = std::min(dist, std::abs(double(xx) - x));
        }
        if (dist < b) score += b - dist;
    }
    return score;
}

HoughLine make_full_height_line(double rho, double theta_deg, int width, int height) {
    (void)width;
    HoughLine l;
    l.rho = rho;
    l.theta = theta_deg;
    double cot = std::abs(std::sin(theta_deg * M_PI / 180.0)) < 1e-9
                     ? 0.0
                     : std::cos(theta_deg * M_PI / 180.0) / std::sin(theta_deg * M_PI / 180.0);
    l.p0 = {rho, double(height - 1)};
    l.p1 = {rho + (height - 1) * cot, 0.0};
    return l;
}

double lane_validity_score(const BinaryMap& cmb, double p_b, double p_t, double width, double b) {
    double theta = std::atan2(double(cmb.height - 1), p_t - p_b) * 180.0 / M_PI;
    HoughLine left = make_full_height_line(p_b - width / 2, theta, cmb.width, cmb.height);
    HoughLine right = make_full_height_line(p_b + width / 2, theta, cmb.width, cmb.height);
    return line_evidence_score(left, cmb, b) + line_evidence_score(right, cmb, b);
}

std::vector<double> apply_punishment(const std::vector<double>& h1d, int split_index, double gamma,
                                     int neutral_halfwidth_bins) {
    if (gamma < 0 || gamma > 1) throw std::invalid_argument("apply_punishment: gamma in [0,1]");
    std::vector<double> out = h1d;
    const int n = int(h1d.size());
    if (n == 0) return out;

    // right half, scanning outward from the neutral band edge
    double m = 0.0;
    for (int x = split_index + neutral_halfwidth_bins + 1; x < n; ++x) {
        if (x < 0) continue;
        out[size_t(x)] = h1d[size_t(x)] * (1.0 - gamma * m);
        m = std::max(m, h1d[size_t(x)]);
    }
    // left half
    m = 0.0;
    for (int x = split_index - neutral_halfwidth_bins - 1; x >= 0; --x) {
        if (x >= n) continue;
        out[size_t(x)] = h1d[size_t(x)] * (1.0 - gamma * m);
        m = std::max(m, h1d[size_t(x)]);
    }
    return out;
}

SideCandidates select_side_candidates(const std::vector<HoughLine>& lines, const BinaryMap& cmb,
                                      double vehicle_x, const SideCandidateParams& params) {
    SideCandidates result;
    if (lines.empty()) return result;

    std::vector<double> weights(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) weights[i] = line_evidence_score(lines[i], cmb, params.b);

    Histogram2D h2d = angle_histogram_2d(lines, weights);
    auto alpha = dominant_angle(h2d, params.d);
    if (!alpha) return result;
    result.dominant_angle_deg = *alpha;

    // Equation-8 1D reduction: per rho bin, the maximum over the angle band
    // around alpha. Remember which line fed each bin.
    const int n = h2d.n_rho();
    std::vector<double> h1d(size_t(n), 0.0);
    std::vector<int> src_line(size_t(n), -1);
    int alpha_bin = h2d.angle_index(*alpha);
    int band = int(std::lround(params.delta_deg / h2d.angle_bin()));
    for (int x = 0; x < n; ++x) {
        for (int k = -band; k <= band; ++k) {
            int y = ((alpha_bin + k) % h2d.n_angle() + h2d.n_angle()) % h2d.n_angle();
            double w = h2d.weight(x, y);
            if (w > h1d[size_t(x)]) {
                h1d[size_t(x)] = w;
                src_line[size_t(x)] = h2d.best_line(x, y);
            }
        }
    }
    double max_w = *std::max_element(h1d.begin(), h1d.end());
    if (max_w <= 0) return result;
    for (auto& v : h1d) v /= max_w;

    int split = int(std::floor(vehicle_x / h2d.rho_bin()));
    int neutral_bins = int(std::lround(params.neutral_halfwidth / h2d.rho_bin()));
    std::vector<double> punished = apply_punishment(h1d, split, params.gamma, neutral_bins);

    auto pick = [&](int lo, int hi) -> std::optional<HoughLine> {
        int best = -1;
        double best_v = 0;
        for (int x = std::max(0, lo); x < std::min(n, hi); ++x) {
            if (punished[size_t(x)] > best_v) {
                best_v = punished[size_t(x)];
                best = x;
            }
        }
        if (best < 0 || src_line[size_t(best)] < 0) return std::nullopt;
        return lines[size_t(src_line[size_t(best)])];
    };
    result.left = pick(0, split + 1);
    result.right = pick(split + 1, n);
    return result;
}

SideBuffers::Update SideBuffers::update(const std::optional<RhoTheta>& candidate, double dist_thresh) {
    Update result;
    if (!candidate) return result;

    bool accept;
    if (correct_.size() < kCapacity) {
        accept = true;
    } else {
        RhoTheta mean = mean_correct();
        double d = std::hypot(candidate->rho - mean.rho, candidate->theta - mean.theta);
        accept = d < dist_thresh;
    }

    if (accept) {
        correct_.push_back(*candidate);
        if (correct_.size() > kCapacity) correct_.pop_front();
        incorrect_.clear();
        result.accepted = true;
        return result;
    }

    incorrect_.push_back(*candidate);
    if (incorrect_.size() > kCapacity) incorrect_.pop_front();
    if (incorrect_.size() == kCapacity) {
        // Ten coherent rejections: the world changed, not the measurements.
        std::swap(correct_, incorrect_);
        incorrect_.clear();
        result.accepted = true;
        result.force_swap = true;
    }
    return result;
}

RhoTheta SideBuffers::mean_correct() const {
    RhoTheta m;
    if (correct_.empty()) return m;
    double sr = 0, st = 0;
    for (const auto& c : correct_) {
        sr += c.rho;
        st += c.theta;
    }
    m.rho = sr / double(correct_.size());
    m.theta = st / double(correct_.size());
    return m;
}

void SideBuffers::clear() {
    correct_.clear();
    incorrect_.clear();
}

std::optional<LaneMeasurement> build_measurement(const std::optional<HoughLine>& left,
                                                 const std::optional<HoughLine>& right,
                                                 const std::optional<LaneMeasurement>& prev,
                                                 const BinaryMap& cmb, double validity_thresh,
                                                 double b) {
    const int h = cmb.height;
    HoughLine l, r;
    LaneMeasurement::Source source;

    if (left && right) {
        l = make_full_height_line(left->rho, left->theta, cmb.width, h);
        r = make_full_height_line(right->rho, right->theta, cmb.width, h);
        source = LaneMeasurement::Source::Pair;
    } else if (left && prev) {
        l = make_full_height_line(left->rho, left->theta, cmb.width, h);
        r = make_full_height_line(left->rho + prev->width, left->theta, cmb.width, h);
        source = LaneMeasurement::Source::SingleLeft;
    } else if (right && prev) {
        r = make_full_height_line(right->rho, right->theta, cmb.width, h);
        l = make_full_height_line(right->rho - prev->width, right->theta, cmb.width, h);
        source = LaneMeasurement::Source::SingleRight;
    } else if (!left && !right && prev) {
        LaneMeasurement carried = *prev;
        carried.source = LaneMeasurement::Source::CarryOver;
        double v = lane_validity_score(cmb, carried.p_b, carried.p_t, carried.width, b);
        if (v > validity_thresh) return carried;
        return std::nullopt;
    } else {
        return std::nullopt;
    }

    double width = r.rho - l.rho;
    if (width <= 0) return std::nullopt;

    double v = line_evidence_score(l, cmb, b) + line_evidence_score(r, cmb, b);
    if (v <= validity_thresh) return std::nullopt;

    LaneMeasurement m;
    m.p_b = 0.5 * (l.rho + r.rho);
    m.p_t = 0.5 * (l.x_at(0, h) + r.x_at(0, h));
    m.width = width;
    m.theta = std::atan2(double(h - 1), m.p_t - m.p_b) * 180.0 / M_PI;
    m.source = source;
    return m;
}

}  // namespace elas
