#include "elas/road_markings.hpp"

#include <algorithm>
#include <cmath>

#include "elas/kernels.hpp"

namespace elas {

void Histogram2D::add(double rho, double theta, double w, int line_index) {
    int x = rho_index(rho);
    int y = angle_index(theta);
    if (!in_range(x, y)) return;
    size_t i = size_t(y) * n_rho_ + x;
    weight_[i] += w;
    if (best_[i] < 0 || w > best_w_[i]) {
        best_[i] = line_index;
        best_w_[i] = w;
    }
}

double Histogram2D::total() const {
    double t = 0;
    for (double w : weight_) t += w;
    return t;
}

Histogram2D angle_histogram_2d(const std::vector<HoughLine>& lines, const std::vector<double>& weights,
                               int n_rho, int n_angle) {
    if (weights.size() != lines.size())
        throw std::invalid_argument("angle_histogram_2d: weights/lines length mismatch");
    Histogram2D h(n_rho, n_angle);
    for (size_t i = 0; i < lines.size(); ++i) h.add(lines[i].rho, lines[i].theta, weights[i], int(i));
    return h;
}

std::optional<double> dominant_angle(const Histogram2D& h2d, int d) {
    const int m = h2d.n_angle();
    std::vector<double> row_sum(size_t(m), 0.0);
    double total = 0;
    for (int y = 0; y < m; ++y) {
        for (int x = 0; x < h2d.n_rho(); ++x) row_sum[size_t(y)] += h2d.weight(x, y);
        total += row_sum[size_t(y)];
    }
    if (total <= 0) return std::nullopt;
    std::vector<double> windowed(size_t(m), 0.0);
    double best_sum = -1;
    for (int i = 0; i < m; ++i) {
        double s = 0;
        for (int k = -d; k <= d; ++k) s += row_sum[size_t(((i + k) % m + m) % m)];
        windowed[size_t(i)] = s;
        best_sum = std::max(best_sum, s);
    }
    // Ties form a contiguous run around the true peak; report its center.
    // (Wrapping runs are unstitched here; lane/crosswalk angles sit far from
    // the 0/360 seam.)
    int run_start = -1, best_start = 0, best_len = 0;
    for (int i = 0; i <= m; ++i) {
        bool is_max = i < m && windowed[size_t(i)] >= best_sum - 1e-12;
        if (is_max && run_start < 0) run_start = i;
        if (!is_max && run_start >= 0) {
            if (i - run_start > best_len) {
                best_len = i - run_start;
                best_start = run_start;
            }
            run_start = -1;
        }
    }
    int best = best_start + (best_len - 1) / 2;
    return best * h2d.angle_bin();
}

double crosswalk_score(const std::vector<int>& projected) {
    const int n = int(projected.size());
    if (n < 4) return -double(n);
    std::vector<int> s(projected.size());
    for (size_t i = 0; i < projected.size(); ++i) s[i] = projected[i] ? 1 : -1;
    auto corr_neg = [&](int lag) {
        // correlation of s against its negation at the given shift
        int lo = std::max(0, -lag), hi = std::min(n, n - lag);
        long acc = 0;
        for (int i = lo; i < hi; ++i) acc += s[size_t(i)] * s[size_t(i + lag)];
        return double(-acc);
    };
    double max_left = -1e18, max_right = -1e18;
    for (int lag = -n / 2; lag < 0; ++lag) max_left = std::max(max_left, corr_neg(lag));
    for (int lag = 0; lag <= n / 2; ++lag) max_right = std::max(max_right, corr_neg(lag));
    return max_left + max_right;
}

namespace {

Rect clamp_rect(Rect r, int w, int h) {
    int x0 = std::clamp(r.x, 0, w - 1);
    int y0 = std::clamp(r.y, 0, h - 1);
    int x1 = std::clamp(r.x + r.width, x0 + 1, w);
    int y1 = std::clamp(r.y + r.height, y0 + 1, h);
    return {x0, y0, x1 - x0, y1 - y0};
}

BinaryMap crop(const BinaryMap& m, const Rect& r) {
    BinaryMap out(r.width, r.height);
    for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x) out.at(x, y) = m.at(x + r.x, y + r.y);
    return out;
}

}  // namespace

CrosswalkResult detect_crosswalk(const BinaryMap& dog, const std::optional<LaneEstimate>& prev_lane,
                                 const CrosswalkParams& params) {
    CrosswalkResult result;

    BinaryMap closed = morph(dog, MorphOp::Close, 5, 5);
    BinaryMap eroded = morph(closed, MorphOp::Erode, 9, 3);

    Rect region = params.search_region;
    if (prev_lane) {
        double mid_row = 0.5 * (params.region_row_top + params.region_row_bottom);
        double center = prev_lane->center_at(mid_row);
        double w = prev_lane->w1;
        region = Rect{int(center - w / 2), params.region_row_top, int(w),
                      params.region_row_bottom - params.region_row_top};
    }
    region = clamp_rect(region, dog.width, dog.height);
    result.region = region;

    BinaryMap sub = crop(eroded, region);
    auto lines = hough_lines_probabilistic(sub, params.hough);
    if (lines.empty()) return result;  // no Hough lines: assumed no crosswalk

    Histogram2D h2d = angle_histogram_2d(lines, std::vector<double>(lines.size(), 1.0),
                                         std::max(1, sub.width / 3 + 1));
    auto alpha = dominant_angle(h2d, 5);
    if (!alpha) return result;
    result.dominant_angle_deg = *alpha;

    // Rotate so the dominant stripe direction is vertical, then project each
    // column (vertical maximum) down to one binary row. Stripes are expected
    // near-vertical; a horizontal dominant angle (a stop-line-like bar) gets
    // no rotation compensation rather than being spun into a thin strip.
    double correction = std::abs(*alpha - 90.0) <= 45.0 ? *alpha - 90.0 : 0.0;
    BinaryMap upright = rotate_binary(sub, correction);
    std::vector<int> projected(size_t(upright.width), 0);
    for (int x = 0; x < upright.width; ++x)
        for (int y = 0; y < upright.height; ++y)
            if (upright.at(x, y)) {
                projected[size_t(x)] = 1;
                break;
            }
    result.f_r = crosswalk_score(projected);
    result.detected = result.f_r > 0.0;
    return result;
}

const char* to_string(SignClass c) {
    switch (c) {
        case SignClass::StopLine: return "stop_line";
        case SignClass::Arrow1: return "arrow_1";
        case SignClass::Arrow2: return "arrow_2";
        case SignClass::Arrow3: return "arrow_3";
        case SignClass::Arrow4: return "arrow_4";
        case SignClass::Arrow5: return "arrow_5";
        case SignClass::Arrow6: return "arrow_6";
        case SignClass::Arrow7: return "arrow_7";
        case SignClass::Arrow8: return "arrow_8";
        case SignClass::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<SignClass> sign_class_from_string(const std::string& name) {
    for (int i = 0; i <= int(SignClass::Unknown); ++i)
        if (name == to_string(SignClass(i))) return SignClass(i);
    return std::nullopt;
}

namespace {

struct RotatedView {
    // Maps rotated coordinates back into the source image (rotation by angle
    // around the image center, same convention as rotate_binary).
    double c, s, cx, cy;
    RotatedView(int w, int h, double angle_deg) {
        double a = angle_deg * M_PI / 180.0;
        c = std::cos(a);
        s = std::sin(a);
        cx = (w - 1) * 0.5;
        cy = (h - 1) * 0.5;
    }
    void to_source(double x, double y, double& sx, double& sy) const {
        double dx = x - cx, dy = y - cy;
        sx = cx + c * dx + s * dy;
        sy = cy - s * dx + c * dy;
    }
    void from_source(double sx, double sy, double& x, double& y) const {
        double dx = sx - cx, dy = sy - cy;
        x = cx + c * dx - s * dy;
        y = cy + s * dx + c * dy;
    }
};

}  // namespace

std::vector<Rect> extract_sign_candidates(const BinaryMap& dog, const BinaryMap& vad,
                                          const GrayImage& ipm_gray,
                                          const std::optional<LaneEstimate>& lane,
                                          const SignCandidateParams& params) {
    BinaryMap comb = kernels::binary_or(dog, vad);
    const int W = comb.width, H = comb.height;

    double angle = lane ? lane->theta - 90.0 : 0.0;
    const bool rotated = std::abs(angle) > 0.5;
    RotatedView view(W, H, angle);
    BinaryMap work = rotated ? rotate_binary(comb, angle) : comb;

    // Lane band in working coordinates.
    double band_center, band_w;
    if (lane) {
        double ax = lane->x1, ay = lane->y1, rx, ry;
        view.from_source(ax, ay, rx, ry);
        band_center = rotated ? rx : ax;
        band_w = lane->w1;
    } else {
        band_center = W * 0.5;
        band_w = params.default_lane_width;
    }
    int bx0 = std::clamp(int(band_center - band_w / 2), 0, W - 1);
    int bx1 = std::clamp(int(band_center + band_w / 2), bx0 + 1, W);

    // Vertical continuity scan over the horizontal-maximum projection.
    std::vector<uint8_t> row_ev(size_t(H), 0);
    for (int y = 0; y < H; ++y)
        for (int x = bx0; x < bx1; ++x)
            if (work.at(x, y)) {
                row_ev[size_t(y)] = 1;
                break;
            }

    std::vector<Rect> out;
    int y = 0;
    while (y < H) {
        if (!row_ev[size_t(y)]) {
            ++y;
            continue;
        }
        int run_start = y, last_ev = y;
        int yy = y + 1;
        while (yy < H && yy - last_ev <= params.row_gap + 1) {
            if (row_ev[size_t(yy)]) last_ev = yy;
            ++yy;
        }
        int run_end = last_ev;  // inclusive
        y = yy;
        if (run_end - run_start + 1 < params.min_height) continue;

        // Horizontal projection trims the bbox.
        int cx0 = -1, cx1 = -1;
        for (int x = bx0; x < bx1; ++x) {
            bool any = false;
            for (int ry = run_start; ry <= run_end; ++ry)
                if (work.at(x, ry)) {
                    any = true;
                    break;
                }
            if (any) {
                if (cx0 < 0) cx0 = x;
                cx1 = x;
            }
        }
        if (cx0 < 0) continue;

        // Road signs sit near the lane center: demand evidence there.
        double half_band = band_w * params.center_band * 0.5;
        int mid0 = std::clamp(int(band_center - half_band), 0, W - 1);
        int mid1 = std::clamp(int(band_center + half_band), mid0 + 1, W);
        bool center_hit = false;
        for (int x = std::max(cx0, mid0); x <= std::min(cx1, mid1 - 1) && !center_hit; ++x)
            for (int ry = run_start; ry <= run_end; ++ry)
                if (work.at(x, ry)) {
                    center_hit = true;
                    break;
                }
        if (!center_hit) continue;

        // Intensity check against the surrounding band (asphalt).
        auto sample = [&](int x, int ry) -> int {
            if (!rotated) return ipm_gray.at(x, ry);
            double sx, sy;
            view.to_source(x, ry, sx, sy);
            int ix = int(std::lround(sx)), iy = int(std::lround(sy));
            return ipm_gray.inside(ix, iy) ? ipm_gray.at(ix, iy) : -1;
        };
        double sum_in = 0, n_in = 0, sum_out = 0, sq_out = 0, n_out = 0;
        for (int ry = run_start; ry <= run_end; ++ry) {
            for (int x = bx0; x < bx1; ++x) {
                int v = sample(x, ry);
                if (v < 0) continue;
                if (x >= cx0 && x <= cx1) {
                    sum_in += v;
                    ++n_in;
                } else {
                    sum_out += v;
                    sq_out += double(v) * v;
                    ++n_out;
                }
            }
        }
        if (n_in > 0 && n_out > 0) {
            double mean_in = sum_in / n_in;
            double mean_out = sum_out / n_out;
            double var = sq_out / n_out - mean_out * mean_out;
            double std_out = var > 0 ? std::sqrt(var) : 0.0;
            if (mean_in <= mean_out + std_out) continue;
        }

        Rect bbox{cx0, run_start, cx1 - cx0 + 1, run_end - run_start + 1};
        if (rotated) {
            // axis-aligned hull of the back-rotated corners
            double xs[4], ys[4];
            double corners[4][2] = {{double(bbox.x), double(bbox.y)},
                                    {double(bbox.x + bbox.width), double(bbox.y)},
                                    {double(bbox.x), double(bbox.y + bbox.height)},
                                    {double(bbox.x + bbox.width), double(bbox.y + bbox.height)}};
            for (int i = 0; i < 4; ++i) view.to_source(corners[i][0], corners[i][1], xs[i], ys[i]);
            double x0 = *std::min_element(xs, xs + 4), x1 = *std::max_element(xs, xs + 4);
            double y0 = *std::min_element(ys, ys + 4), y1 = *std::max_element(ys, ys + 4);
            bbox = clamp_rect(Rect{int(x0), int(y0), int(x1 - x0 + 1), int(y1 - y0 + 1)}, W, H);
        }
        out.push_back(bbox);
    }
    return out;
}

RoadSign classify_sign(const GrayImage& candidate, const Rect& bbox, const TemplateSet& templates,
                       double aspect_thresh, double match_thresh) {
    if (candidate.width <= 0 || candidate.height <= 0)
        throw std::invalid_argument("classify_sign: empty candidate");
    RoadSign sign;
    sign.bbox = bbox;
    if (bbox.height > 0 && double(bbox.width) / bbox.height > aspect_thresh) {
        sign.cls = SignClass::StopLine;
        sign.score = 0.0;
        return sign;
    }
    GrayImage norm = kernels::resize_bilinear(candidate, 32, 32);
    double best = -2.0;
    int best_idx = -1;
    for (int i = 0; i < 8; ++i) {
        double score = ncc(norm, templates.arrows[size_t(i)]);
        if (score > best) {
            best = score;
            best_idx = i;
        }
    }
    sign.score = best;
    sign.cls = best > match_thresh ? SignClass(int(SignClass::Arrow1) + best_idx) : SignClass::Unknown;
    return sign;
}

FeatureMaps remove_markings(const FeatureMaps& maps, const CrosswalkResult& crosswalk,
                            const std::vector<RoadSign>& signs) {
    FeatureMaps out = maps;
    std::vector<Rect> regions;
    if (crosswalk.detected) regions.push_back(crosswalk.region);
    for (const auto& s : signs) regions.push_back(s.bbox);

    for (const Rect& r0 : regions) {
        Rect r = r0.dilated(2, maps.srf.width, maps.srf.height);
        for (int y = r.y; y < r.y + r.height; ++y)
            for (int x = r.x; x < r.x + r.width; ++x) {
                out.srf.at(x, y) = 0;
                out.dog.at(x, y) = 0;
                out.vad.at(x, y) = 0;
                out.inb.at(x, y) = 0;
            }
    }
    out.cmb = combined_map(out.srf, out.inb);
    return out;
}

}  // namespace elas
