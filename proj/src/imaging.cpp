#include "elas/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "elas/kernels.hpp"

namespace elas {

double HoughLine::x_at(double y, int image_height) const {
    double dx = p1.x - p0.x;
    double dy = p1.y - p0.y;
    if (std::abs(dy) < 1e-9) return 0.5 * (p0.x + p1.x);
    (void)image_height;
    return p0.x + (y - p0.y) * dx / dy;
}

GrayImage warp_ipm(const GrayImage& img, const Homography& h, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw CalibrationError("warp_ipm: output size must be positive");
    return kernels::warp_gray(img, h.inverse(), out_w, out_h);
}

ColorImage warp_ipm(const ColorImage& img, const Homography& h, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw CalibrationError("warp_ipm: output size must be positive");
    return kernels::warp_color(img, h.inverse(), out_w, out_h);
}

BinaryMap warp_ipm(const BinaryMap& map, const Homography& h, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw CalibrationError("warp_ipm: output size must be positive");
    return kernels::warp_binary(map, h.inverse(), out_w, out_h);
}

int segment_support(const BinaryMap& map, const Point2& p0, const Point2& p1, double max_dist) {
    double dx = p1.x - p0.x, dy = p1.y - p0.y;
    double len2 = dx * dx + dy * dy;
    int x_lo = std::max(0, int(std::floor(std::min(p0.x, p1.x) - max_dist - 1)));
    int x_hi = std::min(map.width - 1, int(std::ceil(std::max(p0.x, p1.x) + max_dist + 1)));
    int y_lo = std::max(0, int(std::floor(std::min(p0.y, p1.y) - max_dist - 1)));
    int y_hi = std::min(map.height - 1, int(std::ceil(std::max(p0.y, p1.y) + max_dist + 1)));
    int count = 0;
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            if (!map.at(x, y)) continue;
            double t = len2 > 0 ? ((x - p0.x) * dx + (y - p0.y) * dy) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            double cx = p0.x + t * dx - x;
            double cy = p0.y + t * dy - y;
            if (cx * cx + cy * cy <= max_dist * max_dist) ++count;
        }
    }
    return count;
}

namespace {

struct PixelRef {
    int x, y;
};

}  // namespace

std::vector<HoughLine> hough_lines_probabilistic(const BinaryMap& map, const HoughParams& params) {
    std::vector<HoughLine> lines;
    std::vector<PixelRef> points;
    points.reserve(1024);
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x)
            if (map.at(x, y)) points.push_back({x, y});
    if (points.empty()) return lines;

    const int n_theta = std::max(1, int(std::lround(180.0 / params.theta_res_deg)));
    std::vector<double> sin_t, cos_t;
    sin_t.resize(size_t(n_theta));
    cos_t.resize(size_t(n_theta));
    for (int t = 0; t < n_theta; ++t) {
        double a = t * params.theta_res_deg * M_PI / 180.0;
        sin_t[size_t(t)] = std::sin(a);
        cos_t[size_t(t)] = std::cos(a);
    }
    const int diag = int(std::ceil(std::hypot(map.width, map.height)));
    const int n_rho = 2 * diag + 1;
    std::vector<int> acc(size_t(n_theta) * n_rho, 0);
    auto rho_index = [&](int x, int y, int t) {
        // t is the line direction (cos t, -sin t); its normal is (sin t, cos t).
        int r = int(std::lround(x * sin_t[size_t(t)] + y * cos_t[size_t(t)]));
        return std::clamp(r + diag, 0, n_rho - 1);
    };

    BinaryMap working = map;
    BinaryMap voted(map.width, map.height);

    std::vector<uint32_t> order(points.size());
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(params.seed);
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[size_t(rng.below(i))]);

    for (uint32_t idx : order) {
        const PixelRef seed = points[idx];
        if (!working.at(seed.x, seed.y)) continue;

        voted.set(seed.x, seed.y, true);
        int best_votes = 0, best_t = 0;
        for (int t = 0; t < n_theta; ++t) {
            int v = ++acc[size_t(t) * n_rho + rho_index(seed.x, seed.y, t)];
            if (v > best_votes) {
                best_votes = v;
                best_t = t;
            }
        }
        if (best_votes < params.min_votes) continue;

        const double phi = best_t * params.theta_res_deg * M_PI / 180.0;
        const double ux = std::cos(phi), uy = -std::sin(phi);
        const double px = -uy, py = ux;  // corridor normal

        // Walk outward in both directions, tolerating gaps up to max_gap.
        std::vector<PixelRef> hits;
        hits.push_back(seed);
        Point2 end_pos[2] = {{double(seed.x), double(seed.y)}, {double(seed.x), double(seed.y)}};
        for (int dir = 0; dir < 2; ++dir) {
            double s = dir == 0 ? 1.0 : -1.0;
            int gap = 0;
            for (int step = 1; step <= 2 * diag && gap <= params.max_gap; ++step) {
                double cx = seed.x + s * step * ux;
                double cy = seed.y + s * step * uy;
                bool found = false;
                for (int off = -1; off <= 1; ++off) {
                    int xx = int(std::lround(cx + off * px));
                    int yy = int(std::lround(cy + off * py));
                    if (working.inside(xx, yy) && working.at(xx, yy)) {
                        if (!found) end_pos[dir] = {double(xx), double(yy)};
                        hits.push_back({xx, yy});
                        found = true;
                    }
                }
                if (found)
                    gap = 0;
                else
                    ++gap;
                if (cx < -1 || cy < -1 || cx > map.width || cy > map.height) break;
            }
        }

        double seg_len = std::hypot(end_pos[0].x - end_pos[1].x, end_pos[0].y - end_pos[1].y);
        if (seg_len < params.min_length) continue;

        // Consume the corridor so one stroke yields one segment.
        for (const PixelRef& p : hits) {
            if (!working.at(p.x, p.y)) continue;
            working.set(p.x, p.y, false);
            if (voted.at(p.x, p.y)) {
                for (int t = 0; t < n_theta; ++t) --acc[size_t(t) * n_rho + rho_index(p.x, p.y, t)];
                voted.set(p.x, p.y, false);
            }
        }

        HoughLine line;
        // p0 = lower endpoint (greater y), p1 = upper.
        if (end_pos[0].y >= end_pos[1].y) {
            line.p0 = end_pos[0];
            line.p1 = end_pos[1];
        } else {
            line.p0 = end_pos[1];
            line.p1 = end_pos[0];
        }
        line.theta = direction_angle_deg(line.p1.x - line.p0.x, line.p1.y - line.p0.y);
        double dy = line.p1.y - line.p0.y;
        if (std::abs(dy) > 1e-9)
            line.rho = line.p0.x + (map.height - 1 - line.p0.y) * (line.p1.x - line.p0.x) / dy;
        else
            line.rho = 0.5 * (line.p0.x + line.p1.x);
        line.support = segment_support(map, line.p0, line.p1, 1.0);
        lines.push_back(line);
    }
    return lines;
}

namespace {

inline int nb(const BinaryMap& m, int x, int y) { return m.inside(x, y) ? m.at(x, y) : 0; }

// p2..p9 clockwise starting north.
inline void neighbors(const BinaryMap& m, int x, int y, int p[8]) {
    p[0] = nb(m, x, y - 1);
    p[1] = nb(m, x + 1, y - 1);
    p[2] = nb(m, x + 1, y);
    p[3] = nb(m, x + 1, y + 1);
    p[4] = nb(m, x, y + 1);
    p[5] = nb(m, x - 1, y + 1);
    p[6] = nb(m, x - 1, y);
    p[7] = nb(m, x - 1, y - 1);
}

}  // namespace

BinaryMap skeletonize(const BinaryMap& map) {
    BinaryMap img = map;
    BinaryMap flags(map.width, map.height);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            std::fill(flags.data.begin(), flags.data.end(), 0);
            bool any = false;
#pragma omp parallel for schedule(static) reduction(|| : any)
            for (int y = 0; y < img.height; ++y) {
                for (int x = 0; x < img.width; ++x) {
                    if (!img.at(x, y)) continue;
                    int p[8];
                    neighbors(img, x, y, p);
                    int b = p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
                    if (b < 2 || b > 6) continue;
                    int a = 0;
                    for (int k = 0; k < 8; ++k)
                        if (p[k] == 0 && p[(k + 1) % 8] == 1) ++a;
                    if (a != 1) continue;
                    bool c1, c2;
                    if (pass == 0) {
                        c1 = p[0] * p[2] * p[4] == 0;
                        c2 = p[2] * p[4] * p[6] == 0;
                    } else {
                        c1 = p[0] * p[2] * p[6] == 0;
                        c2 = p[0] * p[4] * p[6] == 0;
                    }
                    if (c1 && c2) {
                        flags.at(x, y) = 1;
                        any = true;
                    }
                }
            }
            if (any) {
                changed = true;
                for (size_t i = 0; i < img.data.size(); ++i)
                    if (flags.data[i]) img.data[i] = 0;
            }
        }
    }
    return img;
}

BinaryMap morph(const BinaryMap& map, MorphOp op, int kw, int kh) {
    if (kw % 2 == 0 || kh % 2 == 0) throw std::invalid_argument("morph: kernel must be odd-sized");
    switch (op) {
        case MorphOp::Dilate:
            return kernels::dilate(map, kw, kh);
        case MorphOp::Erode:
            return kernels::erode(map, kw, kh);
        case MorphOp::Close:
            return kernels::erode(kernels::dilate(map, kw, kh), kw, kh);
    }
    return map;
}

double ncc(const GrayImage& candidate, const BinaryMap& tmpl) {
    if (candidate.width != tmpl.width || candidate.height != tmpl.height)
        throw std::invalid_argument("ncc: size mismatch");
    const size_t n = candidate.pixels();
    double sa = 0, sb = 0;
    for (size_t i = 0; i < n; ++i) {
        sa += candidate.data[i];
        sb += tmpl.data[i];
    }
    double ma = sa / double(n), mb = sb / double(n);
    double num = 0, va = 0, vb = 0;
    for (size_t i = 0; i < n; ++i) {
        double da = candidate.data[i] - ma;
        double db = tmpl.data[i] - mb;
        num += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va <= 0 || vb <= 0) return 0.0;
    return num / std::sqrt(va * vb);
}

BinaryMap rotate_binary(const BinaryMap& map, double angle_deg) {
    BinaryMap out(map.width, map.height);
    double a = angle_deg * M_PI / 180.0;
    double c = std::cos(a), s = std::sin(a);
    double cx = (map.width - 1) * 0.5, cy = (map.height - 1) * 0.5;
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            // inverse rotation
            double dx = x - cx, dy = y - cy;
            int sx = int(std::lround(cx + c * dx + s * dy));
            int sy = int(std::lround(cy - s * dx + c * dy));
            if (map.inside(sx, sy) && map.at(sx, sy)) out.at(x, y) = 1;
        }
    }
    return out;
}

}  // namespace elas
