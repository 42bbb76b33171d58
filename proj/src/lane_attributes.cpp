#include "elas/lane_attributes.hpp"

#include <algorithm>
#include <cmath>

namespace elas {

const char* to_string(Lmt t) {
    switch (t) {
        case Lmt::WSS: return "WSS";
        case Lmt::WSD: return "WSD";
        case Lmt::YSS: return "YSS";
        case Lmt::YSD: return "YSD";
        case Lmt::YMS: return "YMS";
        case Lmt::YMD: return "YMD";
        case Lmt::YDS: return "YDS";
    }
    return "WSS";
}

std::optional<Lmt> lmt_from_string(const std::string& name) {
    for (int i = 0; i <= int(Lmt::YDS); ++i)
        if (name == to_string(Lmt(i))) return Lmt(i);
    return std::nullopt;
}

bool lmt_is_yellow(Lmt t) { return t != Lmt::WSS && t != Lmt::WSD; }

void rgb_to_hsv(uint8_t r8, uint8_t g8, uint8_t b8, double& h, double& s, double& v) {
    double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    double c = mx - mn;
    if (c < 1e-12)
        h = 0.0;
    else if (mx == r)
        h = 60.0 * std::fmod((g - b) / c + 6.0, 6.0);
    else if (mx == g)
        h = 60.0 * ((b - r) / c + 2.0);
    else
        h = 60.0 * ((r - g) / c + 4.0);
    s = mx < 1e-12 ? 0.0 : c / mx * 100.0;
    v = mx * 100.0;
}

namespace {

// rank used for tie-breaking: solid over dashed, double over single
int restrictiveness(Lmt t) {
    switch (t) {
        case Lmt::YDS: return 6;
        case Lmt::YMS: return 5;
        case Lmt::YMD: return 4;
        case Lmt::YSS: return 3;
        case Lmt::YSD: return 2;
        case Lmt::WSS: return 1;
        case Lmt::WSD: return 0;
    }
    return 0;
}

struct RowScan {
    bool evidence = false;
    bool wbw = false;
    int inner_count = 0;  // evidences in the half toward the lane center
    int outer_count = 0;
};

RowScan scan_row(const BinaryMap& inb, int y, int x_lo, int x_hi, bool inner_is_right,
                 int min_black_run) {
    RowScan scan;
    int state = 0;  // 0: before first white, 1: in/after white, 2: counting black
    int black_run = 0;
    int mid = (x_lo + x_hi) / 2;
    for (int x = x_lo; x <= x_hi; ++x) {
        bool ev = x >= 0 && x < inb.width && inb.at(x, y);
        if (ev) {
            scan.evidence = true;
            bool inner = inner_is_right ? (x >= mid) : (x <= mid);
            (inner ? scan.inner_count : scan.outer_count)++;
            if (state == 0)
                state = 1;
            else if (state == 2 && black_run >= min_black_run)
                scan.wbw = true;
            if (state == 2) state = 1;
            black_run = 0;
        } else if (state >= 1) {
            state = 2;
            ++black_run;
        }
    }
    return scan;
}

}  // namespace

std::optional<Lmt> classify_lmt_raw(Side side, const LaneEstimate& lane, const BinaryMap& inb,
                                    const ColorImage& color_ipm, const LmtParams& params) {
    const int H = inb.height;
    const int rows = std::clamp(lane.trust_h > 0 ? lane.trust_h : H, 1, H);
    const double half = std::max(2.0, lane.w1 * params.band_halfwidth_frac);
    const bool inner_is_right = side == Side::Left;

    int evidence_rows = 0, wbw_rows = 0;
    long yellow_px = 0, total_px = 0;
    long free_inner = 0, free_outer = 0;  // evidence mass in rows without WBW

    for (int k = 0; k < rows; ++k) {
        int y = H - 1 - k;
        double bx = side == Side::Left ? lane.left_at(y) : lane.right_at(y);
        int x_lo = int(std::lround(bx - half));
        int x_hi = int(std::lround(bx + half));
        RowScan scan = scan_row(inb, y, x_lo, x_hi, inner_is_right, params.wbw_min_black_run);
        if (scan.evidence) ++evidence_rows;
        if (scan.wbw) ++wbw_rows;
        if (!scan.wbw) {
            free_inner += scan.inner_count;
            free_outer += scan.outer_count;
        }
        for (int x = std::max(0, x_lo); x <= std::min(inb.width - 1, x_hi); ++x) {
            if (!inb.at(x, y)) continue;
            ++total_px;
            double h, s, v;
            const uint8_t* px = color_ipm.px(x, y);
            rgb_to_hsv(px[0], px[1], px[2], h, s, v);
            if (h >= params.yellow_h_lo && h <= params.yellow_h_hi && s >= params.yellow_s_lo &&
                s <= params.yellow_s_hi && v >= params.yellow_v_lo && v <= params.yellow_v_hi)
                ++yellow_px;
        }
    }

    if (total_px == 0) return std::nullopt;  // empty band, carry previous

    double yellow_frac = double(yellow_px) / double(total_px);
    double evidence_frac = double(evidence_rows) / double(rows);
    double wbw_frac = double(wbw_rows) / double(rows);

    if (yellow_frac < params.yellow_frac)
        return evidence_frac < params.dashed_frac ? Lmt::WSD : Lmt::WSS;
    if (wbw_frac < params.double_frac)
        return evidence_frac < params.dashed_frac ? Lmt::YSD : Lmt::YSS;
    if (wbw_frac > params.yds_frac) return Lmt::YDS;
    // mixed double: the solid line shows up alone in the WBW-free rows
    return free_inner >= free_outer ? Lmt::YMS : Lmt::YMD;
}

Lmt LmtBuffer::mode() const {
    std::array<int, 7> counts{};
    for (Lmt t : ring_) counts[size_t(t)]++;
    int best = 0;
    for (int i = 1; i < 7; ++i) {
        if (counts[size_t(i)] > counts[size_t(best)] ||
            (counts[size_t(i)] == counts[size_t(best)] &&
             restrictiveness(Lmt(i)) > restrictiveness(Lmt(best))))
            best = i;
    }
    return Lmt(best);
}

Lmt LmtBuffer::report(Lmt raw) {
    ring_.push_back(raw);
    if (ring_.size() > kCapacity) ring_.pop_front();
    Lmt m = mode();
    if (!reported_) {
        reported_ = m;
        frames_since_change_ = 0;
        return m;
    }
    ++frames_since_change_;
    if (m != *reported_ && frames_since_change_ >= kMinDwell) {
        reported_ = m;
        frames_since_change_ = 0;
    }
    return *reported_;
}

void LmtBuffer::clear() {
    ring_.clear();
    reported_.reset();
    frames_since_change_ = 0;
}

const char* to_string(AdjacencyResult::Direction d) {
    switch (d) {
        case AdjacencyResult::Direction::Same: return "same";
        case AdjacencyResult::Direction::Opposite: return "opposite";
        case AdjacencyResult::Direction::Unknown: return "unknown";
    }
    return "unknown";
}

AdjacencyResult detect_adjacent(Side side, Lmt lmt, const LaneEstimate& lane,
                                const std::vector<HoughLine>& lines, const AdjacencyParams& params,
                                int* hough_inspections) {
    AdjacencyResult result;
    if (lmt != Lmt::WSS) {
        // regulation: every non-WSS marking borders another lane
        result.present = true;
        result.direction = lmt_is_yellow(lmt) ? AdjacencyResult::Direction::Opposite
                                              : AdjacencyResult::Direction::Same;
        return result;
    }

    if (hough_inspections) ++(*hough_inspections);
    double sign = side == Side::Left ? -1.0 : 1.0;
    double ego_boundary = lane.x1 + sign * lane.w1 * 0.5;
    double expected = ego_boundary + sign * lane.w1;  // one lane width outward
    double band = lane.w1 * params.band_halfwidth_frac;

    int found = 0, in_gap = 0;
    for (const auto& l : lines) {
        double dt = std::abs(l.theta - lane.theta);
        dt = std::min(dt, 180.0 - dt);
        if (dt >= params.delta_deg) continue;
        if (std::abs(l.rho - expected) <= band) {
            ++found;
        } else {
            double lo = std::min(ego_boundary, expected) + params.gap_margin;
            double hi = std::max(ego_boundary, expected) - params.gap_margin;
            if (l.rho > lo && l.rho < hi) ++in_gap;
        }
    }
    if (found >= 1 && in_gap < params.gap_max) {
        result.present = true;
        result.direction = AdjacencyResult::Direction::Same;
    }
    return result;
}

const char* to_string(LaneChange c) { return c == LaneChange::ToLeft ? "to_left" : "to_right"; }

double lane_deviation(const LaneEstimate& lane, double vehicle_x) {
    double w = lane.width_at(lane.y1);
    if (w <= 0) return 0.0;
    return (vehicle_x - lane.center_at(lane.y1)) / w;
}

DeviationReport DeviationMonitor::step(const LaneEstimate& lane, double vehicle_x) {
    DeviationReport report;
    report.deviation = lane_deviation(lane, vehicle_x);
    exceeded_ = std::abs(report.deviation) > params_.max_deviation;

    double d = report.deviation;
    if (armed_) {
        ++armed_age_;
        bool flipped = (d > 0) != (armed_value_ > 0);
        if (flipped && std::abs(d - armed_value_) > params_.flip_magnitude &&
            armed_age_ <= params_.window_frames) {
            report.event = armed_value_ > 0 ? LaneChange::ToRight : LaneChange::ToLeft;
            armed_ = false;
        } else if (armed_age_ > params_.window_frames) {
            armed_ = false;
        }
    }
    if (!report.event && std::abs(d) >= params_.arm_threshold) {
        armed_ = true;
        armed_value_ = d;
        armed_age_ = 0;
    }
    return report;
}

void DeviationMonitor::reset() {
    armed_ = false;
    armed_age_ = 0;
    exceeded_ = false;
}

}  // namespace elas
