#pragma once

#include <array>
#include <deque>
#include <optional>
#include <vector>

#include "elas/image.hpp"
#include "elas/imaging.hpp"
#include "elas/lane_types.hpp"

namespace elas {

// The seven lane-marking types: white/yellow, single/mixed/double,
// solid/dashed.
enum class Lmt { WSS, WSD, YSS, YSD, YMS, YMD, YDS };
const char* to_string(Lmt t);
std::optional<Lmt> lmt_from_string(const std::string& name);
bool lmt_is_yellow(Lmt t);

enum class Side { Left, Right };

// H in [0,360), S and V in [0,100].
void rgb_to_hsv(uint8_t r, uint8_t g, uint8_t b, double& h, double& s, double& v);

struct LmtParams {
    double yellow_h_lo = 30, yellow_h_hi = 50;
    double yellow_s_lo = 31, yellow_s_hi = 78;
    double yellow_v_lo = 31, yellow_v_hi = 78;
    double yellow_frac = 0.5;
    double dashed_frac = 0.30;    // evidence rows below this: dashed
    double double_frac = 0.20;    // WBW rows above this: double marking
    double yds_frac = 0.80;       // WBW rows above this: double solid
    double band_halfwidth_frac = 1.0 / 8.0;  // of w1, around the boundary
    int wbw_min_black_run = 2;
};

// One-frame classification of a lane side following the decision tree.
// Returns nothing when the band holds no evidence (caller carries the
// previous raw class).
std::optional<Lmt> classify_lmt_raw(Side side, const LaneEstimate& lane, const BinaryMap& inb,
                                    const ColorImage& color_ipm, const LmtParams& params);

// Winner-takes-all smoothing over the last 30 raw classes. Ties resolve
// toward the more restrictive class; a reported change holds for at least
// min_dwell frames.
class LmtBuffer {
public:
    static constexpr size_t kCapacity = 30;

    Lmt report(Lmt raw);
    const std::deque<Lmt>& ring() const { return ring_; }
    void clear();

private:
    Lmt mode() const;
    std::deque<Lmt> ring_;
    std::optional<Lmt> reported_;
    int frames_since_change_ = 0;
    static constexpr int kMinDwell = 15;
};

struct AdjacencyParams {
    double delta_deg = 15.0;
    int gap_max = 1;                   // gap band must hold fewer lines than this
    double band_halfwidth_frac = 0.25; // of lane width, around the expected marking
    double gap_margin = 10.0;          // px kept clear around known markings
};

struct AdjacencyResult {
    enum class Direction { Same, Opposite, Unknown };
    bool present = false;
    Direction direction = Direction::Unknown;
};
const char* to_string(AdjacencyResult::Direction d);

// Non-WSS markings imply an adjacent lane by regulation; WSS falls back to
// searching Hough lines one lane width outward. hough_inspections, when
// given, counts how often the line list was actually consulted.
AdjacencyResult detect_adjacent(Side side, Lmt lmt, const LaneEstimate& lane,
                                const std::vector<HoughLine>& lines, const AdjacencyParams& params,
                                int* hough_inspections = nullptr);

enum class LaneChange { ToLeft, ToRight };
const char* to_string(LaneChange c);

struct DeviationReport {
    double deviation = 0.0;  // signed fraction of lane width, + is right
    std::optional<LaneChange> event;
};

double lane_deviation(const LaneEstimate& lane, double vehicle_x);

// Threshold-crossing lane-change detector: a crossing beyond +/-0.5 followed
// within a few frames by a sign flip of magnitude > 0.8 is a lane change.
class DeviationMonitor {
public:
    struct Params {
        double arm_threshold = 0.5;
        double flip_magnitude = 0.8;
        int window_frames = 5;
        double max_deviation = 2.0;  // beyond this the tracker must reset
    };

    DeviationMonitor() = default;
    explicit DeviationMonitor(const Params& params) : params_(params) {}

    DeviationReport step(const LaneEstimate& lane, double vehicle_x);
    void reset();
    bool exceeded() const { return exceeded_; }

private:
    Params params_;
    bool armed_ = false;
    double armed_value_ = 0.0;
    int armed_age_ = 0;
    bool exceeded_ = false;
};

}  // namespace elas
