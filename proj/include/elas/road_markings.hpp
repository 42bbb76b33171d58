#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "elas/feature_maps.hpp"
#include "elas/image.hpp"
#include "elas/imaging.hpp"
#include "elas/lane_types.hpp"

namespace elas {

// Line votes binned over (bottom-row intersection, direction angle).
// Bin sizes: 3 px on the rho axis, 1 degree on the angle axis.
class Histogram2D {
public:
    Histogram2D(int n_rho = 640, int n_angle = 360, double rho_bin = 3.0, double angle_bin = 1.0)
        : n_rho_(n_rho), n_angle_(n_angle), rho_bin_(rho_bin), angle_bin_(angle_bin),
          weight_(size_t(n_rho) * n_angle, 0.0), best_(size_t(n_rho) * n_angle, -1),
          best_w_(size_t(n_rho) * n_angle, 0.0) {}

    int n_rho() const { return n_rho_; }
    int n_angle() const { return n_angle_; }
    double rho_bin() const { return rho_bin_; }
    double angle_bin() const { return angle_bin_; }

    double weight(int x, int y) const { return weight_[size_t(y) * n_rho_ + x]; }
    int best_line(int x, int y) const { return best_[size_t(y) * n_rho_ + x]; }

    int rho_index(double rho) const { return int(std::floor(rho / rho_bin_)); }
    int angle_index(double theta) const { return int(std::floor(theta / angle_bin_)); }
    bool in_range(int x, int y) const { return x >= 0 && x < n_rho_ && y >= 0 && y < n_angle_; }

    void add(double rho, double theta, double w, int line_index);
    double total() const;

private:
    int n_rho_, n_angle_;
    double rho_bin_, angle_bin_;
    std::vector<double> weight_;
    std::vector<int32_t> best_;  // heaviest single contributor per cell
    std::vector<double> best_w_;
};

Histogram2D angle_histogram_2d(const std::vector<HoughLine>& lines, const std::vector<double>& weights,
                               int n_rho = 640, int n_angle = 360);

// Dominant angle: argmax over angle bins of the windowed (+/- d bins,
// wrapping) sum across all rho bins. Empty histogram -> nullopt.
std::optional<double> dominant_angle(const Histogram2D& h2d, int d = 5);

struct CrosswalkResult {
    bool detected = false;
    std::optional<double> dominant_angle_deg;
    Rect region;
    double f_r = 0.0;  // periodicity score, detected iff > 0
};

struct CrosswalkParams {
    Rect search_region{220, 160, 200, 260};  // used when no previous lane
    int region_row_top = 160;                // row band when a lane is present
    int region_row_bottom = 420;
    HoughParams hough{1.0, 20, 30, 5, 99};
};

CrosswalkResult detect_crosswalk(const BinaryMap& dog, const std::optional<LaneEstimate>& prev_lane,
                                 const CrosswalkParams& params);

// Periodicity test of Equation-4 style: the +/-1 projected row is correlated
// against its negation over lags up to half the region width.
double crosswalk_score(const std::vector<int>& projected);

enum class SignClass {
    StopLine,
    Arrow1,
    Arrow2,
    Arrow3,
    Arrow4,
    Arrow5,
    Arrow6,
    Arrow7,
    Arrow8,
    Unknown
};
const char* to_string(SignClass c);
std::optional<SignClass> sign_class_from_string(const std::string& name);

struct RoadSign {
    SignClass cls = SignClass::Unknown;
    Rect bbox;
    double score = 0.0;
};

struct TemplateSet {
    std::array<BinaryMap, 8> arrows;
};

TemplateSet default_template_set();
TemplateSet load_template_set(const std::string& dir);
void save_template_set(const TemplateSet& set, const std::string& dir);

struct SignCandidateParams {
    int min_height = 10;
    int row_gap = 2;            // run continuity tolerance, rows
    double center_band = 0.5;   // fraction of lane width that must hold evidence
    double default_lane_width = 210;
};

std::vector<Rect> extract_sign_candidates(const BinaryMap& dog, const BinaryMap& vad,
                                          const GrayImage& ipm_gray,
                                          const std::optional<LaneEstimate>& lane,
                                          const SignCandidateParams& params);

RoadSign classify_sign(const GrayImage& candidate, const Rect& bbox, const TemplateSet& templates,
                       double aspect_thresh, double match_thresh);

// Clears every evidence inside the detections (2 px margin) from the four
// feature maps and recomputes the combined map.
FeatureMaps remove_markings(const FeatureMaps& maps, const CrosswalkResult& crosswalk,
                            const std::vector<RoadSign>& signs);

}  // namespace elas
