#pragma once

#include "elas/geometry.hpp"
#include "elas/image.hpp"
#include "elas/imaging.hpp"

namespace elas {

// Static camera calibration: RoI crop in the input frame, then a homography
// taking RoI-local coordinates into the bird's-eye (IPM) image.
struct Calibration {
    int frame_width = 640;
    int frame_height = 480;
    Rect roi{0, 0, 640, 480};
    Homography homography;  // RoI coords -> IPM coords
    int ipm_width = 640;
    int ipm_height = 480;
};

struct PreprocessedFrame {
    GrayImage gray_persp;  // RoI-cropped perspective grayscale
    GrayImage gray_ipm;
    ColorImage color_ipm;  // for the lane-marking hue analysis
    Homography homography;
    Rect roi;
};

// The four binary feature maps plus the combined map, all in IPM space.
struct FeatureMaps {
    BinaryMap srf;
    BinaryMap dog;
    BinaryMap vad;
    BinaryMap inb;
    BinaryMap cmb;
};

struct FeatureParams {
    int tau_top = 5;
    int tau_bottom = 25;
    int srf_thresh = 30;
    int marking_width = 8;
    float dog_thresh = 20.0f;
    float vad_thresh = 20.0f;
};

PreprocessedFrame preprocess(const ColorImage& frame, const Calibration& cfg);

// Step row filter evaluated in perspective, result warped into IPM space.
BinaryMap srf_map(const GrayImage& persp, int tau_top, int tau_bottom, int thresh, const Homography& h,
                  int ipm_w, int ipm_h);

// Horizontal difference of Gaussians with sigma_narrow = marking_width / 3 and
// sigma_wide = 3 * sigma_narrow.
BinaryMap dog_map(const GrayImage& ipm, int marking_width, float thresh);
std::vector<float> dog_kernel(int marking_width);

BinaryMap vad_map(const GrayImage& ipm, float thresh);

// Two-stage intensity statistics over the SRF evidences. Empty SRF (or an
// empty intermediate) yields an empty map.
BinaryMap inb_map(const GrayImage& ipm, const BinaryMap& srf);

BinaryMap combined_map(const BinaryMap& srf, const BinaryMap& inb);

FeatureMaps extract_feature_maps(const PreprocessedFrame& frame, const FeatureParams& params);

}  // namespace elas
