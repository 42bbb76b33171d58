#include "elas/feature_maps.hpp"

#include <cmath>

#include "elas/kernels.hpp"

namespace elas {

PreprocessedFrame preprocess(const ColorImage& frame, const Calibration& cfg) {
    if (frame.width != cfg.frame_width || frame.height != cfg.frame_height)
        throw CalibrationError("preprocess: frame dimensions do not match calibration");
    if (cfg.roi.x < 0 || cfg.roi.y < 0 || cfg.roi.x + cfg.roi.width > frame.width ||
        cfg.roi.y + cfg.roi.height > frame.height || cfg.roi.width <= 0 || cfg.roi.height <= 0)
        throw CalibrationError("preprocess: RoI exceeds frame");

    GrayImage gray = kernels::luma(frame);
    GrayImage cropped(cfg.roi.width, cfg.roi.height);
    ColorImage cropped_color(cfg.roi.width, cfg.roi.height);
    for (int y = 0; y < cfg.roi.height; ++y) {
        for (int x = 0; x < cfg.roi.width; ++x) {
            cropped.at(x, y) = gray.at(x + cfg.roi.x, y + cfg.roi.y);
            const uint8_t* s = frame.px(x + cfg.roi.x, y + cfg.roi.y);
            uint8_t* d = cropped_color.px(x, y);
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
        }
    }

    PreprocessedFrame out;
    out.gray_persp = std::move(cropped);
    out.gray_ipm = warp_ipm(out.gray_persp, cfg.homography, cfg.ipm_width, cfg.ipm_height);
    out.color_ipm = warp_ipm(cropped_color, cfg.homography, cfg.ipm_width, cfg.ipm_height);
    out.homography = cfg.homography;
    out.roi = cfg.roi;
    return out;
}

BinaryMap srf_map(const GrayImage& persp, int tau_top, int tau_bottom, int thresh, const Homography& h,
                  int ipm_w, int ipm_h) {
    if (tau_top < 1 || tau_top > tau_bottom || tau_bottom >= persp.width / 2)
        throw std::invalid_argument("srf_map: require 1 <= tau_top <= tau_bottom < width/2");
    BinaryMap persp_map = kernels::step_row_filter(persp, tau_top, tau_bottom, thresh);
    return warp_ipm(persp_map, h, ipm_w, ipm_h);
}

std::vector<float> dog_kernel(int marking_width) {
    double sigma_n = marking_width / 3.0;
    double sigma_w = 3.0 * sigma_n;
    int radius = int(std::ceil(3.0 * sigma_w));
    std::vector<float> kernel(size_t(2 * radius + 1));
    double sum_n = 0, sum_w = 0;
    std::vector<double> gn(kernel.size()), gw(kernel.size());
    for (int i = -radius; i <= radius; ++i) {
        gn[size_t(i + radius)] = std::exp(-0.5 * i * i / (sigma_n * sigma_n));
        gw[size_t(i + radius)] = std::exp(-0.5 * i * i / (sigma_w * sigma_w));
        sum_n += gn[size_t(i + radius)];
        sum_w += gw[size_t(i + radius)];
    }
    for (size_t i = 0; i < kernel.size(); ++i) kernel[i] = float(gn[i] / sum_n - gw[i] / sum_w);
    return kernel;
}

BinaryMap dog_map(const GrayImage& ipm, int marking_width, float thresh) {
    if (marking_width < 3) throw std::invalid_argument("dog_map: marking_width must be >= 3");
    return kernels::conv1d_h_threshold(ipm, dog_kernel(marking_width), thresh);
}

BinaryMap vad_map(const GrayImage& ipm, float thresh) {
    return kernels::vertical_abs_derivative(ipm, thresh);
}

BinaryMap inb_map(const GrayImage& ipm, const BinaryMap& srf) {
    if (!srf.same_shape(ipm)) throw std::invalid_argument("inb_map: shape mismatch");
    BinaryMap out(ipm.width, ipm.height);

    double mu_a = 0, sigma_a = 0;
    if (!kernels::masked_stats(ipm, srf, false, mu_a, sigma_a)) return out;
    if (srf.empty_map()) return out;

    // Intermediate map: evidences bright enough to stand out from asphalt.
    BinaryMap inter(ipm.width, ipm.height);
    double gate = mu_a + 2.0 * sigma_a;
    for (size_t i = 0; i < srf.data.size(); ++i)
        if (srf.data[i] && double(ipm.data[i]) > gate) inter.data[i] = 1;
    double mu_lm = 0, sigma_lm = 0;
    if (!kernels::masked_stats(ipm, inter, true, mu_lm, sigma_lm)) return out;

    // The final comparison is >=, so that zero-variance markings survive.
    double lm_gate = mu_lm - sigma_lm;
    for (size_t i = 0; i < out.data.size(); ++i)
        if (double(ipm.data[i]) >= lm_gate) out.data[i] = 1;
    return out;
}

BinaryMap combined_map(const BinaryMap& srf, const BinaryMap& inb) {
    if (!srf.same_shape(inb)) throw std::invalid_argument("combined_map: shape mismatch");
    return kernels::binary_and(srf, inb);
}

FeatureMaps extract_feature_maps(const PreprocessedFrame& frame, const FeatureParams& params) {
    FeatureMaps maps;
    maps.srf = srf_map(frame.gray_persp, params.tau_top, params.tau_bottom, params.srf_thresh,
                       frame.homography, frame.gray_ipm.width, frame.gray_ipm.height);
    maps.dog = dog_map(frame.gray_ipm, params.marking_width, params.dog_thresh);
    maps.vad = vad_map(frame.gray_ipm, params.vad_thresh);
    maps.inb = inb_map(frame.gray_ipm, maps.srf);
    maps.cmb = combined_map(maps.srf, maps.inb);
    return maps;
}

}  // namespace elas
