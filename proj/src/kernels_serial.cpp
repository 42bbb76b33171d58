// Serial reference implementations. Written straight from the definitions,
// no OpenMP, no shared helpers with the parallel kernels. Tests check the
// parallel kernels and the benchmark times both.
#include <algorithm>
#include <cmath>

#include "elas/kernels.hpp"

namespace elas::kernels::serial {

GrayImage warp_gray(const GrayImage& src, const Homography& inv, int out_w, int out_h) {
    GrayImage out(out_w, out_h, 0);
    const auto& m = inv.coeffs();
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            double w = m[6] * x + m[7] * y + m[8];
            if (std::abs(w) < 1e-12) continue;
            double sx = (m[0] * x + m[1] * y + m[2]) / w;
            double sy = (m[3] * x + m[4] * y + m[5]) / w;
            if (sx < -1.0 || sy < -1.0 || sx > src.width || sy > src.height) continue;
            int x0 = int(std::floor(sx));
            int y0 = int(std::floor(sy));
            float fx = float(sx - x0);
            float fy = float(sy - y0);
            float acc = 0.0f;
            if (src.inside(x0, y0)) acc += (1 - fx) * (1 - fy) * src.at(x0, y0);
            if (src.inside(x0 + 1, y0)) acc += fx * (1 - fy) * src.at(x0 + 1, y0);
            if (src.inside(x0, y0 + 1)) acc += (1 - fx) * fy * src.at(x0, y0 + 1);
            if (src.inside(x0 + 1, y0 + 1)) acc += fx * fy * src.at(x0 + 1, y0 + 1);
            out.at(x, y) = uint8_t(std::clamp(int(acc + 0.5f), 0, 255));
        }
    }
    return out;
}

BinaryMap step_row_filter(const GrayImage& img, int tau_top, int tau_bottom, int thresh) {
    BinaryMap out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        double f = img.height > 1 ? double(y) / double(img.height - 1) : 0.0;
        int tau = std::max(1, int(std::lround(tau_top + f * (tau_bottom - tau_top))));
        for (int x = tau; x < img.width - tau; ++x) {
            int c = img.at(x, y);
            int l = img.at(x - tau, y);
            int r = img.at(x + tau, y);
            if (2 * c - (l + r) - std::abs(l - r) > thresh) out.at(x, y) = 1;
        }
    }
    return out;
}

BinaryMap conv1d_h_threshold(const GrayImage& img, const std::vector<float>& kernel, float thresh) {
    BinaryMap out(img.width, img.height);
    const int radius = int(kernel.size()) / 2;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            float acc = 0.0f;
            for (int k = -radius; k <= radius; ++k) {
                int xx = std::clamp(x + k, 0, img.width - 1);
                acc += kernel[size_t(k + radius)] * img.at(xx, y);
            }
            if (acc > thresh) out.at(x, y) = 1;
        }
    }
    return out;
}

BinaryMap vertical_abs_derivative(const GrayImage& img, float thresh) {
    BinaryMap out(img.width, img.height);
    for (int y = 1; y < img.height - 1; ++y) {
        for (int x = 0; x < img.width; ++x) {
            float d = std::abs(float(img.at(x, y + 1)) - float(img.at(x, y - 1))) * 0.5f;
            if (d > thresh) out.at(x, y) = 1;
        }
    }
    return out;
}

BinaryMap dilate(const BinaryMap& map, int kw, int kh) {
    BinaryMap out(map.width, map.height);
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            uint8_t v = 0;
            for (int dy = -(kh / 2); dy <= kh / 2; ++dy)
                for (int dx = -(kw / 2); dx <= kw / 2; ++dx)
                    if (map.inside(x + dx, y + dy) && map.at(x + dx, y + dy)) v = 1;
            out.at(x, y) = v;
        }
    return out;
}

BinaryMap erode(const BinaryMap& map, int kw, int kh) {
    BinaryMap out(map.width, map.height);
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            uint8_t v = 1;
            for (int dy = -(kh / 2); dy <= kh / 2; ++dy)
                for (int dx = -(kw / 2); dx <= kw / 2; ++dx)
                    if (map.inside(x + dx, y + dy) && !map.at(x + dx, y + dy)) v = 0;
            out.at(x, y) = v;
        }
    return out;
}

bool masked_stats(const GrayImage& img, const BinaryMap& mask, bool select, double& mean, double& stddev) {
    int64_t n = 0, sum = 0, sumsq = 0;
    for (size_t i = 0; i < img.data.size(); ++i) {
        if ((mask.data[i] != 0) == select) {
            int64_t v = img.data[i];
            ++n;
            sum += v;
            sumsq += v * v;
        }
    }
    if (n == 0) return false;
    mean = double(sum) / double(n);
    double var = double(sumsq) / double(n) - mean * mean;
    stddev = var > 0 ? std::sqrt(var) : 0.0;
    return true;
}

}  // namespace elas::kernels::serial
