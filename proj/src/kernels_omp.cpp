#include "elas/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace elas::kernels {

namespace {

inline float sample_bilinear(const GrayImage& src, double sx, double sy) {
    int x0 = int(std::floor(sx));
    int y0 = int(std::floor(sy));
    float fx = float(sx - x0);
    float fy = float(sy - y0);
    float acc = 0.0f;
    if (src.inside(x0, y0)) acc += (1 - fx) * (1 - fy) * src.at(x0, y0);
    if (src.inside(x0 + 1, y0)) acc += fx * (1 - fy) * src.at(x0 + 1, y0);
    if (src.inside(x0, y0 + 1)) acc += (1 - fx) * fy * src.at(x0, y0 + 1);
    if (src.inside(x0 + 1, y0 + 1)) acc += fx * fy * src.at(x0 + 1, y0 + 1);
    return acc;
}

}  // namespace

GrayImage warp_gray(const GrayImage& src, const Homography& inv, int out_w, int out_h) {
    GrayImage out(out_w, out_h, 0);
    const auto& m = inv.coeffs();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            double w = m[6] * x + m[7] * y + m[8];
            if (std::abs(w) < 1e-12) continue;
            double sx = (m[0] * x + m[1] * y + m[2]) / w;
            double sy = (m[3] * x + m[4] * y + m[5]) / w;
            if (sx < -1.0 || sy < -1.0 || sx > src.width || sy > src.height) continue;
            float v = sample_bilinear(src, sx, sy);
            out.at(x, y) = uint8_t(std::clamp(int(v + 0.5f), 0, 255));
        }
    }
    return out;
}

ColorImage warp_color(const ColorImage& src, const Homography& inv, int out_w, int out_h) {
    ColorImage out(out_w, out_h);
    const auto& m = inv.coeffs();
#pragma omp parallel for schedule(static)
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
            for (int c = 0; c < 3; ++c) {
                float acc = 0.0f;
                if (src.inside(x0, y0)) acc += (1 - fx) * (1 - fy) * src.px(x0, y0)[c];
                if (src.inside(x0 + 1, y0)) acc += fx * (1 - fy) * src.px(x0 + 1, y0)[c];
                if (src.inside(x0, y0 + 1)) acc += (1 - fx) * fy * src.px(x0, y0 + 1)[c];
                if (src.inside(x0 + 1, y0 + 1)) acc += fx * fy * src.px(x0 + 1, y0 + 1)[c];
                out.px(x, y)[c] = uint8_t(std::clamp(int(acc + 0.5f), 0, 255));
            }
        }
    }
    return out;
}

BinaryMap warp_binary(const BinaryMap& src, const Homography& inv, int out_w, int out_h) {
    GrayImage tmp(src.width, src.height);
    for (size_t i = 0; i < src.data.size(); ++i) tmp.data[i] = src.data[i] ? 255 : 0;
    GrayImage warped = warp_gray(tmp, inv, out_w, out_h);
    BinaryMap out(out_w, out_h);
    for (size_t i = 0; i < warped.data.size(); ++i) out.data[i] = warped.data[i] >= 128 ? 1 : 0;
    return out;
}

BinaryMap step_row_filter(const GrayImage& img, int tau_top, int tau_bottom, int thresh) {
    BinaryMap out(img.width, img.height);
    const int h = img.height;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        double f = h > 1 ? double(y) / double(h - 1) : 0.0;
        int tau = int(std::lround(tau_top + f * (tau_bottom - tau_top)));
        tau = std::max(1, tau);
        for (int x = tau; x < img.width - tau; ++x) {
            int c = img.at(x, y);
            int l = img.at(x - tau, y);
            int r = img.at(x + tau, y);
            int v = 2 * c - (l + r) - std::abs(l - r);
            if (v > thresh) out.at(x, y) = 1;
        }
    }
    return out;
}

BinaryMap conv1d_h_threshold(const GrayImage& img, const std::vector<float>& kernel, float thresh) {
    BinaryMap out(img.width, img.height);
    const int radius = int(kernel.size()) / 2;
#pragma omp parallel for schedule(static)
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
#pragma omp parallel for schedule(static)
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
    const int rx = kw / 2, ry = kh / 2;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            uint8_t v = 0;
            for (int dy = -ry; dy <= ry && !v; ++dy) {
                int yy = y + dy;
                if (yy < 0 || yy >= map.height) continue;
                for (int dx = -rx; dx <= rx; ++dx) {
                    int xx = x + dx;
                    if (xx < 0 || xx >= map.width) continue;
                    if (map.at(xx, yy)) {
                        v = 1;
                        break;
                    }
                }
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

BinaryMap erode(const BinaryMap& map, int kw, int kh) {
    BinaryMap out(map.width, map.height);
    const int rx = kw / 2, ry = kh / 2;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            uint8_t v = 1;
            for (int dy = -ry; dy <= ry && v; ++dy) {
                int yy = y + dy;
                if (yy < 0 || yy >= map.height) continue;
                for (int dx = -rx; dx <= rx; ++dx) {
                    int xx = x + dx;
                    if (xx < 0 || xx >= map.width) continue;
                    if (!map.at(xx, yy)) {
                        v = 0;
                        break;
                    }
                }
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

bool masked_stats(const GrayImage& img, const BinaryMap& mask, bool select, double& mean, double& stddev) {
    // Integer accumulators keep the reduction deterministic under OpenMP.
    int64_t n = 0, sum = 0, sumsq = 0;
    const uint8_t want = select ? 1 : 0;
    const int64_t total = int64_t(img.pixels());
#pragma omp parallel for schedule(static) reduction(+ : n, sum, sumsq)
    for (int64_t i = 0; i < total; ++i) {
        if ((mask.data[size_t(i)] != 0) == (want != 0)) {
            int64_t v = img.data[size_t(i)];
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

BinaryMap binary_and(const BinaryMap& a, const BinaryMap& b) {
    BinaryMap out(a.width, a.height);
    for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = (a.data[i] && b.data[i]) ? 1 : 0;
    return out;
}

BinaryMap binary_or(const BinaryMap& a, const BinaryMap& b) {
    BinaryMap out(a.width, a.height);
    for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = (a.data[i] || b.data[i]) ? 1 : 0;
    return out;
}

GrayImage luma(const ColorImage& img) {
    GrayImage out(img.width, img.height);
    const int64_t total = int64_t(img.width) * img.height;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < total; ++i) {
        const uint8_t* p = &img.data[size_t(i) * 3];
        double v = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
        out.data[size_t(i)] = uint8_t(std::clamp(int(v + 0.5), 0, 255));
    }
    return out;
}

GrayImage resize_nearest(const GrayImage& img, int out_w, int out_h) {
    GrayImage out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        int sy = std::min(img.height - 1, int(double(y) * img.height / out_h));
        for (int x = 0; x < out_w; ++x) {
            int sx = std::min(img.width - 1, int(double(x) * img.width / out_w));
            out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h) {
    GrayImage out(out_w, out_h);
    double gx = double(img.width) / out_w;
    double gy = double(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        double sy = (y + 0.5) * gy - 0.5;
        for (int x = 0; x < out_w; ++x) {
            double sx = (x + 0.5) * gx - 0.5;
            int x0 = std::clamp(int(std::floor(sx)), 0, img.width - 1);
            int y0 = std::clamp(int(std::floor(sy)), 0, img.height - 1);
            int x1 = std::min(x0 + 1, img.width - 1);
            int y1 = std::min(y0 + 1, img.height - 1);
            double fx = std::clamp(sx - x0, 0.0, 1.0);
            double fy = std::clamp(sy - y0, 0.0, 1.0);
            double v = (1 - fx) * (1 - fy) * img.at(x0, y0) + fx * (1 - fy) * img.at(x1, y0) +
                       (1 - fx) * fy * img.at(x0, y1) + fx * fy * img.at(x1, y1);
            out.at(x, y) = uint8_t(std::clamp(int(v + 0.5), 0, 255));
        }
    }
    return out;
}

ColorImage resize_nearest(const ColorImage& img, int out_w, int out_h) {
    ColorImage out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        int sy = std::min(img.height - 1, int(double(y) * img.height / out_h));
        for (int x = 0; x < out_w; ++x) {
            int sx = std::min(img.width - 1, int(double(x) * img.width / out_w));
            const uint8_t* s = img.px(sx, sy);
            uint8_t* d = out.px(x, y);
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
        }
    }
    return out;
}

ColorImage resize_bilinear(const ColorImage& img, int out_w, int out_h) {
    ColorImage out(out_w, out_h);
    double gx = double(img.width) / out_w;
    double gy = double(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        double sy = (y + 0.5) * gy - 0.5;
        for (int x = 0; x < out_w; ++x) {
            double sx = (x + 0.5) * gx - 0.5;
            int x0 = std::clamp(int(std::floor(sx)), 0, img.width - 1);
            int y0 = std::clamp(int(std::floor(sy)), 0, img.height - 1);
            int x1 = std::min(x0 + 1, img.width - 1);
            int y1 = std::min(y0 + 1, img.height - 1);
            double fx = std::clamp(sx - x0, 0.0, 1.0);
            double fy = std::clamp(sy - y0, 0.0, 1.0);
            for (int c = 0; c < 3; ++c) {
                double v = (1 - fx) * (1 - fy) * img.px(x0, y0)[c] + fx * (1 - fy) * img.px(x1, y0)[c] +
                           (1 - fx) * fy * img.px(x0, y1)[c] + fx * fy * img.px(x1, y1)[c];
                out.px(x, y)[c] = uint8_t(std::clamp(int(v + 0.5), 0, 255));
            }
        }
    }
    return out;
}

}  // namespace elas::kernels
