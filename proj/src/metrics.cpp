#include "iqa/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace iqa {

namespace {

void check_pair(const GrayImage& f1, const GrayImage& f2) {
    if (f1.width != f2.width || f1.height != f2.height)
        throw ShapeError("image dimensions do not match");
    if (f1.range != f2.range)
        throw ParamError("image dynamic ranges do not match");
}

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(size);
    const int half = size / 2;
    double total = 0.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - half;
        w[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        total += w[i];
    }
    for (double& v : w) v /= total;
    return w;
}

// Valid-region separable pass along x; output width shrinks by size-1.
void valid_pass_x(const std::vector<double>& src, int width, int height,
                  const std::vector<double>& k, std::vector<double>& dst) {
    const int size = static_cast<int>(k.size());
    const int out_w = width - size + 1;
    dst.assign(static_cast<size_t>(out_w) * height, 0.0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        const double* row = src.data() + static_cast<size_t>(y) * width;
        for (int x = 0; x < out_w; ++x) {
            double acc = 0.0;
            for (int t = 0; t < size; ++t) acc += k[t] * row[x + t];
            dst[static_cast<size_t>(y) * out_w + x] = acc;
        }
    }
}

void valid_pass_y(const std::vector<double>& src, int width, int height,
                  const std::vector<double>& k, std::vector<double>& dst) {
    const int size = static_cast<int>(k.size());
    const int out_h = height - size + 1;
    dst.assign(static_cast<size_t>(width) * out_h, 0.0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int t = 0; t < size; ++t)
                acc += k[t] * src[static_cast<size_t>(y + t) * width + x];
            dst[static_cast<size_t>(y) * width + x] = acc;
        }
    }
}

std::vector<double> valid_filter(const std::vector<double>& src, int width, int height,
                                 const std::vector<double>& k) {
    std::vector<double> tmp, out;
    valid_pass_x(src, width, height, k, tmp);
    valid_pass_y(tmp, width - static_cast<int>(k.size()) + 1, height, k, out);
    return out;
}

} // namespace

double psnr(const GrayImage& f1, const GrayImage& f2, double peak) {
    check_pair(f1, f2);
    if (!(peak > 0.0)) throw ParamError("PSNR peak must be positive");
    double sq = 0.0;
    for (size_t i = 0; i < f1.data.size(); ++i) {
        const double d = f1.data[i] - f2.data[i];
        sq += d * d;
    }
    if (sq == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sq / static_cast<double>(f1.data.size());
    return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const GrayImage& f1, const GrayImage& f2, const SsimConfig& cfg) {
    check_pair(f1, f2);
    if (cfg.window < 3 || cfg.window % 2 == 0)
        throw ParamError("SSIM window must be odd and >= 3");
    if (!(cfg.k1 > 0.0) || !(cfg.k2 > 0.0) || !(cfg.peak > 0.0))
        throw ParamError("SSIM constants must be positive");
    if (f1.width < cfg.window || f1.height < cfg.window)
        throw ShapeError("image smaller than the SSIM window");

    const std::vector<double> win = gaussian_window(cfg.window, cfg.sigma);
    const int w = f1.width, h = f1.height;
    const size_t n = f1.data.size();

    std::vector<double> sq1(n), sq2(n), prod(n);
    for (size_t i = 0; i < n; ++i) {
        sq1[i] = f1.data[i] * f1.data[i];
        sq2[i] = f2.data[i] * f2.data[i];
        prod[i] = f1.data[i] * f2.data[i];
    }

    const std::vector<double> mu1 = valid_filter(f1.data, w, h, win);
    const std::vector<double> mu2 = valid_filter(f2.data, w, h, win);
    const std::vector<double> e11 = valid_filter(sq1, w, h, win);
    const std::vector<double> e22 = valid_filter(sq2, w, h, win);
    const std::vector<double> e12 = valid_filter(prod, w, h, win);

    const double c1 = (cfg.k1 * cfg.peak) * (cfg.k1 * cfg.peak);
    const double c2 = (cfg.k2 * cfg.peak) * (cfg.k2 * cfg.peak);

    double total = 0.0;
    for (size_t i = 0; i < mu1.size(); ++i) {
        const double m1 = mu1[i], m2 = mu2[i];
        const double v1 = e11[i] - m1 * m1;
        const double v2 = e22[i] - m2 * m2;
        const double cov = e12[i] - m1 * m2;
        const double num = (2.0 * m1 * m2 + c1) * (2.0 * cov + c2);
        const double den = (m1 * m1 + m2 * m2 + c1) * (v1 + v2 + c2);
        total += num / den;
    }
    return total / static_cast<double>(mu1.size());
}

} // namespace iqa
