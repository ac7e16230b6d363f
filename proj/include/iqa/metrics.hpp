#pragma once

#include "iqa/image.hpp"

namespace iqa {

struct SsimConfig {
    int window = 11;     // odd, >= 3
    double sigma = 1.5;  // Gaussian window stddev
    double k1 = 0.01;
    double k2 = 0.03;
    double peak = 255.0;
};

// 10 log10(peak^2 / MSE); +infinity for identical images.
double psnr(const GrayImage& f1, const GrayImage& f2, double peak);

// Mean local SSIM index over the valid region (no padding), Gaussian-weighted
// moments, standard constants C1 = (k1 peak)^2, C2 = (k2 peak)^2.
double ssim(const GrayImage& f1, const GrayImage& f2, const SsimConfig& cfg = {});

} // namespace iqa
