#pragma once

#include <array>
#include <string>

#include "iqa/image.hpp"
#include "iqa/wavelet.hpp"

namespace iqa {

struct HaarPsiParams {
    double c = 30.0;     // stabilization constant, squared Byte-range units
    double alpha = 4.2;  // logistic steepness
    bool subsample = true;
    Padding padding = Padding::Symmetric;
};

// Named parameter sets: "default" (30, 4.2), "med" = "cxr" (5, 4.9),
// "pa" (5, 6.3). subsample/padding keep the module defaults.
HaarPsiParams preset(const std::string& name);

// S(a, b, C) = (2ab + C) / (a^2 + b^2 + C), in (0, 1], 1 iff a == b.
double similarity(double a, double b, double c);

// l_alpha(y) = 1 / (1 + exp(-alpha y)).
double logistic(double y, double alpha);

// l_alpha^{-1}(p) = ln(p / (1 - p)) / alpha. Requires 0 < p < 1.
double logistic_inverse(double p, double alpha);

// Per-pixel l_alpha(=0.5 * sum_{j=1,2} S(|g_j x f1|, |g_j x f2|, C)) for one
// orientation. No subsampling; inputs must share dimensions.
ResponseMap local_similarity_map(const GrayImage& f1, const GrayImage& f2,
                                 int orientation, const HaarPsiParams& p);

// Pointwise max of the absolute scale-3 responses of the two images.
ResponseMap weight_map(const GrayImage& f1, const GrayImage& f2,
                       int orientation, const HaarPsiParams& p);

struct HaarPsiResult {
    double score = 0.0;                      // in (0, 1]
    std::array<ResponseMap, 2> hs_maps;      // HS^(1), HS^(2)
    std::array<ResponseMap, 2> weight_maps;  // W^(1), W^(2)
};

// score = l_alpha^{-1}(sum HS.W / sum W)^2, pooled over pixels and both
// orientations in fixed row-major order. Inputs must be Byte range and share
// dimensions; with subsampling enabled they must be at least 2x2.
HaarPsiResult haarpsi_score(const GrayImage& f1, const GrayImage& f2,
                            const HaarPsiParams& p);

// The (C, alpha)-independent part of the computation, cached by the grid
// search. Planes are row-major at the (possibly subsampled) score geometry.
struct PairTransform {
    int width = 0;
    int height = 0;
    // Per orientation: |g1*f1|, |g1*f2|, |g2*f1|, |g2*f2|, max(|g3*f1|, |g3*f2|).
    std::array<std::vector<double>, 2> s1a, s1b, s2a, s2b, w;
};

PairTransform precompute_pair(const GrayImage& f1, const GrayImage& f2,
                              const HaarPsiParams& p);

// Pools a cached transform at the given (C, alpha). haarpsi_score routes
// through this, so a grid sweep reproduces standalone scores bit-exactly.
double score_from_transform(const PairTransform& t, double c, double alpha);

} // namespace iqa
