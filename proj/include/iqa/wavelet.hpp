#pragma once

#include <utility>
#include <vector>

#include "iqa/image.hpp"

namespace iqa {

enum class FilterKind { Lowpass, Highpass };

// 1-D Haar filter at dyadic scale j. Trimmed length is 2^j; high-pass
// coefficients sum to 0, low-pass to 2^(j/2).
struct Filter1D {
    std::vector<double> coeffs;
    int scale = 1;
    FilterKind kind = FilterKind::Lowpass;
};

// h_1 = (1/sqrt 2) [1, 1], g_1 = (1/sqrt 2) [-1, 1], in this order.
std::pair<Filter1D, Filter1D> base_filters();

// Inserts one zero after every coefficient.
Filter1D upsample_dyadic(const Filter1D& f);

// Scale-j filter via the recursion f_j = h_1 * (f_{j-1})_up2, full 1-D
// convolution, trailing zeros trimmed. 1 <= scale <= 8.
Filter1D haar_filter_1d(int scale, FilterKind kind);

// Separable 2-D Haar filter. Orientation 1 pairs (g vertical, h horizontal),
// orientation 2 the transpose pairing; the first factor acts along rows.
struct Filter2D {
    Filter1D vertical;
    Filter1D horizontal;
    int orientation = 1; // 1 or 2
    int scale = 1;

    static Filter2D haar(int scale, int orientation);

    // Dense outer-product kernel, row-major, 2^j x 2^j.
    std::vector<double> dense() const;
};

// Same-size filter response; values may be negative.
struct ResponseMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
};

enum class Padding { Symmetric, Zero };

// Centered "same" true convolution (kernel flipped), separable vertical pass
// then horizontal pass, center offset floor((2^j - 1)/2). Symmetric padding
// reflects about the edge sample without repeating it.
ResponseMap convolve_same(const GrayImage& img, const Filter2D& f,
                          Padding pad = Padding::Symmetric);

// 2x2 mean pooling with stride 2; odd trailing row/column dropped.
GrayImage subsample2(const GrayImage& img);

} // namespace iqa
