#include "iqa/wavelet.hpp"

#include <cmath>

namespace iqa {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Reflect about the edge sample without repeating it: -1 -> 1, n -> n-2.
inline int mirror_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * (n - 1) - i;
    }
    return i;
}

std::vector<double> full_convolve(const std::vector<double>& a,
                                  const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// One 1-D pass of the separable "same" convolution. vertical=true filters
// along rows (y axis). Output pixels are independent and each accumulates in
// fixed tap order, so the row split cannot change results.
void conv_pass(const double* src, double* dst, int width, int height,
               const std::vector<double>& k, bool vertical, Padding pad) {
    const int len = static_cast<int>(k.size());
    const int center = (len - 1) / 2;
    if (vertical) {
#pragma omp parallel for schedule(static)
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                double acc = 0.0;
                for (int t = 0; t < len; ++t) {
                    const int sy = y + center - t;
                    if (pad == Padding::Symmetric) {
                        acc += k[t] * src[static_cast<size_t>(mirror_index(sy, height)) * width + x];
                    } else if (sy >= 0 && sy < height) {
                        acc += k[t] * src[static_cast<size_t>(sy) * width + x];
                    }
                }
                dst[static_cast<size_t>(y) * width + x] = acc;
            }
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int y = 0; y < height; ++y) {
            const double* row = src + static_cast<size_t>(y) * width;
            for (int x = 0; x < width; ++x) {
                double acc = 0.0;
                for (int t = 0; t < len; ++t) {
                    const int sx = x + center - t;
                    if (pad == Padding::Symmetric) {
                        acc += k[t] * row[mirror_index(sx, width)];
                    } else if (sx >= 0 && sx < width) {
                        acc += k[t] * row[sx];
                    }
                }
                dst[static_cast<size_t>(y) * width + x] = acc;
            }
        }
    }
}

} // namespace

std::pair<Filter1D, Filter1D> base_filters() {
    Filter1D h{{kInvSqrt2, kInvSqrt2}, 1, FilterKind::Lowpass};
    Filter1D g{{-kInvSqrt2, kInvSqrt2}, 1, FilterKind::Highpass};
    return {h, g};
}

Filter1D upsample_dyadic(const Filter1D& f) {
    Filter1D out;
    out.scale = f.scale;
    out.kind = f.kind;
    out.coeffs.reserve(f.coeffs.size() * 2);
    for (double c : f.coeffs) {
        out.coeffs.push_back(c);
        out.coeffs.push_back(0.0);
    }
    return out;
}

Filter1D haar_filter_1d(int scale, FilterKind kind) {
    if (scale < 1 || scale > 8) throw ParamError("Haar filter scale must be in [1, 8]");
    auto [h1, g1] = base_filters();
    Filter1D f = kind == FilterKind::Lowpass ? h1 : g1;
    for (int j = 2; j <= scale; ++j) {
        Filter1D up = upsample_dyadic(f);
        f.coeffs = full_convolve(h1.coeffs, up.coeffs);
        f.scale = j;
        while (!f.coeffs.empty() && f.coeffs.back() == 0.0) f.coeffs.pop_back();
    }
    return f;
}

Filter2D Filter2D::haar(int scale, int orientation) {
    if (orientation != 1 && orientation != 2)
        throw ParamError("filter orientation must be 1 or 2");
    Filter2D f;
    f.scale = scale;
    f.orientation = orientation;
    Filter1D g = haar_filter_1d(scale, FilterKind::Highpass);
    Filter1D h = haar_filter_1d(scale, FilterKind::Lowpass);
    if (orientation == 1) {
        f.vertical = std::move(g);
        f.horizontal = std::move(h);
    } else {
        f.vertical = std::move(h);
        f.horizontal = std::move(g);
    }
    return f;
}

std::vector<double> Filter2D::dense() const {
    const size_t rows = vertical.coeffs.size();
    const size_t cols = horizontal.coeffs.size();
    std::vector<double> k(rows * cols);
    for (size_t u = 0; u < rows; ++u)
        for (size_t v = 0; v < cols; ++v)
            k[u * cols + v] = vertical.coeffs[u] * horizontal.coeffs[v];
    return k;
}

ResponseMap convolve_same(const GrayImage& img, const Filter2D& f, Padding pad) {
    const int klen = static_cast<int>(f.vertical.coeffs.size());
    if (img.width < klen || img.height < klen)
        throw ShapeError("image smaller than the filter kernel");

    ResponseMap out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.pixel_count());
    std::vector<double> tmp(img.pixel_count());

    conv_pass(img.data.data(), tmp.data(), img.width, img.height,
              f.vertical.coeffs, /*vertical=*/true, pad);
    conv_pass(tmp.data(), out.data.data(), img.width, img.height,
              f.horizontal.coeffs, /*vertical=*/false, pad);
    return out;
}

GrayImage subsample2(const GrayImage& img) {
    if (img.width < 2 || img.height < 2)
        throw ShapeError("subsampling requires at least a 2x2 image");
    GrayImage out;
    out.width = img.width / 2;
    out.height = img.height / 2;
    out.range = img.range;
    out.data.resize(out.pixel_count());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const double s = img.at(2 * y, 2 * x) + img.at(2 * y, 2 * x + 1) +
                             img.at(2 * y + 1, 2 * x) + img.at(2 * y + 1, 2 * x + 1);
            out.at(y, x) = s * 0.25;
        }
    }
    return out;
}

} // namespace iqa
