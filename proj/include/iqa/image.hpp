#pragma once

#include <cstddef>
#include <vector>

#include "iqa/error.hpp"

namespace iqa {

// Declared dynamic range of a grayscale raster. All similarity measures
// operate on Byte-range data; files decode to Unit.
enum class DynamicRange { Unit, Byte };

inline double range_max(DynamicRange r) {
    return r == DynamicRange::Unit ? 1.0 : 255.0;
}

// 2-D luminance raster, row-major, 64-bit samples.
struct GrayImage {
    int width = 0;
    int height = 0;
    DynamicRange range = DynamicRange::Unit;
    std::vector<double> data;

    double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }

    static GrayImage filled(int w, int h, double v, DynamicRange r) {
        GrayImage img;
        img.width = w;
        img.height = h;
        img.range = r;
        img.data.assign(static_cast<size_t>(w) * h, v);
        return img;
    }
};

// Interleaved RGB raster, channels in [0, 1] after decode.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<double> data; // r,g,b per pixel, row-major

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

struct CropRect {
    int x0 = 0;
    int y0 = 0;
    int w = 0;
    int h = 0;
};

// Throws ShapeError / Error when the image violates its declared invariants
// (positive dimensions, data length, values inside the declared range with
// 1e-9 slack).
void validate(const GrayImage& img);
void validate(const RgbImage& img);

} // namespace iqa
