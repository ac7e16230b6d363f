#pragma once

#include <filesystem>
#include <variant>

#include "iqa/image.hpp"

namespace iqa {

using AnyImage = std::variant<GrayImage, RgbImage>;

// Decodes PNG (8/16-bit, gray or RGB) and binary PGM/PPM (P5/P6, maxval 255
// or 65535). 8-bit samples map to v/255, 16-bit to v/65535; gray outputs
// carry DynamicRange::Unit. Alpha channels and palette images are rejected.
AnyImage load_image(const std::filesystem::path& path);

// I = 0.2989 R + 0.5870 G + 0.1140 B, per pixel. Output range Unit.
GrayImage rgb_to_gray(const RgbImage& img);

// (I - min) / (max - min). A constant image maps to all zeros.
GrayImage mat2gray_normalize(const GrayImage& img);

// Unit -> Byte, multiplying every sample by 255. Errors on Byte input.
GrayImage to_byte_range(const GrayImage& img);

GrayImage crop(const GrayImage& img, const CropRect& r);

// Writers quantize against the image's declared range maximum.
void save_png_gray16(const GrayImage& img, const std::filesystem::path& path);
void save_png_rgb16(const RgbImage& img, const std::filesystem::path& path);
void save_png_rgb8(const RgbImage& img, const std::filesystem::path& path);
void save_pgm(const GrayImage& img, const std::filesystem::path& path, int maxval = 255);

} // namespace iqa
