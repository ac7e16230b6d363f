#include "iqa/imgio.hpp"

#include <png.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace iqa {

namespace {

constexpr double kRangeSlack = 1e-9;

struct FileCloser {
    FILE* fp = nullptr;
    ~FileCloser() {
        if (fp) std::fclose(fp);
    }
};

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    (void)msg;
    longjmp(png_jmpbuf(png), 1);
}

void png_warn_fn(png_structp, png_const_charp) {}

AnyImage decode_png(const std::filesystem::path& path) {
    FileCloser file{std::fopen(path.string().c_str(), "rb")};
    if (!file.fp) throw IoError("cannot open file: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             png_error_fn, png_warn_fn);
    if (!png) throw IoError("libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng initialization failed");
    }

    // libpng reports errors through longjmp; buffers live outside the jump.
    std::vector<png_byte> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0, height = 0;
    int bit_depth = 0, color_type = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("corrupt or truncated PNG: " + path.string());
    }

    png_init_io(png, file.fp);
    png_read_info(png, info);
    png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr,
                 nullptr, nullptr);

    auto fail = [&](const std::string& what) -> void {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(what + ": " + path.string());
    };
    if (width == 0 || height == 0) fail("zero-dimension image");
    if (color_type & PNG_COLOR_MASK_ALPHA) fail("alpha channels are not supported");
    if (color_type == PNG_COLOR_TYPE_PALETTE) fail("palette PNGs are not supported");
    if (bit_depth != 8 && bit_depth != 16) fail("unsupported PNG bit depth");
    if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB)
        fail("unsupported PNG color type");

    const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const size_t row_bytes = png_get_rowbytes(png, info);
    pixels.resize(row_bytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const double denom = bit_depth == 8 ? 255.0 : 65535.0;
    auto sample = [&](size_t y, size_t x, int ch) -> double {
        const png_byte* p = pixels.data() + y * row_bytes +
                            (x * channels + ch) * (bit_depth / 8);
        unsigned v = bit_depth == 8 ? p[0] : (unsigned(p[0]) << 8) | p[1];
        return v / denom;
    };

    if (channels == 1) {
        GrayImage img;
        img.width = static_cast<int>(width);
        img.height = static_cast<int>(height);
        img.range = DynamicRange::Unit;
        img.data.resize(img.pixel_count());
        for (size_t y = 0; y < height; ++y)
            for (size_t x = 0; x < width; ++x)
                img.data[y * width + x] = sample(y, x, 0);
        return img;
    }
    RgbImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.data.resize(img.pixel_count() * 3);
    for (size_t y = 0; y < height; ++y)
        for (size_t x = 0; x < width; ++x)
            for (int ch = 0; ch < 3; ++ch)
                img.data[(y * width + x) * 3 + ch] = sample(y, x, ch);
    return img;
}

// PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (!std::isspace(ch)) {
            tok.push_back(static_cast<char>(ch));
            while ((ch = in.get()) != EOF && !std::isspace(ch)) tok.push_back(static_cast<char>(ch));
            break;
        }
    }
    return tok;
}

AnyImage decode_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());

    const std::string magic = pnm_token(in);
    const bool rgb = magic == "P6";
    long w = 0, h = 0, maxval = 0;
    try {
        w = std::stol(pnm_token(in));
        h = std::stol(pnm_token(in));
        maxval = std::stol(pnm_token(in));
    } catch (const std::exception&) {
        throw IoError("malformed PNM header: " + path.string());
    }
    if (w <= 0 || h <= 0) throw IoError("zero-dimension image: " + path.string());
    if (maxval != 255 && maxval != 65535)
        throw IoError("unsupported PNM maxval (expected 255 or 65535): " + path.string());

    const int bytes_per_sample = maxval == 255 ? 1 : 2;
    const int channels = rgb ? 3 : 1;
    const size_t n = static_cast<size_t>(w) * h * channels;
    std::vector<unsigned char> raw(n * bytes_per_sample);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        throw IoError("truncated PNM data: " + path.string());

    auto sample = [&](size_t i) -> double {
        if (bytes_per_sample == 1) return raw[i] / 255.0;
        return ((unsigned(raw[2 * i]) << 8) | raw[2 * i + 1]) / 65535.0;
    };

    if (!rgb) {
        GrayImage img;
        img.width = static_cast<int>(w);
        img.height = static_cast<int>(h);
        img.range = DynamicRange::Unit;
        img.data.resize(n);
        for (size_t i = 0; i < n; ++i) img.data[i] = sample(i);
        return img;
    }
    RgbImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.data.resize(n);
    for (size_t i = 0; i < n; ++i) img.data[i] = sample(i);
    return img;
}

uint16_t quantize16(double v, double maxv) {
    double q = std::lround(v / maxv * 65535.0);
    if (q < 0) q = 0;
    if (q > 65535) q = 65535;
    return static_cast<uint16_t>(q);
}

void write_png(const std::filesystem::path& path, int width, int height,
               int color_type, int bit_depth, const std::vector<png_byte>& pixels) {
    FileCloser file{std::fopen(path.string().c_str(), "wb")};
    if (!file.fp) throw IoError("cannot write file: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              png_error_fn, png_warn_fn);
    if (!png) throw IoError("libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed: " + path.string());
    }

    png_init_io(png, file.fp);
    png_set_IHDR(png, info, width, height, bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    const size_t row_bytes = static_cast<size_t>(width) * channels * (bit_depth / 8);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(pixels.data() + y * row_bytes);
    png_write_image(png, rows.data());
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

} // namespace

void validate(const GrayImage& img) {
    if (img.width < 1 || img.height < 1)
        throw ShapeError("gray image dimensions must be positive");
    if (img.data.size() != img.pixel_count())
        throw ShapeError("gray image data length does not match dimensions");
    const double hi = range_max(img.range) + kRangeSlack;
    for (double v : img.data)
        if (!(v >= -kRangeSlack && v <= hi))
            throw Error("gray image sample outside declared dynamic range");
}

void validate(const RgbImage& img) {
    if (img.width < 1 || img.height < 1)
        throw ShapeError("rgb image dimensions must be positive");
    if (img.data.size() != img.pixel_count() * 3)
        throw ShapeError("rgb image data length does not match dimensions");
    for (double v : img.data)
        if (!(v >= -kRangeSlack && v <= 1.0 + kRangeSlack))
            throw Error("rgb channel value outside [0, 1]");
}

AnyImage load_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open file: " + path.string());
    unsigned char sig[8] = {};
    probe.read(reinterpret_cast<char*>(sig), 8);
    const auto got = probe.gcount();
    probe.close();

    if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) return decode_png(path);
    if (got >= 2 && sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6'))
        return decode_pnm(path);
    throw IoError("unsupported image format: " + path.string());
}

GrayImage rgb_to_gray(const RgbImage& img) {
    validate(img);
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.range = DynamicRange::Unit;
    out.data.resize(img.pixel_count());
    for (size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = 0.2989 * img.data[3 * i] + 0.5870 * img.data[3 * i + 1] +
                      0.1140 * img.data[3 * i + 2];
    }
    return out;
}

GrayImage mat2gray_normalize(const GrayImage& img) {
    validate(img);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.range = DynamicRange::Unit;
    out.data.resize(img.data.size());
    if (hi == lo) {
        // 0/0 in the formula; a blank frame normalizes to all zeros.
        return out.data.assign(img.data.size(), 0.0), out;
    }
    const double span = hi - lo;
    for (size_t i = 0; i < img.data.size(); ++i) out.data[i] = (img.data[i] - lo) / span;
    return out;
}

GrayImage to_byte_range(const GrayImage& img) {
    if (img.range == DynamicRange::Byte)
        throw ParamError("image is already in Byte range");
    validate(img);
    GrayImage out = img;
    out.range = DynamicRange::Byte;
    for (double& v : out.data) v *= 255.0;
    return out;
}

GrayImage crop(const GrayImage& img, const CropRect& r) {
    validate(img);
    if (r.w < 1 || r.h < 1 || r.x0 < 0 || r.y0 < 0 || r.x0 + r.w > img.width ||
        r.y0 + r.h > img.height) {
        std::ostringstream msg;
        msg << "crop rect (" << r.x0 << "," << r.y0 << "," << r.w << "," << r.h
            << ") out of bounds for " << img.width << "x" << img.height << " image";
        throw ShapeError(msg.str());
    }
    GrayImage out;
    out.width = r.w;
    out.height = r.h;
    out.range = img.range;
    out.data.resize(static_cast<size_t>(r.w) * r.h);
    for (int y = 0; y < r.h; ++y)
        for (int x = 0; x < r.w; ++x) out.at(y, x) = img.at(r.y0 + y, r.x0 + x);
    return out;
}

void save_png_gray16(const GrayImage& img, const std::filesystem::path& path) {
    validate(img);
    const double maxv = range_max(img.range);
    std::vector<png_byte> pixels(img.pixel_count() * 2);
    for (size_t i = 0; i < img.pixel_count(); ++i) {
        const uint16_t q = quantize16(img.data[i], maxv);
        pixels[2 * i] = static_cast<png_byte>(q >> 8);
        pixels[2 * i + 1] = static_cast<png_byte>(q & 0xff);
    }
    write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 16, pixels);
}

void save_png_rgb16(const RgbImage& img, const std::filesystem::path& path) {
    validate(img);
    std::vector<png_byte> pixels(img.pixel_count() * 6);
    for (size_t i = 0; i < img.pixel_count() * 3; ++i) {
        const uint16_t q = quantize16(img.data[i], 1.0);
        pixels[2 * i] = static_cast<png_byte>(q >> 8);
        pixels[2 * i + 1] = static_cast<png_byte>(q & 0xff);
    }
    write_png(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 16, pixels);
}

void save_png_rgb8(const RgbImage& img, const std::filesystem::path& path) {
    validate(img);
    std::vector<png_byte> pixels(img.pixel_count() * 3);
    for (size_t i = 0; i < pixels.size(); ++i) {
        double q = std::lround(img.data[i] * 255.0);
        pixels[i] = static_cast<png_byte>(q < 0 ? 0 : q > 255 ? 255 : q);
    }
    write_png(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 8, pixels);
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path, int maxval) {
    validate(img);
    if (maxval != 255 && maxval != 65535)
        throw ParamError("PGM maxval must be 255 or 65535");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    const double maxv = range_max(img.range);
    for (double v : img.data) {
        long q = std::lround(v / maxv * maxval);
        if (q < 0) q = 0;
        if (q > maxval) q = maxval;
        if (maxval == 255) {
            out.put(static_cast<char>(q));
        } else {
            out.put(static_cast<char>(q >> 8));
            out.put(static_cast<char>(q & 0xff));
        }
    }
    if (!out) throw IoError("PGM write failed: " + path.string());
}

} // namespace iqa
