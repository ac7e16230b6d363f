#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace iqa {

// Per-grader ordinal ratings per image; missing combinations allowed.
struct RatingMatrix {
    std::vector<std::string> images;
    std::vector<std::string> graders;
    std::vector<std::optional<double>> ratings; // images x graders, row-major

    std::optional<double>& rating(size_t image, size_t grader) {
        return ratings[image * graders.size() + grader];
    }
    const std::optional<double>& rating(size_t image, size_t grader) const {
        return ratings[image * graders.size() + grader];
    }
};

// CSV with header image_id,grader_id,rating.
RatingMatrix load_ratings(const std::filesystem::path& path);

// Fractional average ranks, smallest value ranked 1.
std::vector<double> ranks(std::span<const double> x);

// Spearman: the closed form 1 - 6 sum d^2 / (n(n^2-1)) when both inputs are
// tie-free, Pearson correlation of average ranks otherwise.
double srcc(std::span<const double> x, std::span<const double> y);

// Kendall tau-a: tied pairs contribute 0, denominator stays n(n-1)/2.
double krcc(std::span<const double> x, std::span<const double> y);

struct ZscoreResult {
    std::vector<double> per_image;             // aligned with RatingMatrix::images
    std::vector<std::string> excluded_graders; // zero rating variance
};

// Standardizes each grader's present ratings (sample stddev), then averages
// the available standardized scores per image.
ZscoreResult zscore_ratings(const RatingMatrix& r);

// atanh(r); requires |r| < 1.
double fisher_z(double r);

struct SteigerResult {
    double z = 0.0;
    double p = 1.0;
};

// Two-sided Z-test for H0: rho_jk == rho_jh with overlapping variable j,
// Fisher z-transformed correlations and the pooled-correlation covariance
// correction; p from the standard normal. Requires n >= 4.
SteigerResult steiger_test(double r_jk, double r_jh, double r_kh, int n);

} // namespace iqa
