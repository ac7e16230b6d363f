#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iqa/haarpsi.hpp"
#include "iqa/image.hpp"
#include "iqa/metrics.hpp"
#include "iqa/stats.hpp"

namespace iqa {

struct ManifestEntry {
    std::string image_id;
    std::filesystem::path reference;
    std::filesystem::path distorted;
    std::optional<CropRect> crop;
};

// CSV manifest (image_id,reference,distorted,crop_x,crop_y,crop_w,crop_h)
// plus a <name>.meta sidecar carrying ratings=<path>, grayscale=<bool>,
// normalize=<bool>. Paths resolve relative to the manifest directory.
struct DatasetManifest {
    std::string name;
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;
    std::filesystem::path ratings_path;
    bool to_grayscale = true;
    bool normalize = false;
};

DatasetManifest load_manifest(const std::filesystem::path& path);

struct MeasureSpec {
    enum class Kind { Psnr, Ssim, HaarPsi };
    Kind kind = Kind::HaarPsi;
    std::string id = "haarpsi";
    HaarPsiParams haar{};
    SsimConfig ssim{};
    double psnr_peak = 255.0;

    std::string params_text() const;
};

// Known ids: psnr, ssim, haarpsi, haarpsi-med, haarpsi-cxr, haarpsi-pa.
MeasureSpec parse_measure(const std::string& id);

struct ScoreRow {
    std::string image_id;
    double score = 0.0;
};

struct ScoreTable {
    std::string measure_id;
    std::string params;
    std::string version;
    std::vector<ScoreRow> rows;
};

struct ScoreOptions {
    bool skip_errors = false;
};

// Per entry: load both rasters, apply grayscale conversion, normalization,
// Byte scaling and crop per manifest flags, then the measure. Rows follow
// manifest order regardless of worker count.
ScoreTable score_dataset(const DatasetManifest& m, const MeasureSpec& measure,
                         const ScoreOptions& opts = {});

void write_score_table(const ScoreTable& t, const std::filesystem::path& path);
ScoreTable read_score_table(const std::filesystem::path& path);

// Loads, preprocesses and scores one already-decoded pair (the cmd-score path).
GrayImage preprocess(const AnyImage& img, bool to_gray, bool normalize,
                     const std::optional<CropRect>& crop_rect);
double score_pair(const MeasureSpec& measure, const GrayImage& ref, const GrayImage& dist);

struct Significance {
    std::string against;
    double srcc_z = 0.0, srcc_p = 1.0;
    double krcc_z = 0.0, krcc_p = 1.0;
    int srcc_direction = 0; // +1 first report better, -1 worse, 0 not significant
    int krcc_direction = 0;
    std::string caveat;
};

struct CorrelationReport {
    std::string measure;
    double srcc = 0.0;
    double krcc = 0.0;
    int n = 0;
    std::string note; // p-value approximation caveat carried into output
    std::vector<Significance> significance;
};

// SRCC/KRCC between a score table and the per-image mean z-scores.
CorrelationReport evaluate(const ScoreTable& scores, const RatingMatrix& ratings);

// Dependent-correlation test between two measures on the same image set,
// applied separately to the SRCC and KRCC inputs. Significance at p < 0.05.
Significance compare_measures(const CorrelationReport& a, const CorrelationReport& b,
                              const ScoreTable& scores_a, const ScoreTable& scores_b,
                              const RatingMatrix& ratings);

struct SurfaceGrid {
    std::vector<double> c_values;     // ascending
    std::vector<double> alpha_values; // ascending
    std::vector<std::string> dataset_names;
    // srcc[d][ci * alpha_values.size() + ai]; mean block with same indexing.
    std::vector<std::vector<double>> srcc;
    std::vector<double> mean_srcc;
    double argmax_c = 0.0;
    double argmax_alpha = 0.0;
    double argmax_value = 0.0;
};

struct GridOptions {
    HaarPsiParams fixed{};         // subsample/padding used for every cell
    bool argmax_on_rounded = false; // select argmax on 4-decimal-rounded SRCC
};

// lo, lo+step, ... up to hi inclusive.
std::vector<double> make_grid(double lo, double hi, double step);

// Full (C, alpha) sweep. Filter responses are computed once per entry and
// shared across every cell; the per-cell pooling matches haarpsi_score
// bit-exactly. Ties resolve to the smallest C, then the smallest alpha.
SurfaceGrid grid_search(const std::vector<std::pair<DatasetManifest, RatingMatrix>>& datasets,
                        std::span<const double> c_grid, std::span<const double> alpha_grid,
                        const GridOptions& opts = {});

void export_surface(const SurfaceGrid& s, const std::filesystem::path& path);
SurfaceGrid import_surface(const std::filesystem::path& path);

struct BenchReport {
    double decode_s = 0.0;
    double score_s = 0.0;
    double total_s = 0.0;
    int threads = 1;
    int reps = 1;
    std::vector<double> run_totals;
};

// Best-of-repetitions wall clock for scoring a dataset; decode timed apart.
BenchReport benchmark(const DatasetManifest& m, const MeasureSpec& measure, int repetitions);

} // namespace iqa
