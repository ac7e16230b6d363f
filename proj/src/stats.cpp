#include "iqa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "iqa/error.hpp"

namespace iqa {

namespace {

bool has_ties(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) != s.end();
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ParamError("zero rank variance in correlation input");
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

// Merge sort counting strict inversions; equal keys take from the left half
// so tied values are not counted.
int64_t count_inversions(std::vector<double>& v, std::vector<double>& buf,
                         size_t lo, size_t hi) {
    if (hi - lo < 2) return 0;
    const size_t mid = lo + (hi - lo) / 2;
    int64_t count = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
    size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            count += static_cast<int64_t>(mid - i);
            buf[k++] = v[j++];
        } else {
            buf[k++] = v[i++];
        }
    }
    while (i < mid) buf[k++] = v[i++];
    while (j < hi) buf[k++] = v[j++];
    std::copy(buf.begin() + static_cast<long>(lo), buf.begin() + static_cast<long>(hi),
              v.begin() + static_cast<long>(lo));
    return count;
}

void check_lengths(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParamError("vector lengths do not match");
    if (x.size() < 2) throw ParamError("rank correlation requires n >= 2");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

RatingMatrix load_ratings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ratings file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw IoError("empty ratings file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "image_id,grader_id,rating")
        throw IoError("ratings header must be image_id,grader_id,rating: " + path.string());

    struct Triple {
        size_t image, grader;
        double value;
    };
    std::vector<Triple> triples;
    std::map<std::string, size_t> image_index, grader_index;
    RatingMatrix m;

    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw IoError("ratings line " + std::to_string(lineno) + " malformed");
        auto [ii, fresh_i] = image_index.try_emplace(fields[0], m.images.size());
        if (fresh_i) m.images.push_back(fields[0]);
        auto [gi, fresh_g] = grader_index.try_emplace(fields[1], m.graders.size());
        if (fresh_g) m.graders.push_back(fields[1]);
        double value = 0.0;
        try {
            value = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw IoError("ratings line " + std::to_string(lineno) + ": bad rating value");
        }
        triples.push_back({ii->second, gi->second, value});
    }
    if (m.images.size() < 2) throw ParamError("ratings must cover at least 2 images");

    m.ratings.assign(m.images.size() * m.graders.size(), std::nullopt);
    for (const auto& t : triples) {
        auto& cell = m.rating(t.image, t.grader);
        if (cell.has_value())
            throw IoError("duplicate rating for image " + m.images[t.image] +
                          " by grader " + m.graders[t.grader]);
        cell = t.value;
    }
    return m;
}

std::vector<double> ranks(std::span<const double> x) {
    if (x.empty()) throw ParamError("ranks of an empty vector");
    const size_t n = x.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        // Positions i..j (0-based) share the average of ranks i+1..j+1.
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

double srcc(std::span<const double> x, std::span<const double> y) {
    check_lengths(x, y);
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    if (!has_ties(x) && !has_ties(y)) {
        double d2 = 0.0;
        for (size_t i = 0; i < rx.size(); ++i) {
            const double d = rx[i] - ry[i];
            d2 += d * d;
        }
        const double n = static_cast<double>(x.size());
        return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
    }
    return pearson(rx, ry);
}

double krcc(std::span<const double> x, std::span<const double> y) {
    check_lengths(x, y);
    const size_t n = x.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    // Sorted by (x, y): strict y-inversions are exactly the discordant pairs.
    std::vector<double> ys(n);
    for (size_t i = 0; i < n; ++i) ys[i] = y[order[i]];

    int64_t tied_x = 0, tied_xy = 0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const int64_t c = static_cast<int64_t>(j - i + 1);
        tied_x += c * (c - 1) / 2;
        size_t a = i;
        while (a <= j) {
            size_t b = a;
            while (b + 1 <= j && y[order[b + 1]] == y[order[a]]) ++b;
            const int64_t cc = static_cast<int64_t>(b - a + 1);
            tied_xy += cc * (cc - 1) / 2;
            a = b + 1;
        }
        i = j + 1;
    }

    int64_t tied_y = 0;
    {
        std::vector<double> s(y.begin(), y.end());
        std::sort(s.begin(), s.end());
        size_t a = 0;
        while (a < n) {
            size_t b = a;
            while (b + 1 < n && s[b + 1] == s[a]) ++b;
            const int64_t c = static_cast<int64_t>(b - a + 1);
            tied_y += c * (c - 1) / 2;
            a = b + 1;
        }
    }

    std::vector<double> buf(n);
    const int64_t discordant = count_inversions(ys, buf, 0, n);
    const int64_t total = static_cast<int64_t>(n) * (static_cast<int64_t>(n) - 1) / 2;
    const int64_t concordant = total - tied_x - tied_y + tied_xy - discordant;
    const double nn = static_cast<double>(n);
    return 2.0 * static_cast<double>(concordant - discordant) / (nn * (nn - 1.0));
}

ZscoreResult zscore_ratings(const RatingMatrix& m) {
    const size_t n_images = m.images.size();
    const size_t n_graders = m.graders.size();
    if (n_images < 2) throw ParamError("z-scoring requires at least 2 images");
    if (n_graders < 1) throw ParamError("z-scoring requires at least 1 grader");

    ZscoreResult res;
    std::vector<double> sum(n_images, 0.0);
    std::vector<int> count(n_images, 0);

    for (size_t g = 0; g < n_graders; ++g) {
        double total = 0.0;
        int present = 0;
        for (size_t i = 0; i < n_images; ++i) {
            if (m.rating(i, g)) {
                total += *m.rating(i, g);
                ++present;
            }
        }
        if (present < 2) {
            res.excluded_graders.push_back(m.graders[g]);
            continue;
        }
        const double mean = total / present;
        double ss = 0.0;
        for (size_t i = 0; i < n_images; ++i) {
            if (m.rating(i, g)) {
                const double d = *m.rating(i, g) - mean;
                ss += d * d;
            }
        }
        const double sd = std::sqrt(ss / (present - 1));
        if (sd == 0.0) {
            res.excluded_graders.push_back(m.graders[g]);
            continue;
        }
        for (size_t i = 0; i < n_images; ++i) {
            if (m.rating(i, g)) {
                sum[i] += (*m.rating(i, g) - mean) / sd;
                ++count[i];
            }
        }
    }

    res.per_image.resize(n_images);
    for (size_t i = 0; i < n_images; ++i) {
        if (count[i] == 0)
            throw ParamError("image " + m.images[i] + " has no usable ratings");
        res.per_image[i] = sum[i] / count[i];
    }
    return res;
}

double fisher_z(double r) {
    if (!(std::fabs(r) < 1.0)) throw ParamError("Fisher z requires |r| < 1");
    return std::atanh(r);
}

SteigerResult steiger_test(double r_jk, double r_jh, double r_kh, int n) {
    if (n < 4) throw ParamError("Steiger test requires n >= 4");
    const double z1 = fisher_z(r_jk);
    const double z2 = fisher_z(r_jh);
    if (!(std::fabs(r_kh) < 1.0)) throw ParamError("Fisher z requires |r| < 1");

    const double rbar = 0.5 * (r_jk + r_jh);
    const double rbar2 = rbar * rbar;
    const double psibar =
        r_kh * (1.0 - 2.0 * rbar2) - 0.5 * rbar2 * (1.0 - 2.0 * rbar2 - r_kh * r_kh);
    const double cbar = psibar / ((1.0 - rbar2) * (1.0 - rbar2));
    const double denom = 2.0 - 2.0 * cbar;
    if (!(denom > 0.0)) throw ParamError("degenerate overlap correlation");

    SteigerResult res;
    res.z = (z1 - z2) * std::sqrt((n - 3) / denom);
    res.p = std::erfc(std::fabs(res.z) / std::sqrt(2.0));
    return res;
}

} // namespace iqa
