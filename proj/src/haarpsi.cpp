#include "iqa/haarpsi.hpp"

#include <cmath>

namespace iqa {

namespace {

// Compensated accumulator; keeps the pooled sums at a few ulps regardless of
// pixel count so the identity score stays within 1e-12 of 1.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

void check_pair(const GrayImage& f1, const GrayImage& f2) {
    if (f1.width != f2.width || f1.height != f2.height)
        throw ShapeError("image dimensions do not match");
    if (f1.range != DynamicRange::Byte || f2.range != DynamicRange::Byte)
        throw ParamError("HaarPSI requires Byte-range inputs");
}

std::vector<double> abs_response(const GrayImage& img, int scale, int orientation,
                                 Padding pad) {
    ResponseMap r = convolve_same(img, Filter2D::haar(scale, orientation), pad);
    for (double& v : r.data) v = std::fabs(v);
    return std::move(r.data);
}

inline double local_similarity(double a1, double b1, double a2, double b2,
                               double c, double alpha) {
    const double s = 0.5 * (similarity(a1, b1, c) + similarity(a2, b2, c));
    return logistic(s < 1.0 ? s : 1.0, alpha);
}

} // namespace

HaarPsiParams preset(const std::string& name) {
    HaarPsiParams p;
    if (name == "default") {
        p.c = 30.0;
        p.alpha = 4.2;
    } else if (name == "med" || name == "cxr") {
        p.c = 5.0;
        p.alpha = 4.9;
    } else if (name == "pa") {
        p.c = 5.0;
        p.alpha = 6.3;
    } else {
        throw ParamError("unknown preset: " + name);
    }
    return p;
}

double similarity(double a, double b, double c) {
    return (2.0 * a * b + c) / (a * a + b * b + c);
}

double logistic(double y, double alpha) {
    return 1.0 / (1.0 + std::exp(-alpha * y));
}

double logistic_inverse(double p, double alpha) {
    if (!(p > 0.0 && p < 1.0))
        throw ParamError("logistic_inverse requires p in (0, 1)");
    return std::log(p / (1.0 - p)) / alpha;
}

PairTransform precompute_pair(const GrayImage& f1, const GrayImage& f2,
                              const HaarPsiParams& p) {
    check_pair(f1, f2);
    GrayImage sub1, sub2;
    if (p.subsample) {
        sub1 = subsample2(f1);
        sub2 = subsample2(f2);
    }
    const GrayImage& a = p.subsample ? sub1 : f1;
    const GrayImage& b = p.subsample ? sub2 : f2;

    PairTransform t;
    t.width = a.width;
    t.height = a.height;
    for (int k = 0; k < 2; ++k) {
        t.s1a[k] = abs_response(a, 1, k + 1, p.padding);
        t.s1b[k] = abs_response(b, 1, k + 1, p.padding);
        t.s2a[k] = abs_response(a, 2, k + 1, p.padding);
        t.s2b[k] = abs_response(b, 2, k + 1, p.padding);
        std::vector<double> wa = abs_response(a, 3, k + 1, p.padding);
        std::vector<double> wb = abs_response(b, 3, k + 1, p.padding);
        for (size_t i = 0; i < wa.size(); ++i) wa[i] = std::max(wa[i], wb[i]);
        t.w[k] = std::move(wa);
    }
    return t;
}

double score_from_transform(const PairTransform& t, double c, double alpha) {
    if (!(c > 0.0) || !(alpha > 0.0))
        throw ParamError("HaarPSI parameters C and alpha must be positive");
    const size_t n = static_cast<size_t>(t.width) * t.height;
    KahanSum num, den, hs_total;
    for (int k = 0; k < 2; ++k) {
        const double* a1 = t.s1a[k].data();
        const double* b1 = t.s1b[k].data();
        const double* a2 = t.s2a[k].data();
        const double* b2 = t.s2b[k].data();
        const double* w = t.w[k].data();
        for (size_t i = 0; i < n; ++i) {
            const double hs = local_similarity(a1[i], b1[i], a2[i], b2[i], c, alpha);
            num.add(hs * w[i]);
            den.add(w[i]);
            hs_total.add(hs);
        }
    }
    // Both images constant: 0/0 in the formula; every HS pixel is l_alpha(1),
    // so pool the unweighted mean instead.
    double pooled = den.sum == 0.0 ? hs_total.sum / (2.0 * static_cast<double>(n))
                                   : num.sum / den.sum;
    const double top = logistic(1.0, alpha);
    if (pooled > top) pooled = top;
    const double root = logistic_inverse(pooled, alpha);
    const double score = root * root;
    return score < 1.0 ? score : 1.0;
}

ResponseMap local_similarity_map(const GrayImage& f1, const GrayImage& f2,
                                 int orientation, const HaarPsiParams& p) {
    check_pair(f1, f2);
    const std::vector<double> a1 = abs_response(f1, 1, orientation, p.padding);
    const std::vector<double> b1 = abs_response(f2, 1, orientation, p.padding);
    const std::vector<double> a2 = abs_response(f1, 2, orientation, p.padding);
    const std::vector<double> b2 = abs_response(f2, 2, orientation, p.padding);
    ResponseMap out;
    out.width = f1.width;
    out.height = f1.height;
    out.data.resize(a1.size());
    for (size_t i = 0; i < a1.size(); ++i)
        out.data[i] = local_similarity(a1[i], b1[i], a2[i], b2[i], p.c, p.alpha);
    return out;
}

ResponseMap weight_map(const GrayImage& f1, const GrayImage& f2, int orientation,
                       const HaarPsiParams& p) {
    check_pair(f1, f2);
    std::vector<double> wa = abs_response(f1, 3, orientation, p.padding);
    std::vector<double> wb = abs_response(f2, 3, orientation, p.padding);
    ResponseMap out;
    out.width = f1.width;
    out.height = f1.height;
    out.data.resize(wa.size());
    for (size_t i = 0; i < wa.size(); ++i) out.data[i] = std::max(wa[i], wb[i]);
    return out;
}

HaarPsiResult haarpsi_score(const GrayImage& f1, const GrayImage& f2,
                            const HaarPsiParams& p) {
    if (!(p.c > 0.0) || !(p.alpha > 0.0))
        throw ParamError("HaarPSI parameters C and alpha must be positive");
    const PairTransform t = precompute_pair(f1, f2, p);

    HaarPsiResult res;
    res.score = score_from_transform(t, p.c, p.alpha);
    const size_t n = static_cast<size_t>(t.width) * t.height;
    for (int k = 0; k < 2; ++k) {
        ResponseMap hs;
        hs.width = t.width;
        hs.height = t.height;
        hs.data.resize(n);
        for (size_t i = 0; i < n; ++i)
            hs.data[i] = local_similarity(t.s1a[k][i], t.s1b[k][i], t.s2a[k][i],
                                          t.s2b[k][i], p.c, p.alpha);
        res.hs_maps[k] = std::move(hs);

        ResponseMap w;
        w.width = t.width;
        w.height = t.height;
        w.data = t.w[k];
        res.weight_maps[k] = std::move(w);
    }
    return res;
}

} // namespace iqa
