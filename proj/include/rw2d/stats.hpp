#pragma once
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace rw2d {

inline double log_choose(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double log_sum_exp(std::span<const double> xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0; // unbiased
    std::size_t n = 0;
};

inline MeanVar mean_var(std::span<const double> xs) {
    MeanVar mv;
    mv.n = xs.size();
    if (mv.n == 0) return mv;
    double s = 0.0;
    for (double x : xs) s += x;
    mv.mean = s / static_cast<double>(mv.n);
    if (mv.n > 1) {
        double q = 0.0;
        for (double x : xs) q += (x - mv.mean) * (x - mv.mean);
        mv.var = q / static_cast<double>(mv.n - 1);
    }
    return mv;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 paired samples");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

/// Regularized lower incomplete gamma P(a,x) (series / continued fraction).
double gamma_p(double a, double x);

/// Quantile of the chi-square distribution with df degrees of freedom.
double chi2_quantile(double probability, double df);

/// Total variation distance between two pmfs given on a common index range.
inline double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return 0.5 * s;
}

inline double median_of(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median_of: empty sample");
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

} // namespace rw2d
