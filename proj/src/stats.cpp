#include "rw2d/stats.hpp"

#include <algorithm>

namespace rw2d {

// Lower regularized incomplete gamma. Series expansion for x < a+1,
// Lentz continued fraction otherwise.
double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

double chi2_quantile(double probability, double df) {
    if (!(probability > 0.0 && probability < 1.0) || !(df > 0.0))
        throw std::invalid_argument("chi2_quantile: bad arguments");
    // Bisection on the cdf; bracket grows until it straddles the target.
    double lo = 0.0, hi = std::max(df, 1.0);
    while (gamma_p(df / 2.0, hi / 2.0) < probability) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (gamma_p(df / 2.0, mid / 2.0) < probability)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace rw2d
