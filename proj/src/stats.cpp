#include "osfsu/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace osfsu::stats {

namespace {

// P(a, x) by power series, valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
    const double lg = std::lgamma(a);
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
}

// Q(a, x) by modified Lentz continued fraction, valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double lg = std::lgamma(a);
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x))
        throw std::invalid_argument("regularized_gamma_q: requires a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("chi_square_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(dof / 2.0, x / 2.0);
}

double normal_two_sided_p(double stat) {
    if (!std::isfinite(stat)) throw std::invalid_argument("normal_two_sided_p: non-finite statistic");
    // 2 * (1 - Phi(|s|)) == erfc(|s| / sqrt(2))
    return std::erfc(std::abs(stat) / std::sqrt(2.0));
}

double normal_upper_quantile(double tail_prob) {
    if (!(tail_prob > 0.0 && tail_prob < 0.5))
        throw std::invalid_argument("normal_upper_quantile: tail_prob must be in (0, 0.5)");
    double lo = 0.0;
    double hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double tail = 0.5 * std::erfc(mid / std::sqrt(2.0));
        if (tail > tail_prob)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace osfsu::stats
