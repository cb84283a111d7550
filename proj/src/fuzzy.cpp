#include "osfsu/fuzzy.hpp"

#include <cmath>
#include <stdexcept>

namespace osfsu {

void TrapezoidParams::validate() const {
    if (!(a <= b && b <= c && c <= d))
        throw std::invalid_argument("trapezoid: corners must satisfy a <= b <= c <= d");
}

void AlphaBand::validate() const {
    if (!(0.0 < min && min < max && max < 1.0))
        throw std::invalid_argument("alpha band: need 0 < min < max < 1");
}

double triangular_mf(double x, double a, double b, double c) {
    if (!(a <= b && b <= c))
        throw std::invalid_argument("triangular_mf: need a <= b <= c");
    if (x == b) return 1.0; // covers degenerate ramps (a == b or b == c)
    if (x <= a || x >= c) return 0.0;
    if (x < b) return (x - a) / (b - a);
    return (x - c) / (b - c);
}

double trapezoidal_mf(double x, const TrapezoidParams& p) {
    p.validate();
    if (x >= p.b && x <= p.c) return 1.0; // plateau, closed at both corners
    if (x <= p.a || x >= p.d) return 0.0;
    if (x < p.b) return (x - p.a) / (p.b - p.a);
    return (p.d - x) / (p.d - p.c);
}

double gaussian_mf(double x, double center, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_mf: sigma must be positive");
    const double t = (x - center) / sigma;
    return std::exp(-0.5 * t * t);
}

double fuzzy_alpha(double uncertainty, const AlphaBand& band, const TrapezoidParams& params) {
    if (!(uncertainty >= 0.0 && uncertainty <= 1.0))
        throw std::invalid_argument("fuzzy_alpha: uncertainty must be in [0, 1]");
    band.validate();
    return band.min + (band.max - band.min) * trapezoidal_mf(uncertainty, params);
}

}  // namespace osfsu
