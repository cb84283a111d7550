#pragma once

namespace osfsu {

/// Trapezoid corners a <= b <= c <= d. A coincident pair makes the
/// corresponding ramp a step with membership 1 exactly at the shared point.
struct TrapezoidParams {
    double a = 0.0;
    double b = 0.5;
    double c = 0.9;
    double d = 1.0;

    void validate() const;
};

/// Significance band the fuzzy threshold moves in; 0 < min < max < 1.
struct AlphaBand {
    double min = 0.01;
    double max = 0.1;

    void validate() const;
};

double triangular_mf(double x, double a, double b, double c);
double trapezoidal_mf(double x, const TrapezoidParams& params);
double gaussian_mf(double x, double center, double sigma);

/// Maps block uncertainty u in [0, 1] to the significance threshold:
///   mu = band.min + (band.max - band.min) * trapezoidal_mf(u, params).
double fuzzy_alpha(double uncertainty, const AlphaBand& band, const TrapezoidParams& params);

}  // namespace osfsu
