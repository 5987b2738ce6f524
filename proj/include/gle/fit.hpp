#pragma once

#include <span>
#include <vector>

namespace gle {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double sse = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of log|y| against log x (points with y == 0 skipped).
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Iterated Aitken delta-squared extrapolation of a convergent sequence;
/// returns the accelerated limit and a last-correction error estimate.
struct Extrapolation {
  double limit = 0.0;
  double abs_error = 0.0;
};

Extrapolation aitken_extrapolate(std::span<const double> seq);

/// Neville polynomial extrapolation of (x_i, f_i) to x = 0, using the last
/// `order`+1 points (x decreasing toward 0 assumed).
Extrapolation neville_to_zero(std::span<const double> x,
                              std::span<const double> f, int order = 2);

}  // namespace gle
