#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gle/kernels.hpp"

namespace gle {

/// A computed K_cos(w) or K_sin(w) with a certified absolute error.
///
/// abs_error = quadrature error over [0, cutoff_time] + the tail charge.
/// tail_bound is the tail charge actually folded into abs_error: either the
/// decreasing-tail remainder bound 4 K(T)/|w| at T = cutoff_time, or the smaller
/// accelerated-series remainder when that strategy won.
struct TransformValue {
  double value = 0.0;
  double abs_error = 0.0;
  double cutoff_time = 0.0;
  double tail_bound = 0.0;
};

struct TransformOptions {
  double tol = 1e-8;
  int max_half_periods = 768;   // hard cap on oscillation terms past the head
  int min_half_periods = 48;    // before the first acceleration attempt
  int max_head_panels = 512;
};

/// K_cos(w) = int_0^inf K(t) cos(w t) dt, improper. Even in w.
/// w = 0 is allowed only for integrable (Diffusive-tagged) kernels;
/// critical/subdiffusive kernels diverge there and throw std::domain_error.
TransformValue kcos(const MemoryKernel& kernel, double omega, double tol);
TransformValue kcos(const MemoryKernel& kernel, double omega,
                    const TransformOptions& opt);

/// K_sin(w) = int_0^inf K(t) sin(w t) dt. Odd in w: computed at |w|, sign
/// flipped. K_sin(0) = 0 identically.
TransformValue ksin(const MemoryKernel& kernel, double omega, double tol);
TransformValue ksin(const MemoryKernel& kernel, double omega,
                    const TransformOptions& opt);

struct TransformGridRow {
  double omega = 0.0;
  TransformValue cos;
  TransformValue sin;
};

/// Batched kcos/ksin; pointwise identical to individual calls. Points are
/// independent and may be evaluated concurrently (threads > 1 or 0 = auto);
/// results are ordered by index so the output is scheduling-independent.
std::vector<TransformGridRow> transform_grid(const MemoryKernel& kernel,
                                             std::span<const double> omegas,
                                             double tol, int threads = 1);

/// The remainder bound 4 K(T)/|w| for |int_T^inf K trig(w t) dt|, valid once
/// T is inside the kernel's decreasing region (throws otherwise).
double tail_remainder_bound(const MemoryKernel& kernel, double T, double omega);

/// Small-frequency limits of a critical kernel: K_sin(w) -> c1 pi/2 and
/// K_cos(w)/|log w| -> c1, each estimated on a geometric grid with
/// extrapolation.
struct AbelianReport {
  std::vector<double> omegas;            // geometric grid, >= 3 decades
  std::vector<double> ksin_values;
  std::vector<double> kcos_over_log;
  double limit_sin = 0.0;                // extrapolated
  double limit_sin_error = 0.0;          // extrapolation error estimate
  double limit_cos_over_log = 0.0;       // extrapolated
  double limit_cos_over_log_error = 0.0;
  double sin_rate_exponent = 0.0;        // fitted decay of |K_sin - limit|
  double cos_log_rate_coefficient = 0.0; // sup |K_cos/|log w| - c| * |log w|
};

AbelianReport abelian_limits(const MemoryKernel& kernel, double tol);

/// Slope of K_cos against |log w| over small-frequency samples; the
/// Tauberian statement then predicts t K(t) -> c1_hat.
struct TauberianEstimate {
  double c1_hat = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  bool critical_like = false;  // false when the slope is negligibly small
  std::size_t n_samples = 0;
};

TauberianEstimate tauberian_recover(
    std::span<const std::pair<double, double>> kcos_samples);

/// Regime-specific small-frequency deviation rates of the transforms.
///
/// Diffusive: fitted decay exponent of |K_cos(w) - K_cos(0)| (floor
/// gamma0 = min{beta0, 2}). Subdiffusive: of
/// |w^(1-alpha) K_cos(w) - C_alpha I_c| (floor gamma_alpha =
/// min{1-alpha, alpha beta_alpha}). Critical: sup of
/// |K_cos(w) - c1 |log w|| over the grid, which stays bounded in this regime.
struct SmallFrequencyRates {
  std::vector<double> omegas;
  std::vector<double> deviations;
  double fitted_exponent = 0.0;      // power regimes
  double theoretical_exponent = 0.0; // gamma0 or gamma_alpha
  double sup_log_deviation = 0.0;    // critical regime
  bool critical = false;
};

SmallFrequencyRates small_frequency_rates(const MemoryKernel& kernel, double tol);

/// I_c = int_0^inf cos(z)/z^alpha dz and I_s = the sine analog, via the
/// classical Gamma-function closed forms.
double frac_cos_integral(double alpha);
double frac_sin_integral(double alpha);

}  // namespace gle
