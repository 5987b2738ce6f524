#pragma once

#include <span>
#include <string>
#include <vector>

#include "gle/spectral.hpp"

namespace gle {

struct MsdPoint {
  double value = 0.0;
  double abs_error = 0.0;
};

/// MSD(t) = 4 t * int_0^inf (1 - cos z)/z^2 * rhat(z/t) dz, computed in the
/// z = t w variables for large-t stability. tol is the requested relative
/// accuracy of the returned value; abs_error reports what was achieved.
MsdPoint msd(const SpectralModel& model, double t, double tol);

/// Sampled MSD over a positive time grid; MSD(0) = 0 by convention and is
/// never evaluated directly.
struct MsdCurve {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> errors;
};

/// Pointwise msd() over a sorted positive grid; points are independent and
/// may run concurrently, output ordered by index.
MsdCurve msd_curve(const SpectralModel& model, std::span<const double> t_grid,
                   double tol, int threads = 1);

enum class TrendKind { Linear, Power, LinearOverLog };

/// Regime trend g(t) and asymptotic constant:
///   Diffusive:     g = t,        c = 2/(beta K_cos(0)),  rate gamma0/2
///   Subdiffusive:  g = t^alpha,  c = 2 sin(alpha pi)/(alpha pi beta C_a)
///                  (the Gamma-identity form of the two-integral expression),
///                  rate eta/2, eta = min{alpha, 1-alpha, alpha beta_alpha}
///   Critical:      g = t/log t,  c = 2/(beta c1),  rate ~ 1/log t
struct AsymptoteSpec {
  TrendKind trend = TrendKind::Linear;
  double power = 1.0;  // alpha for TrendKind::Power
  double constant = 0.0;
  double deviation_rate = 0.0;  // predicted exponent; 0 for LinearOverLog
  bool log_rate = false;        // critical marker: rate is 1/log t

  double trend_value(double t) const;
  std::string trend_name() const;
};

AsymptoteSpec asymptotic_constant(const SpectralModel& model);

/// Fit of the MSD deviation from its asymptotic trend.
///
/// Power regimes: regress log|MSD/g - c| on log t over the points whose
/// deviation exceeds 3x their quadrature error; fitted_exponent is the decay
/// rate delta-hat (faster decay than predicted passes: the predicted rates
/// are one-sided upper bounds). Critical regime: reports sup |MSD log t / t - c| log t
/// and whether it stays bounded across the window.
struct DeviationFit {
  enum class Verdict { Pass, Fail, Inconclusive };
  double fitted_exponent = 0.0;   // delta-hat (power) or sup coefficient (critical)
  double residual_rms = 0.0;
  double window_lo = 0.0, window_hi = 0.0;  // usable points actually fitted
  std::size_t points_used = 0;
  Verdict verdict = Verdict::Inconclusive;
  bool critical = false;
};

DeviationFit deviation_fit(const MsdCurve& curve, const AsymptoteSpec& spec,
                           double slack = 0.15);

/// log MSD vs log t slope, plus a critical-regime detector: the log flag is
/// raised when adding the known -log log t correction materially improves
/// the linear fit.
struct MsdClassification {
  double alpha_hat = 0.0;
  bool log_correction = false;
  double sse_power = 0.0;
  double sse_power_log = 0.0;
};

MsdClassification classify_from_msd(const MsdCurve& curve);

}  // namespace gle
