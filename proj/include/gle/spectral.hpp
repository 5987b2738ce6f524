#pragma once

#include <vector>

#include "gle/kernels.hpp"
#include "gle/transforms.hpp"

namespace gle {

/// The (m, beta, kernel) triple of the reduced GLE. m, beta > 0.
struct SpectralModel {
  double m = 1.0;
  double beta = 1.0;
  MemoryKernel kernel;

  SpectralModel(double m_, double beta_, MemoryKernel k);
};

struct SpectralValue {
  double omega = 0.0;
  double rhat = 0.0;
  double abs_error = 0.0;
};

/// Weak-solution spectral density
///   rhat(w) = (1/2pi) * 2 beta K_cos(w) /
///             ([beta K_cos(w)]^2 + [m w - beta K_sin(w)]^2),
/// symmetric in w, evaluated from kcos/ksin at matched tolerance with
/// first-order error propagation. Throws std::domain_error if the computed
/// K_cos(w) is not positive (the density requires a positive cosine
/// transform) and
/// std::invalid_argument at w = 0 (limits come from rhat_near_zero).
SpectralValue rhat(const SpectralModel& model, double omega, double tol);

/// Regime-dependent behavior of rhat near w = 0, with a numerical check.
///
/// Diffusive:     rhat(0+) = 1/(pi beta K_cos(0)),   scaled f(w) = rhat(w)
/// Subdiffusive:  rhat(w)/w^(1-alpha) -> I_c/(pi beta C_a (I_c^2 + I_s^2))
/// Critical:      |log w| rhat(w) -> 1/(pi beta c1)
struct NearZeroAsymptote {
  double limit = 0.0;
  std::vector<double> omegas;
  std::vector<double> scaled_values;  // f(w) per regime, see above
  double fitted_exponent = 0.0;       // decay of |f - limit| (power regimes)
  double theoretical_exponent = 0.0;  // gamma0 / gamma_alpha; 0 for critical
  double sup_log_deviation = 0.0;     // critical: sup |f - limit| |log w|
  bool critical = false;
  bool verified = false;              // smallest-w value agrees with limit
};

NearZeroAsymptote rhat_near_zero(const SpectralModel& model, double tol);

/// Numerical check that rhat is integrable over R: quadrature on (0, Omega]
/// plus the w^-2 tail majorant beyond Omega.
struct IntegrabilityReport {
  double total = 0.0;       // estimate of int_R rhat
  double abs_error = 0.0;
  double omega_split = 0.0; // Omega
  double tail_estimate = 0.0;
  bool finite = false;
};

IntegrabilityReport check_integrability(const SpectralModel& model,
                                        double tol = 1e-6,
                                        double omega_split = 1e3);

}  // namespace gle
