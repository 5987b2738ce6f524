#pragma once

#include <span>
#include <string>
#include <vector>

#include "gle/kernels.hpp"

namespace gle {

enum class Verdict { Pass, Fail, Inconclusive };

const char* verdict_name(Verdict v);

/// Numerical check of the memory-kernel assumptions over a time grid.
/// Every verdict carries the grid evidence that produced it.
struct AssumptionReport {
  struct Positivity {
    Verdict verdict = Verdict::Inconclusive;
    std::size_t points_checked = 0;
    double first_violation_t = 0.0;  // valid when verdict == Fail
  } positivity;

  struct EventualDecrease {
    Verdict verdict = Verdict::Inconclusive;
    double onset_t = 0.0;            // grid time after the last violation
    double last_violation_t = 0.0;   // 0 when none
    std::size_t violations = 0;
  } decrease;

  struct TailConstant {
    Verdict verdict = Verdict::Inconclusive;
    double kappa = 0.0;        // power weight from the regime tag
    double c_hat = 0.0;        // t^kappa K(t) at the largest grid times
    double declared = 0.0;
    double rate_exponent_hat = 0.0;  // from regressing log|t^k K - c| on log t
    double window_lo = 0.0, window_hi = 0.0;
  } tail;

  struct KcosPositivity {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<double> omegas;
    double min_value = 0.0;
    double min_at_omega = 0.0;
  } kcos_positivity;

  bool all_pass() const;
  std::string summary() const;
};

/// Grid must span at least 4 decades. Disagreement of the estimated tail
/// constant with the declared RegimeTag beyond 10% is a Fail; checks that
/// cannot decide report Inconclusive rather than throwing.
AssumptionReport validate_assumptions(const MemoryKernel& kernel,
                                      std::span<const double> grid);

/// Log-spaced default grid over [t_lo, t_hi].
std::vector<double> default_validation_grid(double t_lo = 1e-2, double t_hi = 1e6,
                                            std::size_t points = 161);

}  // namespace gle
