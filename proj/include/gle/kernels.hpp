#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gle {

/// Tail-decay classification of a memory kernel.
///
/// Diffusive:     K integrable with t^beta0 K(t) integrable.
/// Subdiffusive:  t^alpha K(t) -> c_alpha at rate t^-beta_alpha, alpha in (0,1).
/// Critical:      t K(t) -> c1 at rate t^-beta1.
struct Diffusive {
  double beta0 = 1.0;
};

struct Subdiffusive {
  double alpha = 0.5;
  double c_alpha = 1.0;
  double beta_alpha = 1.0;  // +inf means the power law is exact
};

struct Critical {
  double c1 = 1.0;
  double beta1 = 1.0;
};

struct Unclassified {};

using RegimeTag = std::variant<Diffusive, Subdiffusive, Critical, Unclassified>;

const char* regime_name(const RegimeTag& tag);

/// Throws std::invalid_argument if the tag's exponents violate their ranges
/// (alpha strictly inside (0,1), all rate exponents strictly positive).
void validate_regime(const RegimeTag& tag);

/// Closed-form cosine/sine transforms, when known, for oracle testing.
struct ClosedFormTransforms {
  std::function<double(double)> kcos;  // omega > 0
  std::function<double(double)> ksin;  // omega > 0
};

/// A memory kernel K(t) on t > 0 with its regime metadata.
///
/// Immutable after construction; evaluation is pure and safe to call from
/// many threads. The symmetric extension K(-t) = K(t) is implicit: only
/// t >= 0 is ever evaluated. K may be infinite at t = 0 only
/// (singular_at_origin).
class MemoryKernel {
 public:
  MemoryKernel(std::string name, std::function<double(double)> evaluate,
               bool singular_at_origin, RegimeTag regime, double decrease_onset,
               std::optional<ClosedFormTransforms> closed_forms = std::nullopt);

  double evaluate(double t) const { return eval_(t); }
  double operator()(double t) const { return eval_(t); }

  bool singular_at_origin() const { return singular_; }
  const RegimeTag& regime() const { return regime_; }

  /// K is non-increasing on [decrease_onset, inf). Built-ins declare 0.
  double decrease_onset() const { return decrease_onset_; }

  const std::optional<ClosedFormTransforms>& closed_form_transforms() const {
    return closed_forms_;
  }
  const std::string& name() const { return name_; }

  /// Exponent of the origin singularity (valid when singular_at_origin).
  double singularity_exponent() const { return singularity_exponent_; }

 private:
  std::string name_;
  std::function<double(double)> eval_;
  bool singular_;
  RegimeTag regime_;
  double decrease_onset_;
  std::optional<ClosedFormTransforms> closed_forms_;
  double singularity_exponent_ = 0.0;

  friend MemoryKernel make_pure_power(double alpha);
};

/// K(t) = exp(-lambda t). Diffusive; beta0 reported as the effective cap 2
/// since every beta0 works and downstream rates only consume min{beta0, 2}.
/// Closed forms: K_cos = lambda/(lambda^2+w^2), K_sin = w/(lambda^2+w^2).
MemoryKernel make_exponential(double lambda);

/// K(t) = (1+t)^-alpha for alpha in (0,1]. The (1+t) regularization keeps K
/// locally integrable while t^alpha K(t) -> 1 at rate 1/t. alpha < 1 is
/// Subdiffusive{alpha, 1, 1}; alpha = 1 is Critical{1, 1}.
MemoryKernel make_power_law(double alpha);

/// K(t) = t^-alpha for alpha strictly in (0,1). Singular at the origin.
/// Subdiffusive{alpha, 1, +inf}; exact closed forms
/// K_cos = w^(alpha-1) Gamma(1-alpha) sin(alpha pi/2),
/// K_sin = w^(alpha-1) Gamma(1-alpha) cos(alpha pi/2).
MemoryKernel make_pure_power(double alpha);

/// Kernel from (t, K) samples: log-log linear interpolation inside the
/// table, regime-tag extrapolation outside. Queries below the first sample
/// clamp to the first value. Requires >= 8 samples, strictly increasing t,
/// strictly positive K (log-log interpolation is undefined at zero).
MemoryKernel make_tabulated(const std::vector<std::pair<double, double>>& samples,
                            RegimeTag tail);

}  // namespace gle
