#include "gle/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gle {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

const char* regime_name(const RegimeTag& tag) {
  struct Visitor {
    const char* operator()(const Diffusive&) const { return "diffusive"; }
    const char* operator()(const Subdiffusive&) const { return "subdiffusive"; }
    const char* operator()(const Critical&) const { return "critical"; }
    const char* operator()(const Unclassified&) const { return "unclassified"; }
  };
  return std::visit(Visitor{}, tag);
}

void validate_regime(const RegimeTag& tag) {
  if (const auto* d = std::get_if<Diffusive>(&tag)) {
    if (!(d->beta0 > 0.0))
      throw std::invalid_argument("Diffusive.beta0 must be positive");
  } else if (const auto* s = std::get_if<Subdiffusive>(&tag)) {
    if (!(s->alpha > 0.0) || !(s->alpha < 1.0))
      throw std::invalid_argument("Subdiffusive.alpha must lie strictly in (0,1)");
    if (!(s->c_alpha > 0.0))
      throw std::invalid_argument("Subdiffusive.c_alpha must be positive");
    if (!(s->beta_alpha > 0.0))  // +inf allowed: exact power law
      throw std::invalid_argument("Subdiffusive.beta_alpha must be positive");
  } else if (const auto* c = std::get_if<Critical>(&tag)) {
    if (!(c->c1 > 0.0)) throw std::invalid_argument("Critical.c1 must be positive");
    if (!(c->beta1 > 0.0))
      throw std::invalid_argument("Critical.beta1 must be positive");
  }
}

MemoryKernel::MemoryKernel(std::string name, std::function<double(double)> evaluate,
                           bool singular_at_origin, RegimeTag regime,
                           double decrease_onset,
                           std::optional<ClosedFormTransforms> closed_forms)
    : name_(std::move(name)),
      eval_(std::move(evaluate)),
      singular_(singular_at_origin),
      regime_(std::move(regime)),
      decrease_onset_(decrease_onset),
      closed_forms_(std::move(closed_forms)) {
  if (!eval_) throw std::invalid_argument("MemoryKernel needs an evaluator");
  if (decrease_onset_ < 0.0)
    throw std::invalid_argument("decrease_onset must be nonnegative");
  validate_regime(regime_);
  if (singular_) {
    if (const auto* s = std::get_if<Subdiffusive>(&regime_))
      singularity_exponent_ = s->alpha;
    else
      throw std::invalid_argument(
          "singular kernels must carry a Subdiffusive tag with the "
          "singularity exponent");
  }
}

MemoryKernel make_exponential(double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("make_exponential: lambda must be positive");
  ClosedFormTransforms cf;
  cf.kcos = [lambda](double w) { return lambda / (lambda * lambda + w * w); };
  cf.ksin = [lambda](double w) { return w / (lambda * lambda + w * w); };
  // any beta0 works; downstream rates only consume gamma0 = min{beta0, 2}
  return MemoryKernel("exponential(" + std::to_string(lambda) + ")",
                      [lambda](double t) { return std::exp(-lambda * t); },
                      /*singular=*/false, Diffusive{2.0}, /*onset=*/0.0,
                      std::move(cf));
}

MemoryKernel make_power_law(double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw std::invalid_argument("make_power_law: alpha must lie in (0,1]");
  auto eval = [alpha](double t) { return std::pow(1.0 + t, -alpha); };
  RegimeTag tag;
  if (alpha < 1.0)
    tag = Subdiffusive{alpha, 1.0, 1.0};
  else
    tag = Critical{1.0, 1.0};
  return MemoryKernel("power_law(" + std::to_string(alpha) + ")", eval,
                      /*singular=*/false, tag, /*onset=*/0.0);
}

MemoryKernel make_pure_power(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument(
        "make_pure_power: alpha must lie strictly in (0,1); alpha >= 1 "
        "violates local integrability of the kernel at t = 0");
  const double gamma_factor = std::tgamma(1.0 - alpha);
  const double cos_amp = gamma_factor * std::sin(alpha * kPi / 2.0);
  const double sin_amp = gamma_factor * std::cos(alpha * kPi / 2.0);
  ClosedFormTransforms cf;
  cf.kcos = [alpha, cos_amp](double w) {
    return std::pow(w, alpha - 1.0) * cos_amp;
  };
  cf.ksin = [alpha, sin_amp](double w) {
    return std::pow(w, alpha - 1.0) * sin_amp;
  };
  const double inf = std::numeric_limits<double>::infinity();
  return MemoryKernel("pure_power(" + std::to_string(alpha) + ")",
                      [alpha](double t) { return std::pow(t, -alpha); },
                      /*singular=*/true, Subdiffusive{alpha, 1.0, inf},
                      /*onset=*/0.0, std::move(cf));
}

namespace {

struct Table {
  std::vector<double> log_t;
  std::vector<double> log_k;
  double t_first, t_last, k_first, k_last;
  RegimeTag tail;
  double diffusive_rate;  // exponential continuation rate for Diffusive tails
};

double table_eval(const Table& tb, double t) {
  if (t <= tb.t_first) return tb.k_first;  // documented clamp
  if (t >= tb.t_last) {
    if (const auto* s = std::get_if<Subdiffusive>(&tb.tail))
      return tb.k_last * std::pow(tb.t_last / t, s->alpha);
    if (std::holds_alternative<Critical>(tb.tail))
      return tb.k_last * (tb.t_last / t);
    if (std::holds_alternative<Diffusive>(tb.tail)) {
      if (!(tb.diffusive_rate > 0.0))
        throw std::domain_error(
            "tabulated kernel: Diffusive tail extrapolation needs a "
            "decreasing final segment");
      return tb.k_last * std::exp(-tb.diffusive_rate * (t - tb.t_last));
    }
    throw std::domain_error(
        "tabulated kernel: query beyond the table with an Unclassified tail");
  }
  const double lt = std::log(t);
  // binary search for the segment
  std::size_t lo = 0, hi = tb.log_t.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (tb.log_t[mid] <= lt)
      lo = mid;
    else
      hi = mid;
  }
  const double u = (lt - tb.log_t[lo]) / (tb.log_t[hi] - tb.log_t[lo]);
  return std::exp(tb.log_k[lo] + u * (tb.log_k[hi] - tb.log_k[lo]));
}

}  // namespace

MemoryKernel make_tabulated(const std::vector<std::pair<double, double>>& samples,
                            RegimeTag tail) {
  if (samples.size() < 8)
    throw std::invalid_argument("make_tabulated: at least 8 samples required");
  Table tb;
  tb.log_t.reserve(samples.size());
  tb.log_k.reserve(samples.size());
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const auto& [t, k] : samples) {
    if (!(t > prev_t))
      throw std::invalid_argument("make_tabulated: t grid must be strictly increasing");
    if (k < 0.0)
      throw std::invalid_argument("make_tabulated: kernel values must not be negative");
    if (!(k > 0.0))
      throw std::invalid_argument(
          "make_tabulated: zero kernel values are not representable in "
          "log-log interpolation");
    prev_t = t;
    tb.log_t.push_back(std::log(t));
    tb.log_k.push_back(std::log(k));
  }
  tb.t_first = samples.front().first;
  tb.k_first = samples.front().second;
  tb.t_last = samples.back().first;
  tb.k_last = samples.back().second;
  tb.tail = tail;
  const std::size_t n = samples.size();
  tb.diffusive_rate =
      (tb.log_k[n - 2] - tb.log_k[n - 1]) /
      (samples[n - 1].first - samples[n - 2].first);
  validate_regime(tail);

  // decrease onset: scan for the last increase in the table
  double onset = tb.t_first;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (samples[i + 1].second > samples[i].second) onset = samples[i + 1].first;

  return MemoryKernel("tabulated[" + std::to_string(n) + "]",
                      [tb = std::move(tb)](double t) { return table_eval(tb, t); },
                      /*singular=*/false, tail, onset);
}

}  // namespace gle
