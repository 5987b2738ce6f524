#include "gle/assumptions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gle/fit.hpp"
#include "gle/transforms.hpp"

namespace gle {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool AssumptionReport::all_pass() const {
  return positivity.verdict == Verdict::Pass && decrease.verdict == Verdict::Pass &&
         (tail.verdict == Verdict::Pass || tail.verdict == Verdict::Inconclusive) &&
         kcos_positivity.verdict == Verdict::Pass;
}

std::string AssumptionReport::summary() const {
  std::ostringstream os;
  os << "positivity=" << verdict_name(positivity.verdict)
     << " eventual_decrease=" << verdict_name(decrease.verdict)
     << " tail_constant=" << verdict_name(tail.verdict)
     << " kcos_positive=" << verdict_name(kcos_positivity.verdict);
  return os.str();
}

std::vector<double> default_validation_grid(double t_lo, double t_hi,
                                            std::size_t points) {
  std::vector<double> g(points);
  const double step = std::log(t_hi / t_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = t_lo * std::exp(step * static_cast<double>(i));
  return g;
}

AssumptionReport validate_assumptions(const MemoryKernel& kernel,
                                      std::span<const double> grid) {
  if (grid.size() < 16)
    throw std::invalid_argument("validate_assumptions: grid too small");
  if (!(grid.back() >= 1e4 * grid.front()))
    throw std::invalid_argument(
        "validate_assumptions: grid must span at least 4 decades");

  AssumptionReport rep;

  // kernel positivity: positive for all nonzero t. Zeros reached by continuous
  // decay below ~1e-290 are double underflow, not a sign violation.
  rep.positivity.verdict = Verdict::Pass;
  rep.positivity.points_checked = grid.size();
  std::vector<double> values(grid.size());
  double smallest_positive = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = kernel.evaluate(grid[i]);
    if (values[i] > 0.0) smallest_positive = std::min(smallest_positive, values[i]);
    const bool underflow = values[i] == 0.0 && smallest_positive < 1e-290;
    if (!(values[i] > 0.0) && !underflow &&
        rep.positivity.verdict == Verdict::Pass) {
      rep.positivity.verdict = Verdict::Fail;
      rep.positivity.first_violation_t = grid[i];
    }
  }

  // eventual decrease: locate the last increase. An
  // increase past the kernel's declared decrease onset breaks its contract.
  rep.decrease.verdict = kernel.decrease_onset() > grid.back()
                             ? Verdict::Inconclusive
                             : Verdict::Pass;
  std::size_t last_violation = 0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (values[i + 1] > values[i] * (1.0 + 1e-12)) {
      last_violation = i + 1;
      rep.decrease.violations += 1;
      rep.decrease.last_violation_t = grid[i + 1];
    }
  }
  rep.decrease.onset_t = rep.decrease.violations ? grid[last_violation] : grid[0];
  if (rep.decrease.violations &&
      rep.decrease.last_violation_t > kernel.decrease_onset() * (1.0 + 1e-9))
    rep.decrease.verdict = Verdict::Fail;

  // regime tail constant and rate, regressed on the decade below the top
  const RegimeTag& tag = kernel.regime();
  double kappa = 0.0;
  double declared = 0.0;
  bool have_power = false;
  if (const auto* s = std::get_if<Subdiffusive>(&tag)) {
    kappa = s->alpha;
    declared = s->c_alpha;
    have_power = true;
  } else if (const auto* c = std::get_if<Critical>(&tag)) {
    kappa = 1.0;
    declared = c->c1;
    have_power = true;
  }
  if (std::holds_alternative<Diffusive>(tag)) {
    // integrable kernels have t^kappa K(t) -> 0 for the probe weight
    rep.tail.kappa = 1.0;
    rep.tail.c_hat = grid.back() * values.back();
    rep.tail.declared = 0.0;
    rep.tail.verdict = rep.tail.c_hat < 1e-3 ? Verdict::Pass : Verdict::Fail;
    rep.tail.window_lo = grid.back();
    rep.tail.window_hi = grid.back();
  } else if (have_power) {
    rep.tail.kappa = kappa;
    rep.tail.declared = declared;
    const double c_hat = std::pow(grid.back(), kappa) * values.back();
    rep.tail.c_hat = c_hat;
    std::vector<double> ts, dev;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] < grid.front() * 10.0 || grid[i] > 0.1 * grid.back()) continue;
      const double d = std::pow(grid[i], kappa) * values[i] - c_hat;
      if (d == 0.0) continue;
      ts.push_back(grid[i]);
      dev.push_back(std::abs(d));
    }
    rep.tail.window_lo = ts.empty() ? 0.0 : ts.front();
    rep.tail.window_hi = ts.empty() ? 0.0 : ts.back();
    if (ts.size() >= 4)
      rep.tail.rate_exponent_hat = -fit_loglog(ts, dev).slope;
    rep.tail.verdict = std::abs(c_hat - declared) <= 0.10 * std::abs(declared)
                           ? Verdict::Pass
                           : Verdict::Fail;
  } else {
    rep.tail.verdict = Verdict::Inconclusive;
  }

  // cosine-transform positivity, scanned numerically
  rep.kcos_positivity.verdict = Verdict::Pass;
  rep.kcos_positivity.min_value = std::numeric_limits<double>::infinity();
  for (double w = 1e-3; w <= 1.01e3; w *= 3.1622776601683795) {
    rep.kcos_positivity.omegas.push_back(w);
    double v;
    try {
      v = kcos(kernel, w, 1e-8).value;
    } catch (const std::exception&) {
      rep.kcos_positivity.verdict = Verdict::Inconclusive;
      break;
    }
    if (v < rep.kcos_positivity.min_value) {
      rep.kcos_positivity.min_value = v;
      rep.kcos_positivity.min_at_omega = w;
    }
    if (!(v > 0.0)) rep.kcos_positivity.verdict = Verdict::Fail;
  }
  return rep;
}

}  // namespace gle
