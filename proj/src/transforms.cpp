#include "gle/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "gle/fit.hpp"
#include "gle/quadrature.hpp"

namespace gle {

namespace {

constexpr double kPi = 3.14159265358979323846;

enum class Trig { Cos, Sin };

double trig_eval(Trig trig, double x) {
  return trig == Trig::Cos ? std::cos(x) : std::sin(x);
}

bool integrable(const RegimeTag& tag) {
  return std::holds_alternative<Diffusive>(tag);
}

/// K_cos(0) = int_0^inf K dt for an integrable kernel: geometric panels until
/// three consecutive contributions fall below the budget. No rigorous tail
/// rate is available from integrability alone, so the truncation charge is
/// 4x the last panel (validated against the closed-form oracle).
TransformValue transform_at_zero(const MemoryKernel& kernel, Trig trig,
                                 const TransformOptions& opt) {
  if (trig == Trig::Sin) return {0.0, 0.0, 0.0, 0.0};  // sin(0 t) == 0
  if (!integrable(kernel.regime()))
    throw std::domain_error(
        "kcos(omega = 0) diverges: int_0^inf K dt is infinite for "
        "critical/subdiffusive kernels (and unknown for unclassified ones)");
  auto f = [&kernel](double t) { return kernel.evaluate(t); };

  CompensatedSum total;
  double quad_err = 0.0;
  double lo = 0.0, hi = 1.0;
  const double budget = 0.05 * opt.tol;
  int quiet = 0;
  double last_panel = 0.0;
  while (hi < 1e12) {
    auto r = integrate_adaptive(f, lo, hi, budget, 24);
    total.add(r.value);
    quad_err += r.abs_error;
    last_panel = std::abs(r.value);
    quiet = last_panel < budget ? quiet + 1 : 0;
    if (quiet >= 3) break;
    lo = hi;
    hi *= 2.0;
  }
  const double tail_charge = 4.0 * last_panel;
  return {total.value(), quad_err + tail_charge, lo, tail_charge};
}

/// Head integral over [0, first_break]: the origin-singular part via the
/// u = t^(1-alpha) substitution, the rest on geometric panels (the phase
/// varies by at most a quarter/half period there; kernel variation dominates).
QuadResult head_integral(const MemoryKernel& kernel, double w, Trig trig,
                         double first_break, double abs_tol,
                         const TransformOptions& opt) {
  auto f = [&kernel, w, trig](double t) {
    return kernel.evaluate(t) * trig_eval(trig, w * t);
  };
  CompensatedSum value;
  double err = 0.0;
  double smooth_lo = 0.0;
  if (kernel.singular_at_origin()) {
    const double alpha = kernel.singularity_exponent();
    const double t0 = std::min(1.0, first_break);
    const double inv = 1.0 / (1.0 - alpha);
    // int_0^t0 K(t) trig(w t) dt = inv * int_0^{t0^(1-alpha)} [K(t) t^alpha] trig(w t) du
    auto fu = [&kernel, w, trig, alpha, inv](double u) {
      const double t = std::pow(u, inv);
      const double smooth = t > 0.0 ? kernel.evaluate(t) * std::pow(t, alpha) : 1.0;
      return inv * smooth * trig_eval(trig, w * t);
    };
    const double u0 = std::pow(t0, 1.0 - alpha);
    auto r = integrate_adaptive(fu, 0.0, u0, 0.3 * abs_tol, opt.max_head_panels / 2);
    value.add(r.value);
    err += r.abs_error;
    smooth_lo = t0;
  }
  if (smooth_lo < first_break) {
    const double start = std::min(std::max(smooth_lo, 0.0), first_break);
    std::vector<double> edges;
    if (start == 0.0) {
      edges.push_back(0.0);
      double e = std::min(1.0, first_break);
      edges.push_back(e);
      while (e < first_break) {
        e = std::min(first_break, 2.0 * e);
        edges.push_back(e);
      }
    } else {
      edges = geometric_edges(start, first_break, 2.0);
    }
    auto r = integrate_adaptive(f, std::span<const double>(edges), 0.7 * abs_tol,
                                opt.max_head_panels);
    value.add(r.value);
    err += r.abs_error;
  }
  return {value.value(), err};
}

TransformValue fourier_transform(const MemoryKernel& kernel, double omega,
                                 Trig trig, const TransformOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (omega == 0.0) return transform_at_zero(kernel, trig, opt);
  const double w = std::abs(omega);
  const double sign = (trig == Trig::Sin && omega < 0.0) ? -1.0 : 1.0;

  // first zero of the oscillator: cos at pi/(2w), sin at pi/w
  const double first_break = (trig == Trig::Cos ? 0.5 : 1.0) * kPi / w;
  const double half_period = kPi / w;

  QuadResult head = head_integral(kernel, w, trig, first_break, 0.35 * opt.tol, opt);

  auto f = [&kernel, w, trig](double t) {
    return kernel.evaluate(t) * trig_eval(trig, w * t);
  };

  // half-period terms of the alternating series past the first zero
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(opt.min_half_periods));
  double terms_err = 0.0;
  const double term_budget = 0.25 * opt.tol / 96.0;
  double t_end = first_break;

  double plain_tail_charge = std::numeric_limits<double>::infinity();
  bool plain_ready = false;

  auto tail_bound_at = [&](double T) {
    if (T < kernel.decrease_onset()) return std::numeric_limits<double>::infinity();
    return 4.0 * kernel.evaluate(T) / w;
  };

  int n_cap = opt.min_half_periods;
  while (true) {
    while (static_cast<int>(terms.size()) < n_cap) {
      const double a = t_end;
      const double b = a + half_period;
      auto r = integrate_adaptive(f, a, b, term_budget, 8);
      terms.push_back(r.value);
      terms_err += r.abs_error;
      t_end = b;
      // cheap exit for fast-decaying kernels: the remainder bound is
      // already below budget
      const double bound = tail_bound_at(t_end);
      if (terms.size() >= 2 && bound <= 0.3 * opt.tol) {
        plain_tail_charge = bound;
        plain_ready = true;
        break;
      }
    }
    if (plain_ready) break;
    auto accel = euler_accelerate(terms);
    const double bound = tail_bound_at(t_end);
    if (accel.abs_error <= 0.3 * opt.tol || accel.abs_error <= bound ||
        n_cap >= opt.max_half_periods) {
      // acceleration strategy: replace the partial sum by the accelerated
      // estimate of the full alternating series
      if (accel.abs_error <= bound) {
        CompensatedSum v;
        v.add(head.value);
        v.add(accel.value);
        return {sign * v.value(), head.abs_error + terms_err + accel.abs_error,
                t_end, accel.abs_error};
      }
      plain_tail_charge = bound;
      break;
    }
    n_cap = std::min(2 * n_cap, opt.max_half_periods);
  }

  // plain truncation: partial sum plus the remainder bound 4 K(T)/w
  CompensatedSum v;
  v.add(head.value);
  for (double term : terms) v.add(term);
  if (!std::isfinite(plain_tail_charge)) plain_tail_charge = tail_bound_at(t_end);
  return {sign * v.value(), head.abs_error + terms_err + plain_tail_charge, t_end,
          plain_tail_charge};
}

}  // namespace

TransformValue kcos(const MemoryKernel& kernel, double omega,
                    const TransformOptions& opt) {
  return fourier_transform(kernel, omega, Trig::Cos, opt);
}

TransformValue kcos(const MemoryKernel& kernel, double omega, double tol) {
  TransformOptions opt;
  opt.tol = tol;
  return kcos(kernel, omega, opt);
}

TransformValue ksin(const MemoryKernel& kernel, double omega,
                    const TransformOptions& opt) {
  return fourier_transform(kernel, omega, Trig::Sin, opt);
}

TransformValue ksin(const MemoryKernel& kernel, double omega, double tol) {
  TransformOptions opt;
  opt.tol = tol;
  return ksin(kernel, omega, opt);
}

std::vector<TransformGridRow> transform_grid(const MemoryKernel& kernel,
                                             std::span<const double> omegas,
                                             double tol, int threads) {
  for (std::size_t i = 0; i + 1 < omegas.size(); ++i)
    if (!(omegas[i] < omegas[i + 1]))
      throw std::invalid_argument("transform_grid: omegas must be sorted ascending");
  std::vector<TransformGridRow> rows(omegas.size());
  auto work = [&](std::size_t i) {
    rows[i].omega = omegas[i];
    rows[i].cos = kcos(kernel, omegas[i], tol);
    rows[i].sin = ksin(kernel, omegas[i], tol);
  };
  int n_threads = threads == 0
                      ? static_cast<int>(std::thread::hardware_concurrency())
                      : threads;
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(omegas.size())));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < omegas.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    std::size_t chunk = (omegas.size() + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(omegas.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

double tail_remainder_bound(const MemoryKernel& kernel, double T, double omega) {
  if (omega == 0.0) throw std::invalid_argument("tail bound needs omega != 0");
  if (T < kernel.decrease_onset())
    throw std::invalid_argument(
        "tail bound is only valid past the kernel's decrease onset");
  return 4.0 * kernel.evaluate(T) / std::abs(omega);
}

double frac_cos_integral(double alpha) {
  return std::tgamma(1.0 - alpha) * std::sin(alpha * kPi / 2.0);
}

double frac_sin_integral(double alpha) {
  return std::tgamma(1.0 - alpha) * std::cos(alpha * kPi / 2.0);
}

AbelianReport abelian_limits(const MemoryKernel& kernel, double tol) {
  const auto* crit = std::get_if<Critical>(&kernel.regime());
  if (!crit)
    throw std::invalid_argument("abelian_limits requires a Critical regime tag");

  AbelianReport rep;
  // ratio-4 geometric grid from 1e-2 down past 1e-6 (> 3 decades)
  for (double w = 1e-2; w > 0.9e-6; w *= 0.25) rep.omegas.push_back(w);
  std::vector<double> inv_log;
  for (double w : rep.omegas) {
    rep.ksin_values.push_back(ksin(kernel, w, tol).value);
    rep.kcos_over_log.push_back(kcos(kernel, w, tol).value / std::abs(std::log(w)));
    inv_log.push_back(1.0 / std::abs(std::log(w)));
  }

  auto sin_ex = aitken_extrapolate(rep.ksin_values);
  rep.limit_sin = sin_ex.limit;
  rep.limit_sin_error = sin_ex.abs_error;

  // K_cos/|log w| approaches its limit like 1/|log w|: extrapolate in that
  // variable instead of in w
  auto cos_ex = neville_to_zero(inv_log, rep.kcos_over_log, 2);
  rep.limit_cos_over_log = cos_ex.limit;
  rep.limit_cos_over_log_error = cos_ex.abs_error;

  std::vector<double> sin_dev;
  for (double v : rep.ksin_values) sin_dev.push_back(v - rep.limit_sin);
  rep.sin_rate_exponent = fit_loglog(rep.omegas, sin_dev).slope;

  double sup = 0.0;
  for (std::size_t i = 0; i < rep.omegas.size(); ++i) {
    const double L = std::abs(std::log(rep.omegas[i]));
    sup = std::max(sup, std::abs(rep.kcos_over_log[i] - rep.limit_cos_over_log) * L);
  }
  rep.cos_log_rate_coefficient = sup;
  return rep;
}

TauberianEstimate tauberian_recover(
    std::span<const std::pair<double, double>> kcos_samples) {
  if (kcos_samples.size() < 6)
    throw std::invalid_argument("tauberian_recover needs at least 6 samples");
  std::vector<double> x, y;
  double w_min = std::numeric_limits<double>::infinity(), w_max = 0.0;
  for (const auto& [w, v] : kcos_samples) {
    if (!(w > 0.0)) throw std::invalid_argument("samples need omega > 0");
    if (!(v > 0.0)) throw std::invalid_argument("samples need positive K_cos values");
    x.push_back(std::abs(std::log(w)));
    y.push_back(v);
    w_min = std::min(w_min, w);
    w_max = std::max(w_max, w);
  }
  if (w_max < 1e3 * w_min)
    throw std::invalid_argument("samples must span at least 3 decades of omega");
  // values must grow (weakly) as omega shrinks; allow roundoff slack
  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  double span = 0.0;
  for (double v : y) span = std::max(span, std::abs(v));
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    if (y[order[i + 1]] < y[order[i]] - 1e-9 * span)
      throw std::invalid_argument(
          "tauberian_recover: K_cos samples are not monotone in |log omega|");

  auto fit = fit_line(x, y);
  TauberianEstimate est;
  est.c1_hat = fit.slope;
  est.intercept = fit.intercept;
  est.residual_rms = fit.residual_rms;
  est.n_samples = kcos_samples.size();
  // a bounded K_cos has negligible slope against |log omega|
  double mean_abs = 0.0;
  for (double v : y) mean_abs += std::abs(v);
  mean_abs /= static_cast<double>(y.size());
  est.critical_like = std::abs(fit.slope) > 0.05 * std::max(mean_abs, 1e-300);
  return est;
}

SmallFrequencyRates small_frequency_rates(const MemoryKernel& kernel, double tol) {
  SmallFrequencyRates out;
  const RegimeTag& tag = kernel.regime();
  if (std::holds_alternative<Unclassified>(tag))
    throw std::invalid_argument("small_frequency_rates needs a classified kernel");

  if (const auto* d = std::get_if<Diffusive>(&tag)) {
    out.theoretical_exponent = std::min(d->beta0, 2.0);
    const double k0 = kcos(kernel, 0.0, std::min(tol, 1e-11)).value;
    // window where the deviation dominates quadrature noise yet stays "small w"
    for (double w = 3e-1; w > 0.9e-2; w *= 0.63) {
      out.omegas.push_back(w);
      out.deviations.push_back(
          std::abs(kcos(kernel, w, std::min(tol, 1e-11)).value - k0));
    }
    out.fitted_exponent = fit_loglog(out.omegas, out.deviations).slope;
  } else if (const auto* s = std::get_if<Subdiffusive>(&tag)) {
    out.theoretical_exponent = std::min(1.0 - s->alpha, s->alpha * s->beta_alpha);
    const double target = s->c_alpha * frac_cos_integral(s->alpha);
    for (double w = 1e-2; w > 0.9e-5; w *= 0.4) {
      out.omegas.push_back(w);
      const double v = kcos(kernel, w, tol).value;
      out.deviations.push_back(
          std::abs(std::pow(w, 1.0 - s->alpha) * v - target));
    }
    out.fitted_exponent = fit_loglog(out.omegas, out.deviations).slope;
  } else {
    const auto* c = std::get_if<Critical>(&tag);
    out.critical = true;
    double sup = 0.0;
    for (double w = 1e-2; w > 0.9e-6; w *= 0.25) {
      out.omegas.push_back(w);
      const double L = std::abs(std::log(w));
      const double dev = std::abs(kcos(kernel, w, tol).value / L - c->c1) * L;
      out.deviations.push_back(dev);
      sup = std::max(sup, dev);
    }
    out.sup_log_deviation = sup;
  }
  return out;
}

}  // namespace gle
