#include "gle/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "gle/fit.hpp"
#include "gle/quadrature.hpp"

namespace gle {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SpectralModel::SpectralModel(double m_, double beta_, MemoryKernel k)
    : m(m_), beta(beta_), kernel(std::move(k)) {
  if (!(m > 0.0)) throw std::invalid_argument("SpectralModel: m must be positive");
  if (!(beta > 0.0))
    throw std::invalid_argument("SpectralModel: beta must be positive");
}

SpectralValue rhat(const SpectralModel& model, double omega, double tol) {
  if (omega == 0.0)
    throw std::invalid_argument(
        "rhat is never evaluated at omega = 0; use rhat_near_zero for limits");
  const double w = std::abs(omega);
  const auto tc = kcos(model.kernel, w, tol);
  const auto ts = ksin(model.kernel, w, tol);
  const double C = tc.value;
  const double S = ts.value;
  if (!(C > 0.0))
    throw std::domain_error(
        "rhat: computed K_cos(omega) is not positive; the spectral density "
        "requires a positive cosine transform and the model has no "
        "stationary solution at this frequency");
  const double b = model.beta;
  const double drift = model.m * w - b * S;
  const double D = b * b * C * C + drift * drift;
  const double r = b * C / (kPi * D);
  // first-order sensitivities of the rational expression
  const double dr_dC = b * (drift * drift - b * b * C * C) / (kPi * D * D);
  const double dr_dS = 2.0 * b * b * C * drift / (kPi * D * D);
  const double err = std::abs(dr_dC) * tc.abs_error + std::abs(dr_dS) * ts.abs_error +
                     1e-16 * std::abs(r);
  return {omega, r, err};
}

NearZeroAsymptote rhat_near_zero(const SpectralModel& model, double tol) {
  const RegimeTag& tag = model.kernel.regime();
  if (std::holds_alternative<Unclassified>(tag))
    throw std::invalid_argument("rhat_near_zero needs a classified kernel");

  NearZeroAsymptote out;
  const double b = model.beta;

  if (const auto* d = std::get_if<Diffusive>(&tag)) {
    const double k0 = kcos(model.kernel, 0.0, std::min(tol, 1e-11)).value;
    out.limit = 1.0 / (kPi * b * k0);
    out.theoretical_exponent = std::min(d->beta0, 2.0);
    std::vector<double> dev;
    for (double w = 3e-1; w > 0.9e-2; w *= 0.63) {
      out.omegas.push_back(w);
      const double f = rhat(model, w, std::min(tol, 1e-11)).rhat;
      out.scaled_values.push_back(f);
      dev.push_back(std::abs(f - out.limit));
    }
    out.fitted_exponent = fit_loglog(out.omegas, dev).slope;
    out.verified = std::abs(out.scaled_values.back() - out.limit) <=
                   0.05 * std::abs(out.limit);
  } else if (const auto* s = std::get_if<Subdiffusive>(&tag)) {
    const double ic = frac_cos_integral(s->alpha);
    const double is = frac_sin_integral(s->alpha);
    out.limit = ic / (kPi * b * s->c_alpha * (ic * ic + is * is));
    out.theoretical_exponent = std::min(1.0 - s->alpha, s->alpha * s->beta_alpha);
    std::vector<double> dev;
    for (double w = 1e-2; w > 0.9e-5; w *= 0.4) {
      out.omegas.push_back(w);
      const double f =
          rhat(model, w, tol).rhat / std::pow(w, 1.0 - s->alpha);
      out.scaled_values.push_back(f);
      dev.push_back(std::abs(f - out.limit));
    }
    out.fitted_exponent = fit_loglog(out.omegas, dev).slope;
    out.verified = std::abs(out.scaled_values.back() - out.limit) <=
                   0.05 * std::abs(out.limit);
  } else {
    const auto* c = std::get_if<Critical>(&tag);
    out.critical = true;
    out.limit = 1.0 / (kPi * b * c->c1);
    double sup = 0.0;
    for (double w = 1e-3; w > 0.9e-6; w *= 0.25) {
      out.omegas.push_back(w);
      const double L = std::abs(std::log(w));
      const double f = L * rhat(model, w, tol).rhat;
      out.scaled_values.push_back(f);
      sup = std::max(sup, std::abs(f - out.limit) * L);
    }
    out.sup_log_deviation = sup;
    out.verified = std::abs(out.scaled_values.back() - out.limit) <=
                   0.10 * std::abs(out.limit);
  }
  return out;
}

IntegrabilityReport check_integrability(const SpectralModel& model, double tol,
                                        double omega_split) {
  IntegrabilityReport rep;
  rep.omega_split = omega_split;
  const double w_lo = 1e-9;
  const double point_tol = std::max(tol * 1e-3, 1e-12);

  auto f = [&](double w) { return rhat(model, w, point_tol).rhat; };

  // (0, w_lo]: rhat is bounded there by the proof bound 1/(pi beta K_cos);
  // charge the whole sliver as uncertainty
  const double head_bound =
      w_lo / (kPi * model.beta * kcos(model.kernel, w_lo, 1e-6).value);

  auto edges = geometric_edges(w_lo, omega_split, 1.6);
  auto main = integrate_adaptive(f, std::span<const double>(edges), tol, 512);

  // beyond Omega the density is dominated by c/w^2; measure c on approach
  double c_tail = 0.0;
  for (double w = 0.5 * omega_split; w <= omega_split; w += 0.125 * omega_split)
    c_tail = std::max(c_tail, f(w) * w * w);
  rep.tail_estimate = c_tail / omega_split;

  rep.total = 2.0 * (main.value + rep.tail_estimate);
  rep.abs_error = 2.0 * (main.abs_error + head_bound + rep.tail_estimate);
  rep.finite = std::isfinite(rep.total);
  return rep;
}

}  // namespace gle
