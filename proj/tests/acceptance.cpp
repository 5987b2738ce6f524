// Acceptance suite: one timed pass/fail line per criterion, nonzero exit on
// any failure. Tolerances are pinned in code; nothing is calibrated at run
// time.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gle/kernels.hpp"
#include "gle/msd.hpp"
#include "gle/paths.hpp"
#include "gle/spectral.hpp"
#include "gle/transforms.hpp"
#include "support/oracles.hpp"

using namespace gle;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  g_notes.emplace_back(buf);
}

void criterion(int id, const char* title, const std::function<bool()>& body) {
  g_notes.clear();
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception& e) {
    note("exception: %s", e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("C%-2d %-4s (%6.2fs) %s", id, ok ? "PASS" : "FAIL", secs, title);
  for (const auto& n : g_notes) std::printf("  [%s]", n.c_str());
  std::printf("\n");
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

bool c1_closed_form_transforms() {
  auto k = make_exponential(1.0);
  double worst = 0.0;
  for (double w : log_spaced(1e-3, 1e3, 50)) {
    const auto c = kcos(k, w, 1e-10);
    const auto s = ksin(k, w, 1e-10);
    worst = std::max(worst, std::abs(c.value - 1.0 / (1.0 + w * w)));
    worst = std::max(worst, std::abs(s.value - w / (1.0 + w * w)));
  }
  note("max |computed - closed| = %.2e (need <= 1e-8)", worst);
  return worst <= 1e-8;
}

bool c2_abelian_limits() {
  auto k = make_power_law(1.0);
  const auto sin_small = ksin(k, 1e-3, 1e-9);
  auto rep = abelian_limits(k, 1e-9);
  const double target = M_PI / 2;
  const double raw_rel = std::abs(sin_small.value - target) / target;
  const double ext_rel = std::abs(rep.limit_sin - target) / target;
  const double cos_rel = std::abs(rep.limit_cos_over_log - 1.0);
  note("K_sin(1e-3) off by %.3f%% (<=2%%)", 100 * raw_rel);
  note("extrapolated K_sin limit off by %.4f%% (<=1%%)", 100 * ext_rel);
  note("K_cos/|log| limit off by %.3f%% (<=5%%)", 100 * cos_rel);
  return raw_rel <= 0.02 && ext_rel <= 0.01 && cos_rel <= 0.05;
}

bool c3_tauberian_recovery() {
  auto k = make_power_law(1.0);
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i <= 11; ++i) {
    const double w = 1e-3 * std::pow(10.0, -3.0 * i / 11.0);
    samples.emplace_back(w, kcos(k, w, 1e-9).value);
  }
  auto est = tauberian_recover(samples);
  note("C1_hat = %.5f (need within 5%% of 1)", est.c1_hat);
  return std::abs(est.c1_hat - 1.0) <= 0.05 && est.critical_like;
}

bool c4_tail_bound_soundness() {
  std::mt19937_64 rng(20240809);
  std::uniform_real_distribution<double> logT(0.0, 3.0), logw(-2.0, 2.0);
  std::uniform_int_distribution<int> pick(0, 3);
  const MemoryKernel kernels[] = {make_exponential(1.0), make_power_law(1.0),
                                  make_power_law(0.5), make_pure_power(0.5)};
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const auto& k = kernels[pick(rng)];
    const double T = std::pow(10.0, logT(rng));
    const double w = std::pow(10.0, logw(rng));
    const double bound = tail_remainder_bound(k, T, w);
    const auto ref_c =
        oracle::fourier_cos([&k](double t) { return k.evaluate(t); }, w, T);
    const auto ref_s =
        oracle::fourier_sin([&k](double t) { return k.evaluate(t); }, w, T);
    if (std::abs(ref_c.value) > bound + 1e-9 ||
        std::abs(ref_s.value) > bound + 1e-9) {
      note("violated at kernel=%s T=%.3g w=%.3g", k.name().c_str(), T, w);
      return false;
    }
    ++checked;
  }
  note("%d randomized triples, reference tails all within 4K(T)/|w|", checked);
  return true;
}

bool c5_diffusive_constant_and_rate() {
  SpectralModel model(1.0, 1.0, make_exponential(1.0));
  auto p = msd(model, 1e3, 1e-8);
  const double ratio = p.value / 1e3;
  note("MSD(1e3)/1e3 = %.6f (within 1%% of 2)", ratio);
  if (std::abs(ratio - 2.0) > 0.02) return false;

  auto curve = msd_curve(model, log_spaced(10.0, 1e4, 25), 1e-9, 2);
  auto fit = deviation_fit(curve, asymptotic_constant(model), 0.2);
  note("deviation exponent %.2f on %zu usable points (need >= 0.8)",
       fit.fitted_exponent, fit.points_used);
  return fit.verdict == DeviationFit::Verdict::Pass && fit.fitted_exponent >= 0.8;
}

bool c6_subdiffusive_constant() {
  SpectralModel model(1.0, 1.0, make_power_law(0.5));
  auto p = msd(model, 1e4, 1e-6);
  const double ratio = p.value / 1e2;
  const double target = 4.0 / M_PI;
  note("MSD(1e4)/1e2 = %.5f vs 4/pi = %.5f (%.2f%%, need <=3%%)", ratio, target,
       100 * std::abs(ratio - target) / target);
  if (std::abs(ratio - target) > 0.03 * target) return false;

  auto curve = msd_curve(model, log_spaced(1e2, 1e6, 13), 1e-6, 2);
  auto fit = deviation_fit(curve, asymptotic_constant(model), 0.1);
  note("deviation exponent %.3f (need >= 0.15)", fit.fitted_exponent);
  return fit.verdict == DeviationFit::Verdict::Pass && fit.fitted_exponent >= 0.15;
}

bool c7_critical_law() {
  SpectralModel model(1.0, 1.0, make_power_law(1.0));
  const double ts[] = {1e3, 1e4, 1e5, 1e6, 1e7};
  double qs[5];
  double ratio_1e6 = 0.0;
  for (int i = 0; i < 5; ++i) {
    auto p = msd(model, ts[i], 1e-4);
    const double ratio = p.value * std::log(ts[i]) / ts[i];
    qs[i] = std::abs(ratio - 2.0) * std::log(ts[i]);
    if (ts[i] == 1e6) ratio_1e6 = ratio;
  }
  note("ratio(1e6) = %.4f (within 15%% of 2)", ratio_1e6);
  note("q = {%.2f, %.2f, %.2f, %.2f, %.2f} (bounded, no growth)", qs[0], qs[1],
       qs[2], qs[3], qs[4]);
  if (std::abs(ratio_1e6 - 2.0) > 0.30) return false;
  double q_early = std::max(qs[0], qs[1]);
  double q_late = std::max(qs[3], qs[4]);
  const bool bounded = q_late <= std::max(1.5 * q_early, q_early + 0.5);
  for (double q : qs)
    if (!std::isfinite(q) || q > 20.0) return false;
  return bounded;
}

bool c8_spectral_identity() {
  SpectralModel model(1.0, 1.0, make_exponential(1.0));
  double worst = 0.0;
  for (double w : log_spaced(1e-3, 1e3, 60)) {
    auto r = rhat(model, w, 1e-9);
    const double exact = (1.0 + w * w) / (M_PI * (1.0 + std::pow(w, 6)));
    worst = std::max(worst, std::abs(r.rhat - exact));
    if (r.rhat < 0.0) return false;
    if (rhat(model, -w, 1e-9).rhat != r.rhat) return false;
  }
  note("max |rhat - closed| = %.2e (need <= 1e-6)", worst);
  return worst <= 1e-6;
}

bool c9_monte_carlo_consistency() {
  SpectralModel model(1.0, 1.0, make_exponential(1.0));
  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[i] = i * 1.0;
  SimulateOptions opt;
  opt.modes = 4096;
  opt.omega_max = 64.0;
  opt.threads = 2;
  auto ens = simulate(model, grid, 424242, 1000, opt);

  // determinism, bit-exact
  auto rerun = simulate(model, grid, 424242, 1000, opt);
  if (std::memcmp(ens.raw().data(), rerun.raw().data(),
                  ens.raw().size() * sizeof(double)) != 0) {
    note("seed determinism violated");
    return false;
  }

  auto emp = empirical_msd(ens);
  int probes = 0;
  for (std::size_t k : {10u, 25u, 50u, 75u, 100u}) {
    auto q = msd(model, grid[k], 1e-6);
    const double gap = std::abs(emp.values[k] - q.value);
    if (gap > 3.0 * emp.stderrs[k] + q.abs_error) {
      note("MSD probe at t=%.0f off by %.2f SE", grid[k],
           gap / emp.stderrs[k]);
      return false;
    }
    ++probes;
  }
  const double lags[] = {5.0, 10.0, 20.0};
  auto tc = tamsd(ens, lags);
  for (int i = 0; i < 3; ++i) {
    auto q = msd(model, tc.lags[i], 1e-6);
    const double gap = std::abs(tc.mean[i] - q.value);
    if (gap > 3.0 * tc.stderrs[i] + q.abs_error) {
      note("TAMSD at lag %.0f off by %.2f SE", tc.lags[i], gap / tc.stderrs[i]);
      return false;
    }
  }
  note("%d MSD probes + 3 TAMSD lags within 3 SE; reruns bit-exact", probes);
  return true;
}

bool c10_cross_regime_classification() {
  SpectralModel diff(1.0, 1.0, make_exponential(1.0));
  auto cd = classify_from_msd(msd_curve(diff, log_spaced(10.0, 1e4, 11), 1e-7, 2));
  note("diffusive alpha_hat = %.4f, log flag %d", cd.alpha_hat,
       cd.log_correction ? 1 : 0);
  if (std::abs(cd.alpha_hat - 1.0) > 0.05 || cd.log_correction) return false;

  SpectralModel sub(1.0, 1.0, make_power_law(0.5));
  auto cs = classify_from_msd(msd_curve(sub, log_spaced(1e2, 1e6, 11), 1e-6, 2));
  note("subdiffusive alpha_hat = %.4f, log flag %d", cs.alpha_hat,
       cs.log_correction ? 1 : 0);
  if (std::abs(cs.alpha_hat - 0.5) > 0.05 || cs.log_correction) return false;

  SpectralModel crit(1.0, 1.0, make_power_law(1.0));
  auto cc = classify_from_msd(msd_curve(crit, log_spaced(1e3, 1e7, 11), 1e-4, 2));
  note("critical alpha_hat = %.4f, log flag %d", cc.alpha_hat,
       cc.log_correction ? 1 : 0);
  return cc.log_correction;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion(1, "closed-form transform fidelity (exponential kernel)",
            c1_closed_form_transforms);
  criterion(2, "abelian limits of the critical kernel", c2_abelian_limits);
  criterion(3, "tauberian recovery of C1", c3_tauberian_recovery);
  criterion(4, "tail remainder bound soundness", c4_tail_bound_soundness);
  criterion(5, "diffusive constant and deviation rate", c5_diffusive_constant_and_rate);
  criterion(6, "subdiffusive constant 4/pi", c6_subdiffusive_constant);
  criterion(7, "critical t/log t law", c7_critical_law);
  criterion(8, "spectral density identity", c8_spectral_identity);
  criterion(9, "monte carlo consistency", c9_monte_carlo_consistency);
  criterion(10, "cross-regime classification", c10_cross_regime_classification);
  if (g_failures) std::printf("%d criterion(s) FAILED\n", g_failures);
  else std::printf("all criteria passed\n");
  return g_failures == 0 ? 0 : 1;
}
