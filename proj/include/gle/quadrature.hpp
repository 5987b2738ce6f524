#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gle {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Kahan-Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

// Gauss-Kronrod 7-15 pair, positive half of the symmetric rule (QUADPACK dqk15).
inline constexpr std::array<double, 8> kGk15Nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr std::array<double, 8> kGk15Weights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// 7-point Gauss weights, matching kGk15Nodes indices 1, 3, 5, 7.
inline constexpr std::array<double, 4> kG7Weights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

}  // namespace detail

/// One Gauss-Kronrod 7-15 panel on [a, b]. Error is the scaled |K15 - G7|
/// difference in QUADPACK style.
template <typename F>
QuadResult gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, 15> fv{};
  double resk = 0.0, resg = 0.0, resabs = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const double x = detail::kGk15Nodes[i] * h;
    if (i == 7) {
      fv[7] = f(c);
      resk += detail::kGk15Weights[i] * fv[7];
      resg += detail::kG7Weights[3] * fv[7];
      resabs += detail::kGk15Weights[i] * std::abs(fv[7]);
      continue;
    }
    fv[i] = f(c - x);
    fv[14 - i] = f(c + x);
    resk += detail::kGk15Weights[i] * (fv[i] + fv[14 - i]);
    resabs += detail::kGk15Weights[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    if (i % 2 == 1) resg += detail::kG7Weights[i / 2] * (fv[i] + fv[14 - i]);
  }
  // QUADPACK-style estimate: |K15 - G7| sharpened against the variation
  // integral resasc = int |f - mean|, not the magnitude integral
  const double reskh = resk * 0.5;
  double resasc = detail::kGk15Weights[7] * std::abs(fv[7] - reskh);
  for (std::size_t i = 0; i < 7; ++i)
    resasc += detail::kGk15Weights[i] *
              (std::abs(fv[i] - reskh) + std::abs(fv[14 - i] - reskh));
  resasc *= std::abs(h);
  const double value = resk * h;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) {
    const double r = 200.0 * err / resasc;
    if (r < 1.0) err = resasc * std::pow(r, 1.5);
  }
  constexpr double eps = 2.220446049250313e-16;
  err = std::max(err, 50.0 * eps * resabs * std::abs(h));
  return {value, err};
}

/// Globally adaptive bisection over an initial panel list; refines the worst
/// panel until the summed error estimate is below abs_tol or the panel cap
/// is hit. The returned abs_error is honest either way.
template <typename F>
QuadResult integrate_adaptive(F&& f, std::span<const double> edges,
                              double abs_tol, int max_panels = 256) {
  struct Panel {
    double a, b, value, err;
  };
  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(max_panels));
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto r = gk15(f, edges[i], edges[i + 1]);
    panels.push_back({edges[i], edges[i + 1], r.value, r.abs_error});
  }
  auto total_err = [&] {
    double e = 0.0;
    for (const auto& p : panels) e += p.err;
    return e;
  };
  while (total_err() > abs_tol &&
         panels.size() < static_cast<std::size_t>(max_panels)) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) break;  // interval exhausted
    auto left = gk15(f, p.a, mid);
    auto right = gk15(f, mid, p.b);
    panels[worst] = {p.a, mid, left.value, left.abs_error};
    panels.push_back({mid, p.b, right.value, right.abs_error});
  }
  // fixed summation order: by left endpoint
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  CompensatedSum v;
  double e = 0.0;
  for (const auto& p : panels) {
    v.add(p.value);
    e += p.err;
  }
  return {v.value(), e};
}

template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                              int max_panels = 256) {
  const std::array<double, 2> edges{a, b};
  return integrate_adaptive(std::forward<F>(f), std::span<const double>(edges),
                            abs_tol, max_panels);
}

/// Repeated-averaging (Euler) acceleration of a series whose terms
/// eventually alternate in sign. `terms` carry their signs. Returns the
/// estimated full sum with a bracketing-width error estimate; exact for
/// series whose term magnitudes are totally monotone.
QuadResult euler_accelerate(std::span<const double> terms);

/// Geometric panel edges a, a*ratio, ..., capped at b (b always included).
std::vector<double> geometric_edges(double a, double b, double ratio);

}  // namespace gle
