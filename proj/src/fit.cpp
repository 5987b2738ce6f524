#include "gle/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gle {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line needs >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate x values");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.sse += r * r;
  }
  f.residual_rms = std::sqrt(f.sse / n);
  return f;
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || y[i] == 0.0 || !std::isfinite(y[i])) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  return fit_line(lx, ly);
}

Extrapolation aitken_extrapolate(std::span<const double> seq) {
  std::vector<double> s(seq.begin(), seq.end());
  if (s.empty()) throw std::invalid_argument("aitken_extrapolate: empty sequence");
  double last = s.back();
  double err = s.size() > 1 ? std::abs(s[s.size() - 1] - s[s.size() - 2])
                            : std::abs(last);
  while (s.size() >= 3) {
    std::vector<double> next;
    next.reserve(s.size() - 2);
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
      const double d1 = s[i + 1] - s[i];
      const double d2 = s[i + 2] - s[i + 1];
      const double dd = d2 - d1;
      if (dd == 0.0)
        next.push_back(s[i + 2]);
      else
        next.push_back(s[i + 2] - d2 * d2 / dd);
    }
    const double cand_err = std::abs(next.back() - last);
    last = next.back();
    err = cand_err;
    s = std::move(next);
    if (s.size() < 3) break;
  }
  return {last, err + 1e-15 * std::abs(last)};
}

Extrapolation neville_to_zero(std::span<const double> x,
                              std::span<const double> f, int order) {
  if (x.size() != f.size() || x.empty())
    throw std::invalid_argument("neville_to_zero: bad inputs");
  const std::size_t use = std::min<std::size_t>(x.size(), order + 1);
  // take the `use` points with the smallest |x|
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(x[a]) < std::abs(x[b]);
  });
  std::vector<double> xs(use), p(use);
  for (std::size_t i = 0; i < use; ++i) {
    xs[i] = x[idx[i]];
    p[i] = f[idx[i]];
  }
  double prev = p[0];
  for (std::size_t level = 1; level < use; ++level) {
    prev = p[0];
    for (std::size_t i = 0; i + level < use; ++i) {
      // evaluate at x = 0
      p[i] = (xs[i + level] * p[i] - xs[i] * p[i + 1]) / (xs[i + level] - xs[i]);
    }
  }
  return {p[0], std::abs(p[0] - prev) + 1e-15 * std::abs(p[0])};
}

}  // namespace gle
