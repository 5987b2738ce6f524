#include "gle/quadrature.hpp"

namespace gle {

QuadResult euler_accelerate(std::span<const double> terms) {
  if (terms.empty()) return {0.0, 0.0};
  std::vector<double> row(terms.size());
  double s = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    s += terms[i];
    row[i] = s;
  }
  auto bracket = [&row] {
    return std::abs(row[row.size() - 1] - row[row.size() - 2]);
  };
  double best_value = row.back();
  double best_err = row.size() > 1 ? bracket() : std::abs(terms[0]);
  while (row.size() > 1) {
    // for alternating partial sums the limit lies inside the last pair, so
    // the averaged endpoint carries half the pre-averaging bracket
    double cand_err = 0.5 * bracket();
    for (std::size_t i = 0; i + 1 < row.size(); ++i)
      row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
    if (row.size() > 1) cand_err = std::min(cand_err, bracket());
    if (cand_err < best_err) {
      best_err = cand_err;
      best_value = row.back();
    }
  }
  // the bracketing width bounds the remainder for totally monotone terms;
  // the factor covers mild departures from that model, the floor covers
  // summation roundoff
  return {best_value, 4.0 * best_err + 4e-16 * std::abs(best_value)};
}

std::vector<double> geometric_edges(double a, double b, double ratio) {
  std::vector<double> edges{a};
  double x = a;
  while (x * ratio < b) {
    x *= ratio;
    edges.push_back(x);
  }
  if (edges.back() < b) edges.push_back(b);
  return edges;
}

}  // namespace gle
