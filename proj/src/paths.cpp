#include "gle/paths.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "gle/quadrature.hpp"

namespace gle {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256++, seeded through SplitMix64. One engine per path, derived from
// (master seed, path index): the documented stream-per-path scheme.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : state_) word = sm.next();
  }
  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }
  double uniform01() {  // [0, 1), 53-bit
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  // Box-Muller with a pinned algorithm so reruns are bit-exact everywhere
  std::pair<double, double> gauss_pair() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t path_stream_seed(std::uint64_t master, std::size_t path) {
  return master + kGolden * (static_cast<std::uint64_t>(path) + 1);
}

FrequencyGrid build_grid(const SpectralModel& model, double horizon,
                         const SimulateOptions& opt) {
  if (opt.modes < 16) throw std::invalid_argument("simulate: too few modes");
  if (!(opt.omega_max > opt.omega_split))
    throw std::invalid_argument("simulate: omega_max must exceed omega_split");
  FrequencyGrid grid;
  grid.omega_max = opt.omega_max;

  // lowest cell (0, e1]: e1 small enough that e1 * horizon stays well inside
  // the first oscillation, so one representative frequency per cell is unbiased
  const double e1 = std::min(1e-4, 0.05 / std::max(horizon, 1.0));
  const std::size_t n_log = opt.modes / 2 - 1;
  const std::size_t n_lin = opt.modes - 1 - n_log;

  grid.edges.push_back(0.0);
  grid.edges.push_back(e1);
  const double log_ratio = std::pow(opt.omega_split / e1,
                                    1.0 / static_cast<double>(n_log));
  double e = e1;
  for (std::size_t j = 1; j < n_log; ++j) {
    e *= log_ratio;
    grid.edges.push_back(e);
  }
  grid.edges.push_back(opt.omega_split);
  const double lin_step =
      (opt.omega_max - opt.omega_split) / static_cast<double>(n_lin);
  for (std::size_t j = 1; j < n_lin; ++j)
    grid.edges.push_back(opt.omega_split + lin_step * static_cast<double>(j));
  grid.edges.push_back(opt.omega_max);

  double total = 0.0;
  for (std::size_t j = 0; j + 1 < grid.edges.size(); ++j) {
    const double a = grid.edges[j];
    const double b = grid.edges[j + 1];
    if (!(b > a)) throw std::invalid_argument("simulate: degenerate frequency cell");
    const double rep = (j == 0) ? 0.5 * b : (a < opt.omega_split ? std::sqrt(a * b)
                                                                 : 0.5 * (a + b));
    auto mass = gk15([&](double w) { return rhat(model, w, opt.cell_tol).rhat; },
                     a, b);
    if (!std::isfinite(mass.value) || mass.value < 0.0)
      throw std::invalid_argument("simulate: cell mass is not finite/nonnegative");
    grid.rep_omega.push_back(rep);
    grid.weight.push_back(mass.value);
    total += mass.value;
  }

  // spectral mass beyond omega_max, from the w^-2 tail of rhat
  const auto r_edge = rhat(model, opt.omega_max, opt.cell_tol);
  grid.tail_mass_estimate = 2.0 * r_edge.rhat * opt.omega_max;
  if (grid.tail_mass_estimate > opt.bias_budget * 2.0 * total)
    throw std::invalid_argument(
        "simulate: spectral tail mass beyond omega_max exceeds the declared "
        "bias budget; raise omega_max or the budget");
  return grid;
}

}  // namespace

PathEnsemble::PathEnsemble(std::vector<double> times, std::size_t n_paths,
                           std::uint64_t seed, FrequencyGrid grid)
    : times_(std::move(times)),
      n_paths_(n_paths),
      seed_(seed),
      grid_(std::move(grid)),
      data_(n_paths * times_.size(), 0.0) {}

PathEnsemble simulate(const SpectralModel& model, std::span<const double> t_grid,
                      std::uint64_t seed, std::size_t n_paths,
                      const SimulateOptions& opt) {
  if (t_grid.empty()) throw std::invalid_argument("simulate: empty time grid");
  if (t_grid[0] != 0.0)
    throw std::invalid_argument("simulate: time grid must start at t = 0");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i + 1]))
      throw std::invalid_argument("simulate: time grid must be strictly increasing");
  if (n_paths == 0) throw std::invalid_argument("simulate: need at least one path");

  FrequencyGrid grid = build_grid(model, t_grid.back(), opt);
  PathEnsemble ens(std::vector<double>(t_grid.begin(), t_grid.end()), n_paths,
                   seed, std::move(grid));

  const auto& g = ens.grid();
  const std::size_t n_cells = g.weight.size();
  const std::size_t n_times = t_grid.size();

  // uniform grids get the rotation recurrence (one sin/cos per cell)
  bool uniform = n_times > 2;
  const double h = n_times > 1 ? t_grid[1] - t_grid[0] : 0.0;
  for (std::size_t i = 0; i + 1 < n_times; ++i)
    if (std::abs((t_grid[i + 1] - t_grid[i]) - h) > 1e-12 * std::max(h, 1.0))
      uniform = false;

  std::vector<double> amp(n_cells);
  for (std::size_t j = 0; j < n_cells; ++j)
    amp[j] = std::sqrt(2.0 * g.weight[j]) / g.rep_omega[j];

  auto synth_path = [&](std::size_t p) {
    Xoshiro256pp rng(path_stream_seed(seed, p));
    // draws are ordered by cell index regardless of evaluation strategy
    for (std::size_t j = 0; j < n_cells; ++j) {
      const auto [xi, eta] = rng.gauss_pair();
      const double a = amp[j];
      const double w = g.rep_omega[j];
      if (a == 0.0) continue;
      if (uniform) {
        const double ch = std::cos(w * h);
        const double sh = std::sin(w * h);
        double c = 1.0, s = 0.0;  // cos/sin of w * t_0 with t_0 = 0
        for (std::size_t i = 1; i < n_times; ++i) {
          const double cn = c * ch - s * sh;
          const double sn = s * ch + c * sh;
          c = cn;
          s = sn;
          ens.x(p, i) += a * ((1.0 - c) * xi + s * eta);
        }
      } else {
        for (std::size_t i = 1; i < n_times; ++i) {
          const double th = w * t_grid[i];
          ens.x(p, i) += a * ((1.0 - std::cos(th)) * xi + std::sin(th) * eta);
        }
      }
    }
  };

  int n_threads = opt.threads == 0
                      ? static_cast<int>(std::thread::hardware_concurrency())
                      : opt.threads;
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(n_paths)));
  if (n_threads <= 1) {
    for (std::size_t p = 0; p < n_paths; ++p) synth_path(p);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_paths + n_threads - 1) / n_threads;
    for (int th = 0; th < n_threads; ++th) {
      const std::size_t lo = th * chunk;
      const std::size_t hi = std::min(n_paths, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::size_t p = lo; p < hi; ++p) synth_path(p);
      });
    }
    for (auto& t : pool) t.join();
  }
  return ens;
}

EnsembleMsd empirical_msd(const PathEnsemble& ens) {
  if (ens.n_paths() < 2)
    throw std::invalid_argument("empirical_msd needs at least 2 paths");
  const std::size_t P = ens.n_paths();
  const std::size_t N = ens.times().size();
  EnsembleMsd out;
  out.times = ens.times();
  out.values.resize(N);
  out.stderrs.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    double mean = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      const double v = ens.x(p, k);
      mean += v * v;
    }
    mean /= static_cast<double>(P);
    double var = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      const double v = ens.x(p, k);
      const double d = v * v - mean;
      var += d * d;
    }
    var /= static_cast<double>(P - 1);
    out.values[k] = mean;
    out.stderrs[k] = std::sqrt(var / static_cast<double>(P));
  }
  return out;
}

namespace {

double uniform_step(const PathEnsemble& ens) {
  const auto& t = ens.times();
  if (t.size() < 2)
    throw std::invalid_argument("need at least two time points");
  const double h = t[1] - t[0];
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (std::abs((t[i + 1] - t[i]) - h) > 1e-9 * std::max(h, 1.0))
      throw std::invalid_argument("operation requires a uniform time grid");
  return h;
}

}  // namespace

TamsdCurve tamsd(const PathEnsemble& ens, std::span<const double> lags) {
  const double h = uniform_step(ens);
  const std::size_t N = ens.times().size() - 1;  // steps
  const double horizon = ens.times().back();
  TamsdCurve out;
  for (double lag : lags) {
    const double kf = lag / h;
    const auto k = static_cast<std::size_t>(std::llround(kf));
    if (k < 1 || std::abs(k * h - lag) > 1e-9 * std::max(h, lag))
      throw std::invalid_argument(
          "tamsd: every lag must be a positive integer multiple of the grid step");
    if (!(lag < horizon))
      throw std::invalid_argument("tamsd: lags must be below the observation horizon");
    std::vector<double> per_path(ens.n_paths());
    for (std::size_t p = 0; p < ens.n_paths(); ++p) {
      double acc = 0.0;
      for (std::size_t i = 0; i + k <= N; ++i) {
        const double d = ens.x(p, i + k) - ens.x(p, i);
        acc += d * d;
      }
      per_path[p] = acc / static_cast<double>(N - k + 1);
    }
    double mean = 0.0;
    for (double v : per_path) mean += v;
    mean /= static_cast<double>(per_path.size());
    double var = 0.0;
    for (double v : per_path) var += (v - mean) * (v - mean);
    var = per_path.size() > 1 ? var / static_cast<double>(per_path.size() - 1) : 0.0;
    out.lags.push_back(lag);
    out.per_path.push_back(std::move(per_path));
    out.mean.push_back(mean);
    out.stderrs.push_back(std::sqrt(var / static_cast<double>(ens.n_paths())));
  }
  return out;
}

StationarityReport stationarity_check(const PathEnsemble& ens, double delta,
                                      std::span<const double> shifts) {
  const double h = uniform_step(ens);
  const std::size_t N = ens.times().size() - 1;
  const auto kd = static_cast<std::size_t>(std::llround(delta / h));
  if (kd < 1 || std::abs(kd * h - delta) > 1e-9 * std::max(h, delta))
    throw std::invalid_argument("stationarity_check: delta must be a multiple of the step");

  StationarityReport rep;
  rep.delta = delta;
  std::vector<double> se;
  for (double s : shifts) {
    const auto is = static_cast<std::size_t>(std::llround(s / h));
    if (std::abs(is * h - s) > 1e-9 * std::max(h, std::max(s, 1.0)) || is + kd > N)
      throw std::invalid_argument(
          "stationarity_check: shift must be a grid multiple with s + delta "
          "inside the horizon");
    double mean = 0.0;
    std::vector<double> inc(ens.n_paths());
    for (std::size_t p = 0; p < ens.n_paths(); ++p) {
      inc[p] = ens.x(p, is + kd) - ens.x(p, is);
      mean += inc[p];
    }
    mean /= static_cast<double>(ens.n_paths());
    double var = 0.0;
    for (double v : inc) var += (v - mean) * (v - mean);
    var /= static_cast<double>(ens.n_paths() - 1);
    rep.shifts.push_back(s);
    rep.variances.push_back(var);
    se.push_back(var * std::sqrt(2.0 / static_cast<double>(ens.n_paths() - 1)));
  }
  double zmax = 0.0;
  for (std::size_t i = 0; i < rep.variances.size(); ++i)
    for (std::size_t j = i + 1; j < rep.variances.size(); ++j) {
      const double denom = std::sqrt(se[i] * se[i] + se[j] * se[j]);
      const double diff = std::abs(rep.variances[i] - rep.variances[j]);
      double z;
      if (denom == 0.0)
        z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      else
        z = diff / denom;
      zmax = std::max(zmax, z);
    }
  rep.max_pairwise_z = zmax;
  return rep;
}

}  // namespace gle
