#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gle/spectral.hpp"

namespace gle {

/// Frequency discretization used by the spectral synthesis: cell edges
/// 0 = e_0 < e_1 < ... < e_M = omega_max with log-spaced cells below
/// omega_split and linear cells above; per-cell mass w_j = int_cell rhat and
/// a representative frequency per cell.
struct FrequencyGrid {
  std::vector<double> edges;
  std::vector<double> rep_omega;
  std::vector<double> weight;  // int_cell rhat
  double omega_max = 0.0;
  double tail_mass_estimate = 0.0;  // 2 int_{omega_max}^inf rhat, estimated
};

/// Seeded ensemble of positions X(t_k) synthesized from the harmonizable
/// representation. Paths start at exactly 0; regenerating with the same seed
/// and descriptor is bit-for-bit identical. Per-path RNG streams are derived
/// from (seed, path index) so paths may be generated concurrently with a
/// scheduling-independent result.
class PathEnsemble {
 public:
  PathEnsemble(std::vector<double> times, std::size_t n_paths, std::uint64_t seed,
               FrequencyGrid grid);

  double x(std::size_t path, std::size_t k) const {
    return data_[path * times_.size() + k];
  }
  double& x(std::size_t path, std::size_t k) {
    return data_[path * times_.size() + k];
  }
  std::size_t n_paths() const { return n_paths_; }
  const std::vector<double>& times() const { return times_; }
  std::uint64_t seed() const { return seed_; }
  const FrequencyGrid& grid() const { return grid_; }
  std::span<const double> raw() const { return data_; }

 private:
  std::vector<double> times_;
  std::size_t n_paths_;
  std::uint64_t seed_;
  FrequencyGrid grid_;
  std::vector<double> data_;  // row-major: path * (N+1) + k
};

struct SimulateOptions {
  std::size_t modes = 4096;     // >= 2^10 recommended
  double omega_max = 64.0;
  double omega_split = 1.0;     // log cells below, linear above
  double bias_budget = 1e-3;    // max spectral tail mass fraction beyond omega_max
  double cell_tol = 1e-8;       // rhat tolerance for cell masses
  int threads = 1;
};

/// Real-valued spectral synthesis: X(t) = sum_j sqrt(2 w_j) / omega_j *
/// [ (1 - cos(omega_j t)) xi_j + sin(omega_j t) eta_j ] with independent
/// standard Gaussian pairs per cell, realizing the covariance
///   E X(t)X(s) = 2 int_0^inf [(1-cos t w)(1-cos s w) + sin t w sin s w]
///                / w^2 * rhat(w) dw,
/// whose diagonal is the MSD integral. t_grid must start at 0 and be sorted.
PathEnsemble simulate(const SpectralModel& model, std::span<const double> t_grid,
                      std::uint64_t seed, std::size_t n_paths,
                      const SimulateOptions& opt = {});

struct EnsembleMsd {
  std::vector<double> times;
  std::vector<double> values;   // mean of X(t)^2 across paths
  std::vector<double> stderrs;  // sample std of X(t)^2 / sqrt(P)
};

EnsembleMsd empirical_msd(const PathEnsemble& ensemble);

/// Time-averaged MSD at lags that are integer multiples of the (uniform)
/// grid step: TAMSD_p(k h) = 1/(N-k+1) sum_i (X_{i+k} - X_i)^2.
struct TamsdCurve {
  std::vector<double> lags;
  std::vector<std::vector<double>> per_path;  // [lag][path]
  std::vector<double> mean;
  std::vector<double> stderrs;
};

TamsdCurve tamsd(const PathEnsemble& ensemble, std::span<const double> lags);

/// Compares sample variances of X(s + delta) - X(s) across shifts s at a
/// fixed lag delta; stationary increments make these equal up to noise.
struct StationarityReport {
  double delta = 0.0;
  std::vector<double> shifts;
  std::vector<double> variances;
  double max_pairwise_z = 0.0;
};

StationarityReport stationarity_check(const PathEnsemble& ensemble, double delta,
                                      std::span<const double> shifts);

}  // namespace gle
