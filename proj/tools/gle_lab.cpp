// gle-lab: command-line front end for the GLE memory-kernel laboratory.
// Loads a key=value config, runs a pipeline stage, writes CSV/JSON artifacts.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gle/assumptions.hpp"
#include "gle/io.hpp"
#include "gle/kernels.hpp"
#include "gle/msd.hpp"
#include "gle/paths.hpp"
#include "gle/spectral.hpp"
#include "gle/transforms.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitAssumption = 3;

struct ToleranceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  gle::RunConfig cfg;
  fs::path out_dir;
  int threads = 1;
  std::string metadata;
};

std::string metadata_line(const Context& ctx) {
  return std::string("glelab ") + kVersion + " config=" + ctx.cfg.hash();
}

json json_header(const Context& ctx) {
  json j;
  j["schema_version"] = 1;
  j["tool_version"] = kVersion;
  j["config_hash"] = ctx.cfg.hash();
  return j;
}

void write_json(const Context& ctx, const std::string& name, const json& j) {
  std::ofstream out(ctx.out_dir / name, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + name);
  out << j.dump(2) << "\n";
}

gle::SpectralModel model_from(const Context& ctx) {
  return gle::SpectralModel(ctx.cfg.get_double("model.m", 1.0),
                            ctx.cfg.get_double("model.beta", 1.0),
                            gle::kernel_from_config(ctx.cfg));
}

std::vector<double> stage_log_grid(const Context& ctx, const std::string& stage,
                                   double lo_def, double hi_def, int pts_def) {
  const double lo = ctx.cfg.get_double(stage + ".omega_min",
                                       ctx.cfg.get_double(stage + ".t_min", lo_def));
  const double hi = ctx.cfg.get_double(stage + ".omega_max",
                                       ctx.cfg.get_double(stage + ".t_max", hi_def));
  const auto pts =
      static_cast<std::size_t>(ctx.cfg.get_int(stage + ".points", pts_def));
  if (pts == 0) return {};
  if (pts == 1) return {lo};
  return gle::log_grid(lo, hi, pts);
}

int run_validate(const Context& ctx, bool quiet = false) {
  auto kernel = gle::kernel_from_config(ctx.cfg);
  auto grid = gle::default_validation_grid(
      ctx.cfg.get_double("validate.t_min", 1e-2),
      ctx.cfg.get_double("validate.t_max", 1e6),
      static_cast<std::size_t>(ctx.cfg.get_int("validate.points", 161)));
  auto rep = gle::validate_assumptions(kernel, grid);

  json j = json_header(ctx);
  j["kernel"] = kernel.name();
  j["regime"] = gle::regime_name(kernel.regime());
  j["positivity"] = {{"verdict", gle::verdict_name(rep.positivity.verdict)},
                     {"points_checked", rep.positivity.points_checked},
                     {"first_violation_t", rep.positivity.first_violation_t}};
  j["eventual_decrease"] = {{"verdict", gle::verdict_name(rep.decrease.verdict)},
                            {"onset_t", rep.decrease.onset_t},
                            {"last_violation_t", rep.decrease.last_violation_t},
                            {"violations", rep.decrease.violations}};
  j["tail_constant"] = {{"verdict", gle::verdict_name(rep.tail.verdict)},
                        {"kappa", rep.tail.kappa},
                        {"c_hat", rep.tail.c_hat},
                        {"declared", rep.tail.declared},
                        {"rate_exponent_hat", rep.tail.rate_exponent_hat},
                        {"window", {rep.tail.window_lo, rep.tail.window_hi}}};
  j["kcos_positivity"] = {{"verdict", gle::verdict_name(rep.kcos_positivity.verdict)},
                          {"omegas", rep.kcos_positivity.omegas},
                          {"min_value", rep.kcos_positivity.min_value},
                          {"min_at_omega", rep.kcos_positivity.min_at_omega}};
  j["all_pass"] = rep.all_pass();
  write_json(ctx, "validate.json", j);
  if (!quiet) std::cout << rep.summary() << "\n";
  return rep.all_pass() ? kExitOk : kExitAssumption;
}

void run_transform(const Context& ctx) {
  auto kernel = gle::kernel_from_config(ctx.cfg);
  auto omegas = stage_log_grid(ctx, "transform", 1e-3, 1e3, 50);
  const double tol = ctx.cfg.get_double("transform.tol", 1e-8);
  auto rows = gle::transform_grid(kernel, omegas, tol, ctx.threads);
  const std::string cols[] = {"omega", "kcos", "kcos_err", "ksin", "ksin_err"};
  gle::CsvWriter csv((ctx.out_dir / "transform.csv").string(), ctx.metadata, cols);
  double worst = 0.0;
  for (const auto& r : rows) {
    const double row[] = {r.omega, r.cos.value, r.cos.abs_error, r.sin.value,
                          r.sin.abs_error};
    csv.row(row);
    worst = std::max({worst, r.cos.abs_error, r.sin.abs_error});
  }
  if (worst > 2.0 * tol)
    throw ToleranceFailure("transform tolerance unachievable: worst abs_error " +
                           gle::format_double(worst));
}

void run_spectrum(const Context& ctx) {
  auto model = model_from(ctx);
  auto omegas = stage_log_grid(ctx, "spectrum", 1e-3, 1e3, 50);
  const double tol = ctx.cfg.get_double("spectrum.tol", 1e-8);
  const std::string cols[] = {"omega", "rhat", "rhat_err"};
  gle::CsvWriter csv((ctx.out_dir / "spectrum.csv").string(), ctx.metadata, cols);
  double worst = 0.0;
  for (double w : omegas) {
    auto v = gle::rhat(model, w, tol);
    const double row[] = {v.omega, v.rhat, v.abs_error};
    csv.row(row);
    worst = std::max(worst, v.abs_error);
  }
  if (worst > 2.0 * tol) throw ToleranceFailure("spectrum tolerance unachievable");
}

gle::MsdCurve run_msd(const Context& ctx, const gle::SpectralModel& model,
                      const gle::AsymptoteSpec& spec) {
  auto times = stage_log_grid(ctx, "msd", 10.0, 1e4, 13);
  const double tol = ctx.cfg.get_double("msd.tol", 1e-6);
  auto curve = gle::msd_curve(model, times, tol, ctx.threads);
  const std::string cols[] = {"t", "msd", "msd_err", "trend", "ratio"};
  gle::CsvWriter csv((ctx.out_dir / "msd.csv").string(), ctx.metadata, cols);
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    const double g = spec.trend_value(curve.times[i]);
    const double row[] = {curve.times[i], curve.values[i], curve.errors[i], g,
                          curve.values[i] / g};
    csv.row(row);
  }
  for (std::size_t i = 0; i < curve.times.size(); ++i)
    if (curve.errors[i] > 2.0 * tol * std::abs(curve.values[i]) + 1e-300)
      throw ToleranceFailure("msd tolerance unachievable at t = " +
                             gle::format_double(curve.times[i]));
  return curve;
}

json asymptote_json(const gle::AsymptoteSpec& spec) {
  return {{"trend", spec.trend_name()},
          {"constant", spec.constant},
          {"predicted_rate",
           spec.log_rate ? json("1/log t") : json(spec.deviation_rate)}};
}

json deviation_json(const gle::DeviationFit& fit) {
  const char* verdict = fit.verdict == gle::DeviationFit::Verdict::Pass   ? "pass"
                        : fit.verdict == gle::DeviationFit::Verdict::Fail ? "fail"
                                                                          : "inconclusive";
  return {{"fitted", fit.fitted_exponent},
          {"verdict", verdict},
          {"residual_rms", fit.residual_rms},
          {"window", {fit.window_lo, fit.window_hi}},
          {"points_used", fit.points_used}};
}

gle::PathEnsemble run_simulate(const Context& ctx) {
  auto model = model_from(ctx);
  if (!ctx.cfg.maybe_u64("simulate.seed"))
    throw std::invalid_argument("simulate requires a seed (simulate.seed or --seed)");
  const std::uint64_t seed = ctx.cfg.get_u64("simulate.seed");
  const auto paths = static_cast<std::size_t>(ctx.cfg.get_int("simulate.paths", 256));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("simulate.steps", 128));
  const double horizon = ctx.cfg.get_double("simulate.horizon", 100.0);
  gle::SimulateOptions opt;
  opt.modes = static_cast<std::size_t>(ctx.cfg.get_int("simulate.modes", 4096));
  opt.omega_max = ctx.cfg.get_double("simulate.omega_max", 64.0);
  opt.bias_budget = ctx.cfg.get_double("simulate.bias_budget", 1e-3);
  opt.threads = ctx.threads;

  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    grid[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
  grid[0] = 0.0;

  auto ens = gle::simulate(model, grid, seed, paths, opt);
  const std::string cols[] = {"path_id", "t", "x"};
  gle::CsvWriter csv((ctx.out_dir / "paths.csv").string(), ctx.metadata, cols);
  for (std::size_t p = 0; p < ens.n_paths(); ++p)
    for (std::size_t k = 0; k < ens.times().size(); ++k) {
      const double row[] = {static_cast<double>(p), ens.times()[k], ens.x(p, k)};
      csv.row(row);
    }
  return ens;
}

void run_tamsd(const Context& ctx) {
  auto ens = run_simulate(ctx);
  std::vector<double> lags;
  const std::string spec = ctx.cfg.get_string("tamsd.lags", "");
  if (spec.empty()) {
    const double h = ens.times()[1] - ens.times()[0];
    lags = {4 * h, 16 * h, 64 * h};
  } else {
    std::size_t pos = 0;
    while (pos < spec.size()) {
      auto comma = spec.find(',', pos);
      if (comma == std::string::npos) comma = spec.size();
      lags.push_back(std::stod(spec.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  auto curve = gle::tamsd(ens, lags);
  const std::string cols[] = {"lag", "mean", "stderr"};
  gle::CsvWriter csv((ctx.out_dir / "tamsd.csv").string(), ctx.metadata, cols);
  for (std::size_t i = 0; i < curve.lags.size(); ++i) {
    const double row[] = {curve.lags[i], curve.mean[i], curve.stderrs[i]};
    csv.row(row);
  }
}

int run_report(const Context& ctx) {
  const int validate_rc = run_validate(ctx, /*quiet=*/true);
  run_transform(ctx);
  run_spectrum(ctx);
  auto model = model_from(ctx);
  auto spec = gle::asymptotic_constant(model);
  auto curve = run_msd(ctx, model, spec);
  auto fit =
      gle::deviation_fit(curve, spec, ctx.cfg.get_double("deviation.slack", 0.15));

  json j = json_header(ctx);
  j["kernel"] = model.kernel.name();
  j["regime"] = gle::regime_name(model.kernel.regime());
  j["asymptote"] = asymptote_json(spec);
  j["deviation"] = deviation_json(fit);
  j["checks"] = json::array();
  j["checks"].push_back({{"name", "assumptions"}, {"pass", validate_rc == kExitOk}});
  if (!curve.times.empty() && curve.times.back() >= 1000.0 * curve.times.front()) {
    auto cls = gle::classify_from_msd(curve);
    j["checks"].push_back({{"name", "msd_classification"},
                           {"alpha_hat", cls.alpha_hat},
                           {"log_correction", cls.log_correction}});
  }
  write_json(ctx, "report.json", j);
  return validate_rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gle-lab: GLE memory-kernel numerics"};
  app.set_version_flag("--version", kVersion);

  std::string config_path, out_dir = "out";
  std::vector<std::string> overrides;
  int threads = -1;
  std::int64_t seed = -1;
  app.add_option("--config", config_path, "config file (key=value)")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", overrides, "override config entries (key=value)");
  app.add_option("--threads", threads, "worker threads (0 = auto)");
  app.add_option("--seed", seed, "simulation seed override");

  const char* subcommands[] = {"validate", "transform", "spectrum",
                               "msd",      "asymptote", "deviation",
                               "simulate", "tamsd",     "report"};
  for (const char* name : subcommands) app.add_subcommand(name, "")->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    Context ctx;
    ctx.cfg = gle::RunConfig::parse_file(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got: " + kv);
      ctx.cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed >= 0) ctx.cfg.set("simulate.seed", std::to_string(seed));
    if (threads >= 0) ctx.cfg.set("threads", std::to_string(threads));
    ctx.threads = static_cast<int>(ctx.cfg.get_int("threads", 1));
    ctx.out_dir = out_dir;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec || !fs::is_directory(ctx.out_dir)) {
      std::cerr << "error: cannot create output directory " << out_dir << "\n";
      return kExitInvalid;
    }
    ctx.metadata = metadata_line(ctx);

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "validate") return run_validate(ctx);
    if (sub == "transform") {
      run_transform(ctx);
    } else if (sub == "spectrum") {
      run_spectrum(ctx);
    } else if (sub == "msd" || sub == "asymptote" || sub == "deviation") {
      auto model = model_from(ctx);
      auto spec = gle::asymptotic_constant(model);
      if (sub == "asymptote") {
        json a = json_header(ctx);
        a["kernel"] = model.kernel.name();
        a["regime"] = gle::regime_name(model.kernel.regime());
        a["asymptote"] = asymptote_json(spec);
        write_json(ctx, "asymptote.json", a);
      } else {
        auto curve = run_msd(ctx, model, spec);
        if (sub == "deviation") {
          auto fit = gle::deviation_fit(curve, spec,
                                        ctx.cfg.get_double("deviation.slack", 0.15));
          json d = json_header(ctx);
          d["deviation"] = deviation_json(fit);
          write_json(ctx, "deviation.json", d);
        }
      }
    } else if (sub == "simulate") {
      run_simulate(ctx);
    } else if (sub == "tamsd") {
      run_tamsd(ctx);
    } else if (sub == "report") {
      return run_report(ctx);
    }
    return kExitOk;
  } catch (const ToleranceFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
