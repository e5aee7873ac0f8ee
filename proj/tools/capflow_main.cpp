// capflow: traveling waves, monotone evolution, and boundary blow-up
// certificates for the sliding-contact curvature flow
//   u_t = f(g(u_x) u_xx),  u_x(+-b) = +-inf.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "capflow/analysis.hpp"
#include "capflow/blowup.hpp"
#include "capflow/config.hpp"
#include "capflow/io.hpp"
#include "capflow/numerics.hpp"
#include "capflow/operators.hpp"
#include "capflow/solver.hpp"
#include "capflow/traveling_wave.hpp"

namespace {

using namespace capflow;

std::filesystem::path resolve_out(const std::string& flag_value) {
  if (const char* env = std::getenv("CAPFLOW_OUT")) return env;
  return flag_value;
}

int run_wave(double gamma, double b, int n, const std::string& out) {
  const auto op = OperatorSpec::power_curvature(gamma);
  const WaveProfile wave = profile(op, b, n);
  const auto dir = resolve_out(out);
  std::filesystem::create_directories(dir);
  io::write_wave_csv(dir / "wave.csv", wave);
  io::write_wave_sidecar(dir / "wave.json", wave);
  std::printf("c = %.9f\n", wave.c);
  std::printf("wrote %s and wave.json\n", (dir / "wave.csv").c_str());
  return 0;
}

int run_evolve(const RunConfig& cfg) {
  const Grid grid = make_grid(cfg.b, cfg.n);
  const FieldState init = make_initial(cfg, grid);
  const OperatorBounds lb = discrete_operator_range(cfg.op, init);
  Trajectory traj = evolve(cfg.op, init, cfg.t_final, cfg.mode, lb,
                           cfg.snapshot_every);
  const auto dir = resolve_out(cfg.out_dir.string());
  io::write_trajectory(dir, traj);
  if (traj.blowup) {
    std::printf("blow-up sentinel at t = %.6g (max |u| = %.3g); trajectory kept\n",
                traj.blowup->t, traj.blowup->max_abs_u);
  }
  if (cfg.op.alpha() > 2.0) {
    const WaveProfile wave = profile(cfg.op, cfg.b, grid.total());
    const RunReport rep = make_report(traj, wave, lb.lower, lb.upper,
                                      /*lip_tol=*/1e-2, /*env_tol=*/1e-6);
    io::write_report(dir, rep);
    std::printf("m estimate = %.9g, final gap = %.3g\n", rep.m_estimate,
                rep.gap.back());
  }
  std::printf("steps = %ld, dt in [%.3g, %.3g]\n", traj.steps, traj.dt_min,
              traj.dt_max);
  return 0;
}

int run_blowup(double gamma, double b, double t0, double kmax,
               const std::string& out) {
  const auto op = OperatorSpec::power_curvature(gamma);
  const auto [M, p0] = find_M_p0(op);
  const auto dir = resolve_out(out);
  std::filesystem::create_directories(dir);
  std::ofstream ofs(dir / "certificate.csv");
  ofs << "k,y_k,r_k,lower_bound\n";
  double last = -std::numeric_limits<double>::infinity();
  bool increasing = true;
  for (double k = 8.0; k <= kmax; k *= 2.0) {
    const BlowupWitness w = make_witness(op, b, k);
    const double cert = certificate_from_log_k(op, b, t0, std::log(k), 0.0, M);
    char line[160];
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", k, w.y_k, w.r_k,
                  cert);
    ofs << line;
    increasing = increasing && cert > last;
    last = cert;
  }
  std::printf("M = %.6g (p0 = %.3g); certificate %s in k; wrote %s\n", M, p0,
              increasing ? "increasing" : "NOT increasing",
              (dir / "certificate.csv").c_str());
  return increasing ? 0 : 1;
}

// ---- verification suites ----------------------------------------------

bool suite_operators() {
  bool ok = true;
  for (double gamma : {1.5, 2.0, 3.0}) {
    const auto op = OperatorSpec::power_curvature(gamma);
    const auto rep = op.check_assumptions(512);
    ok = ok && rep.f_monotone_ok && rep.g_positive_ok && rep.tail_matches_declared &&
         rep.tail_exponent_gap < 0.05;
    num::SplitMix64 rng(7);
    for (int i = 0; i < 200 && ok; ++i) {
      const double v = std::copysign(std::exp(rng.uniform(-6.9, 6.9)), rng.uniform(-1, 1));
      ok = std::abs(op.f(op.f_inv(v)) - v) <= 1e-10 * (1.0 + std::abs(v));
    }
    const double g_inf = op.G_infinity();
    for (int i = 1; i < 32 && ok; ++i) {
      const double y = g_inf * static_cast<double>(i) / 32.0;
      ok = std::abs(op.G(op.G_inv(y)) - y) <= 1e-9;
    }
  }
  return ok;
}

bool suite_wave() {
  bool ok = true;
  for (double gamma : {1.5, 2.0, 3.0}) {
    const auto op = OperatorSpec::power_curvature(gamma);
    for (double b : {0.5, 1.0, 2.0}) {
      const double c = solve_speed(op, b);
      ok = ok && std::abs(2.0 * b * op.f_inv(c) - op.G_infinity()) <= 1e-9;
    }
  }
  const auto op = OperatorSpec::power_curvature(2.0);
  const WaveProfile wave = profile(op, 1.0, 257);
  for (std::size_t i = 1; i + 1 < wave.xs.size() && ok; ++i) {
    ok = wave.ws[i + 1] - 2.0 * wave.ws[i] + wave.ws[i - 1] > 0.0;
  }
  ok = ok && wave_residual(op, wave) < 5e-2;
  return ok;
}

bool suite_comparison(int trials, std::uint64_t seed) {
  const auto op = OperatorSpec::power_curvature(2.0);
  const Grid grid = make_grid(1.0, 8);
  const auto mode = BoundaryMode::profile_fixed(solve_speed(op, 1.0));
  num::SplitMix64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    FieldState lo{grid, std::vector<double>(grid.total()), 0.0};
    FieldState hi = lo;
    for (int i = 0; i < grid.total(); ++i) {
      lo.u[i] = rng.uniform(-0.01, 0.01);
      hi.u[i] = lo.u[i] + rng.uniform(0.0, 0.01);
    }
    OperatorBounds lb = discrete_operator_range(op, lo);
    const OperatorBounds lbh = discrete_operator_range(op, hi);
    lb.lower = std::min(lb.lower, lbh.lower);
    lb.upper = std::max(lb.upper, lbh.upper);
    for (int s = 0; s < 100; ++s) {
      const double dt =
          std::min(cfl_dt(op, lo, lb), cfl_dt(op, hi, lb));
      lo = step(op, lo, dt, mode, lb);
      hi = step(op, hi, dt, mode, lb);
      for (int i = 0; i < grid.total(); ++i) {
        if (lo.u[i] - hi.u[i] > 1e-12) return false;
      }
    }
  }
  return true;
}

bool suite_contraction(int trials, std::uint64_t seed) {
  const auto op = OperatorSpec::power_curvature(2.0);
  const Grid grid = make_grid(1.0, 63);
  const auto mode = BoundaryMode::profile_fixed(solve_speed(op, 1.0));
  num::SplitMix64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    FieldState a{grid, std::vector<double>(grid.total()), 0.0};
    FieldState bst = a;
    for (int i = 0; i < grid.total(); ++i) {
      const double x = grid.x(i);
      a.u[i] = 0.2 * rng.uniform(-1.0, 1.0) * std::cos(1.5 * x);
      bst.u[i] = a.u[i] + 0.1 * rng.uniform(-1.0, 1.0) * (1.0 - x * x);
    }
    OperatorBounds lb = discrete_operator_range(op, a);
    const OperatorBounds lb2 = discrete_operator_range(op, bst);
    lb.lower = std::min(lb.lower, lb2.lower);
    lb.upper = std::max(lb.upper, lb2.upper);
    const Trajectory ta = evolve(op, a, 0.25, mode, lb, 0.05);
    const Trajectory tb = evolve(op, bst, 0.25, mode, lb, 0.05);
    if (!check_contraction(ta, tb).pass) return false;
  }
  return true;
}

bool suite_translation() {
  const auto op = OperatorSpec::power_curvature(2.0);
  const Grid grid = make_grid(1.0, 63);
  FieldState base{grid, std::vector<double>(grid.total()), 0.0};
  for (int i = 0; i < grid.total(); ++i) {
    const double x = grid.x(i);
    base.u[i] = 0.5 * x * x;
  }
  FieldState shifted = base;
  for (auto& v : shifted.u) v += 5.0;
  const OperatorBounds lb = discrete_operator_range(op, base);
  const auto mode = BoundaryMode::profile_adaptive();
  const Trajectory t0 = evolve(op, base, 0.2, mode, lb, 0.05);
  const Trajectory t1 = evolve(op, shifted, 0.2, mode, lb, 0.05);
  for (std::size_t s = 0; s < t0.snapshots.size(); ++s) {
    for (std::size_t i = 0; i < t0.snapshots[s].u.size(); ++i) {
      if (std::abs(t1.snapshots[s].u[i] - t0.snapshots[s].u[i] - 5.0) > 1e-12) {
        return false;
      }
    }
  }
  return true;
}

bool suite_convexity() {
  const auto op = OperatorSpec::power_curvature(2.0);
  const Grid grid = make_grid(1.0, 127);
  const FieldState init =
      regularize_initial([](double x) { return 2.0 * x * x; }, 0.05, op, grid);
  const OperatorBounds lb = discrete_operator_range(op, init);
  const Trajectory traj = evolve(op, init, 1.0, BoundaryMode::profile_adaptive(), lb, 0.2);
  double scale = 1.0;
  for (const auto& snap : traj.snapshots) {
    for (double v : snap.u) scale = std::max(scale, std::abs(v));
  }
  for (const auto& snap : traj.snapshots) {
    if (check_convexity(snap.u, grid.h) < -1e-8 * scale) return false;
  }
  return true;
}

int run_verify(const std::string& suite, int trials, std::uint64_t seed) {
  struct Entry {
    const char* name;
    std::function<bool()> fn;
  };
  const std::vector<Entry> all = {
      {"operators", [] { return suite_operators(); }},
      {"wave", [] { return suite_wave(); }},
      {"comparison", [&] { return suite_comparison(trials, seed); }},
      {"contraction", [&] { return suite_contraction(std::max(1, trials / 10), seed); }},
      {"translation", [] { return suite_translation(); }},
      {"convexity", [] { return suite_convexity(); }},
  };
  bool any = false, ok = true;
  for (const auto& e : all) {
    if (suite != "all" && suite != e.name) continue;
    any = true;
    const bool pass = e.fn();
    std::printf("suite %-12s %s\n", e.name, pass ? "pass" : "FAIL");
    ok = ok && pass;
  }
  if (!any) {
    std::fprintf(stderr, "unknown suite '%s'\n", suite.c_str());
    return 2;
  }
  return ok ? 0 : 1;
}

int run_sweep(const std::string& config_path, int jobs) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("cannot open sweep config: " + config_path);
  std::stringstream ss;
  ss << in.rdbuf();
  // sweep file: JSON array of run configs
  std::vector<RunConfig> cfgs;
  {
    auto j = nlohmann::json::parse(ss.str());
    if (!j.is_array()) throw ConfigError("sweep config must be a JSON array");
    for (const auto& item : j) cfgs.push_back(config_from_json_text(item.dump()));
  }
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    for (std::size_t k = i + 1; k < cfgs.size(); ++k) {
      if (cfgs[i].out_dir == cfgs[k].out_dir) {
        throw ConfigError("sweep: output directories must be disjoint");
      }
    }
  }
  std::atomic<int> failures{0};
  std::vector<std::future<void>> running;
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, jobs);
  for (int w = 0; w < workers; ++w) {
    running.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next.fetch_add(1); i < cfgs.size(); i = next.fetch_add(1)) {
        try {
          run_evolve(cfgs[i]);
        } catch (const std::exception& e) {
          std::fprintf(stderr, "run %zu failed: %s\n", i, e.what());
          ++failures;
        }
      }
    }));
  }
  for (auto& f : running) f.get();
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sliding-contact curvature flow laboratory"};
  app.require_subcommand(1);

  double gamma = 2.0, b = 1.0, t_final = 1.0, t0 = 1.0, kmax = 1e6;
  double lambda = 0.0, snapshot_every = 0.0, eps = 0.0, quad_a = 2.0;
  int n = 255, trials = 100, jobs = 4;
  std::uint64_t seed = 0;
  std::string out = "out", boundary = "profile", initial = "quadratic";
  std::string suite = "all", config_path;

  auto* wave_cmd = app.add_subcommand("wave", "compute the traveling wave profile");
  wave_cmd->add_option("--gamma", gamma, "curvature power");
  wave_cmd->add_option("--b", b, "domain half-width");
  wave_cmd->add_option("--n", n, "profile nodes");
  wave_cmd->add_option("--out", out, "output directory");

  auto* evolve_cmd = app.add_subcommand("evolve", "run the evolution scheme");
  evolve_cmd->add_option("--gamma", gamma, "curvature power");
  evolve_cmd->add_option("--b", b, "domain half-width");
  evolve_cmd->add_option("--n", n, "interior nodes");
  evolve_cmd->add_option("--T", t_final, "final time");
  evolve_cmd->add_option("--boundary", boundary, "profile|copy");
  evolve_cmd->add_option("--lambda", lambda, "fixed boundary speed (profile mode)");
  evolve_cmd->add_option("--snapshot-every", snapshot_every, "snapshot cadence");
  evolve_cmd->add_option("--initial", initial, "wave|quadratic|file:PATH");
  evolve_cmd->add_option("--a", quad_a, "quadratic coefficient");
  evolve_cmd->add_option("--eps", eps, "regularizer strength (0: off)");
  evolve_cmd->add_option("--out", out, "output directory");
  evolve_cmd->add_option("--config", config_path, "JSON config (overrides flags)");

  auto* blowup_cmd = app.add_subcommand("blowup", "divergence certificate sweep");
  blowup_cmd->add_option("--gamma", gamma, "curvature power (fat-tail regime)");
  blowup_cmd->add_option("--b", b, "domain half-width");
  blowup_cmd->add_option("--t0", t0, "certificate time");
  blowup_cmd->add_option("--kmax", kmax, "largest slope parameter");
  blowup_cmd->add_option("--out", out, "output directory");

  auto* verify_cmd = app.add_subcommand("verify", "run invariant suites");
  verify_cmd->add_option("--suite", suite,
                         "operators|wave|comparison|contraction|translation|convexity|all");
  verify_cmd->add_option("--trials", trials, "randomized trials");
  verify_cmd->add_option("--seed", seed, "rng seed");

  auto* sweep_cmd = app.add_subcommand("sweep", "run configs in parallel");
  sweep_cmd->add_option("--config", config_path, "JSON array of run configs")->required();
  sweep_cmd->add_option("--jobs", jobs, "parallel workers");

  CLI11_PARSE(app, argc, argv);

  try {
    if (wave_cmd->parsed()) return run_wave(gamma, b, n, out);
    if (evolve_cmd->parsed()) {
      RunConfig cfg;
      if (!config_path.empty()) {
        cfg = load_config(config_path);
      } else {
        cfg.op = OperatorSpec::power_curvature(gamma);
        cfg.b = b;
        cfg.n = n;
        cfg.t_final = t_final;
        if (boundary == "copy") {
          cfg.mode = BoundaryMode::copy_speed();
        } else if (boundary == "profile") {
          cfg.mode = lambda > 0.0 ? BoundaryMode::profile_fixed(lambda)
                                  : BoundaryMode::profile_adaptive();
        } else {
          throw ConfigError("boundary: expected profile|copy");
        }
        if (initial == "wave") {
          cfg.initial.kind = InitialData::Kind::Wave;
        } else if (initial == "quadratic") {
          cfg.initial.kind = InitialData::Kind::Quadratic;
          cfg.initial.quad_coeff = quad_a;
        } else if (initial.rfind("file:", 0) == 0) {
          cfg.initial.kind = InitialData::Kind::File;
          cfg.initial.file_path = initial.substr(5);
          if (!std::filesystem::exists(cfg.initial.file_path)) {
            throw ConfigError("initial: no such file: " + cfg.initial.file_path);
          }
        } else {
          throw ConfigError("initial: expected wave|quadratic|file:PATH");
        }
        cfg.initial.regularize_eps = eps;
        cfg.snapshot_every = snapshot_every;
        cfg.out_dir = out;
        cfg.seed = seed;
      }
      return run_evolve(cfg);
    }
    if (blowup_cmd->parsed()) return run_blowup(gamma, b, t0, kmax, out);
    if (verify_cmd->parsed()) return run_verify(suite, trials, seed);
    if (sweep_cmd->parsed()) return run_sweep(config_path, jobs);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
