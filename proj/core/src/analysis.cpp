#include "capflow/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace capflow {

namespace {

void require_same_grid(const Trajectory& traj, const WaveProfile& wave) {
  if (wave.xs.size() != static_cast<std::size_t>(traj.grid.total()) ||
      wave.b != traj.grid.b) {
    throw GridMismatch("trajectory and wave live on different grids");
  }
}

void require_matching(const Trajectory& u, const Trajectory& v) {
  if (!u.grid.same(v.grid)) throw GridMismatch("trajectories on different grids");
  if (u.snapshots.size() != v.snapshots.size()) {
    throw GridMismatch("trajectories with different snapshot counts");
  }
  for (std::size_t s = 0; s < u.snapshots.size(); ++s) {
    if (std::abs(u.snapshots[s].t - v.snapshots[s].t) > 1e-12 * (1.0 + u.snapshots[s].t)) {
      throw GridMismatch("trajectories with different snapshot times");
    }
  }
}

double scale_of(const Trajectory& u, const Trajectory& v) {
  double s = 1.0;
  for (const auto& snap : u.snapshots) {
    for (double x : snap.u) s = std::max(s, std::abs(x));
  }
  for (const auto& snap : v.snapshots) {
    for (double x : snap.u) s = std::max(s, std::abs(x));
  }
  return s;
}

}  // namespace

EnvelopeSeries eta_envelopes(const Trajectory& traj, const WaveProfile& wave) {
  require_same_grid(traj, wave);
  EnvelopeSeries env;
  env.t.reserve(traj.snapshots.size());
  for (const auto& snap : traj.snapshots) {
    double up = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < snap.u.size(); ++i) {
      const double eta = snap.u[i] - wave.ws[i] - wave.c * snap.t;
      up = std::max(up, eta);
      lo = std::min(lo, eta);
    }
    env.t.push_back(snap.t);
    env.upper.push_back(up);
    env.lower.push_back(lo);
  }
  return env;
}

double estimate_m(const Trajectory& traj, const WaveProfile& wave,
                  double spread_threshold) {
  const EnvelopeSeries env = eta_envelopes(traj, wave);
  const double spread = env.upper.back() - env.lower.back();
  if (spread > spread_threshold) {
    throw NotConverged("estimate_m: envelope spread " + std::to_string(spread) +
                       " still above threshold");
  }
  return 0.5 * (env.upper.back() + env.lower.back());
}

std::vector<double> wave_gap(const Trajectory& traj, const WaveProfile& wave, double m) {
  require_same_grid(traj, wave);
  std::vector<double> gaps;
  gaps.reserve(traj.snapshots.size());
  for (const auto& snap : traj.snapshots) {
    double gap = 0.0;
    for (std::size_t i = 0; i < snap.u.size(); ++i) {
      gap = std::max(gap, std::abs(snap.u[i] - wave.ws[i] - m - wave.c * snap.t));
    }
    gaps.push_back(gap);
  }
  return gaps;
}

PairCheck check_comparison(const Trajectory& u, const Trajectory& v) {
  require_matching(u, v);
  const double tol = 1e-10 * scale_of(u, v);
  PairCheck rep;
  rep.pass = true;
  rep.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < u.snapshots.size(); ++s) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.snapshots[s].u.size(); ++i) {
      m = std::max(m, u.snapshots[s].u[i] - v.snapshots[s].u[i]);
    }
    rep.per_snapshot.push_back(m);
    rep.worst = std::max(rep.worst, m);
    if (m > tol) rep.pass = false;
  }
  return rep;
}

PairCheck check_contraction(const Trajectory& u, const Trajectory& v) {
  require_matching(u, v);
  const double tol = 1e-10 * scale_of(u, v);
  PairCheck rep;
  rep.pass = true;
  rep.worst = 0.0;
  double initial = 0.0;
  for (std::size_t s = 0; s < u.snapshots.size(); ++s) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.snapshots[s].u.size(); ++i) {
      m = std::max(m, std::abs(u.snapshots[s].u[i] - v.snapshots[s].u[i]));
    }
    rep.per_snapshot.push_back(m);
    if (s == 0) initial = m;
    rep.worst = std::max(rep.worst, m - initial);
    if (m > initial + tol) rep.pass = false;
  }
  return rep;
}

double holder_seminorm(std::span<const double> xs, std::span<const double> us,
                       double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw ConfigError("holder_seminorm: exponent must be in (0,1]");
  }
  if (xs.size() != us.size() || xs.size() < 2) {
    throw GridMismatch("holder_seminorm: mismatched or trivial samples");
  }
  double best = 0.0;
  for (std::size_t gap = 1; gap < xs.size(); gap *= 2) {
    for (std::size_t i = 0; i + gap < xs.size(); ++i) {
      const double num = std::abs(us[i + gap] - us[i]);
      const double den = std::pow(std::abs(xs[i + gap] - xs[i]), exponent);
      best = std::max(best, num / den);
    }
  }
  return best;
}

double holder_seminorm(const FieldState& state, double exponent) {
  std::vector<double> xs(state.grid.total());
  for (int i = 0; i < state.grid.total(); ++i) xs[i] = state.grid.x(i);
  return holder_seminorm(xs, state.u, exponent);
}

TimeLipschitzCheck check_time_lipschitz(const Trajectory& traj, double l_minus,
                                        double l_plus, double tol) {
  TimeLipschitzCheck rep;
  if (traj.snapshots.size() < 2) {
    rep.applicable = false;
    return rep;
  }
  rep.realized_min = std::numeric_limits<double>::infinity();
  rep.realized_max = -std::numeric_limits<double>::infinity();
  rep.pass = true;
  for (std::size_t s = 1; s < traj.snapshots.size(); ++s) {
    const double dt = traj.snapshots[s].t - traj.snapshots[s - 1].t;
    if (!(dt > 0.0)) continue;
    // interior nodes only: wall nodes carry the grafted profile rise
    for (int i = 1; i <= traj.grid.n; ++i) {
      const double rate = (traj.snapshots[s].u[i] - traj.snapshots[s - 1].u[i]) / dt;
      rep.realized_min = std::min(rep.realized_min, rate);
      rep.realized_max = std::max(rep.realized_max, rate);
      if (rate < l_minus - tol || rate > l_plus + tol) {
        ++rep.violations;
        rep.pass = false;
      }
    }
  }
  return rep;
}

double check_convexity(std::span<const double> us, double dx) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < us.size(); ++i) {
    worst = std::min(worst, (us[i + 1] - 2.0 * us[i] + us[i - 1]) / (dx * dx));
  }
  return worst;
}

double check_convexity(const FieldState& state) {
  return check_convexity(state.u, state.grid.h);
}

RunReport make_report(const Trajectory& traj, const WaveProfile& wave, double l_minus,
                      double l_plus, double lip_tol, double env_tol) {
  RunReport rep;
  rep.envelopes = eta_envelopes(traj, wave);
  rep.m_estimate = estimate_m(traj, wave);
  rep.gap = wave_gap(traj, wave, rep.m_estimate);
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const auto& snap = traj.snapshots[s];
    std::vector<double> xs(traj.grid.total());
    for (int i = 0; i < traj.grid.total(); ++i) xs[i] = traj.grid.x(i);
    rep.holder.push_back(holder_fit_samples(xs, snap.u));
    rep.convexity_min.push_back(check_convexity(snap.u, traj.grid.h));
    if (s > 0) {
      if (rep.envelopes.upper[s] > rep.envelopes.upper[s - 1] + env_tol) {
        rep.violations.push_back({"upper-envelope-monotone", snap.t,
                                  rep.envelopes.upper[s] - rep.envelopes.upper[s - 1]});
      }
      if (rep.envelopes.lower[s] < rep.envelopes.lower[s - 1] - env_tol) {
        rep.violations.push_back({"lower-envelope-monotone", snap.t,
                                  rep.envelopes.lower[s - 1] - rep.envelopes.lower[s]});
      }
    }
  }
  const TimeLipschitzCheck lip = check_time_lipschitz(traj, l_minus, l_plus, lip_tol);
  rep.lipschitz_min = lip.realized_min;
  rep.lipschitz_max = lip.realized_max;
  if (lip.applicable && !lip.pass) {
    rep.violations.push_back({"time-lipschitz", traj.snapshots.back().t,
                              static_cast<double>(lip.violations)});
  }
  return rep;
}

}  // namespace capflow
