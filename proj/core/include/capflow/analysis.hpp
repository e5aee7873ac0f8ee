#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "capflow/grid.hpp"
#include "capflow/solver.hpp"
#include "capflow/traveling_wave.hpp"

namespace capflow {

/// Max/min of u - W - ct over the grid, per snapshot. Theory: the upper
/// envelope is non-increasing and the lower one non-decreasing.
struct EnvelopeSeries {
  std::vector<double> t;
  std::vector<double> upper;  // max_i (u_i - W_i - c t)
  std::vector<double> lower;  // min_i (u_i - W_i - c t)
};

EnvelopeSeries eta_envelopes(const Trajectory& traj, const WaveProfile& wave);

/// Midpoint of the envelopes at the final snapshot. Throws NotConverged if
/// the envelope spread still exceeds spread_threshold.
double estimate_m(const Trajectory& traj, const WaveProfile& wave,
                  double spread_threshold = std::numeric_limits<double>::infinity());

/// Sup-norm of u - (W + m + ct) per snapshot.
std::vector<double> wave_gap(const Trajectory& traj, const WaveProfile& wave, double m);

struct PairCheck {
  bool pass = false;
  double worst = 0.0;              // largest violation observed
  std::vector<double> per_snapshot;
};

/// Ordered initial data must stay ordered: reports max(u - v) per snapshot,
/// pass iff <= 1e-10 * scale throughout. Requires matching grids/snapshot
/// times (GridMismatch).
PairCheck check_comparison(const Trajectory& u, const Trajectory& v);

/// Sup-distance between two runs must never exceed its initial value:
/// per-snapshot sup|u - v|, pass iff <= initial + 1e-10 * scale.
PairCheck check_contraction(const Trajectory& u, const Trajectory& v);

/// Max over dyadic-gap node pairs of |u_i - u_j| / |x_i - x_j|^exponent.
double holder_seminorm(std::span<const double> xs, std::span<const double> us,
                       double exponent);
double holder_seminorm(const FieldState& state, double exponent);

struct TimeLipschitzCheck {
  bool applicable = true;
  bool pass = false;
  double realized_min = 0.0;
  double realized_max = 0.0;
  long violations = 0;
};

/// Per-node difference quotients across consecutive snapshots must lie in
/// [L- - tol, L+ + tol].
TimeLipschitzCheck check_time_lipschitz(const Trajectory& traj, double l_minus,
                                        double l_plus, double tol);

/// Min interior second difference (divided by h^2); convex iff >= -1e-8 * scale.
double check_convexity(const FieldState& state);
double check_convexity(std::span<const double> us, double dx);

struct Violation {
  std::string invariant;
  double t = 0.0;
  double magnitude = 0.0;
};

/// Bundle of per-run diagnostics against the traveling wave.
struct RunReport {
  EnvelopeSeries envelopes;
  double m_estimate = 0.0;
  std::vector<double> gap;            // per snapshot, with m = m_estimate
  std::vector<double> holder;         // fitted boundary exponent per snapshot
  std::vector<double> convexity_min;  // per snapshot
  double lipschitz_min = 0.0, lipschitz_max = 0.0;
  std::vector<Violation> violations;
};

/// Build the full report: envelopes (monotonicity audited at env_tol per
/// step), m estimate, gaps, per-snapshot fits, realized time-Lipschitz range
/// (audited at lip_tol against [l_minus, l_plus]).
RunReport make_report(const Trajectory& traj, const WaveProfile& wave, double l_minus,
                      double l_plus, double lip_tol, double env_tol);

}  // namespace capflow
