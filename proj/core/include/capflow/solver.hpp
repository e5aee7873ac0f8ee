#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "capflow/grid.hpp"
#include "capflow/operators.hpp"

namespace capflow {

/// Treatment of the wall nodes, where the continuum problem prescribes an
/// infinite slope.
struct BoundaryMode {
  enum class Kind { ProfileConsistent, CopySpeed };
  enum class Lambda { Adaptive, Fixed };

  Kind kind = Kind::ProfileConsistent;
  Lambda policy = Lambda::Adaptive;
  double fixed_lambda = 0.0;

  static BoundaryMode profile_adaptive() { return {}; }
  static BoundaryMode profile_fixed(double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("BoundaryMode: fixed lambda must be > 0");
    return {Kind::ProfileConsistent, Lambda::Fixed, lambda};
  }
  static BoundaryMode copy_speed() { return {Kind::CopySpeed, Lambda::Adaptive, 0.0}; }
};

/// Operator bounds of the initial data (discrete stand-in for essential
/// bounds of f(g(u0_x) u0_xx)).
struct OperatorBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Nodal samples of the regularized initial datum: eps * psi_hat + mollified
/// squeeze of u0, where psi_hat is strictly convex with the boundary cusp
/// -(b-|x|)^((alpha-2)/(alpha-1)). Requires tail exponent > 2.
FieldState regularize_initial(const std::function<double(double)>& u0, double eps,
                              const OperatorSpec& op, const Grid& grid);

/// f(g(centered slope) * second difference) at interior node i.
double discrete_operator(const OperatorSpec& op, const FieldState& state, int i);

/// Min/max of discrete_operator over the interior nodes.
OperatorBounds discrete_operator_range(const OperatorSpec& op, const FieldState& state);

/// Largest stable explicit step from the current state:
///   dt = safety h^2 / (2 Lf max_i g(p_i)),
/// with Lf a Lipschitz bound of f over the realized arguments g D2u, floored
/// to span the images of [f_inv(L-), f_inv(L+)].
double cfl_dt(const OperatorSpec& op, const FieldState& state, OperatorBounds lb,
              double safety = 0.9);

/// One explicit Euler step. Throws CflViolation if dt exceeds the stability
/// bound (safety 1).
FieldState step(const OperatorSpec& op, const FieldState& state, double dt,
                const BoundaryMode& mode, OperatorBounds lb);

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;
};

/// Divergence sentinel: any |u_i| beyond this reports blow-up (expected in
/// the fat-tail regime) rather than continuing into float overflow.
inline constexpr double kBlowupSentinel = 1e12;

struct BlowupEvent {
  double t = 0.0;
  double max_abs_u = 0.0;
};

struct Trajectory {
  Grid grid;
  std::vector<Snapshot> snapshots;
  // per-snapshot boundary speeds (left, right) used by the profile scheme
  std::vector<double> lambda_left, lambda_right;
  double dt_min = 0.0, dt_max = 0.0;
  long steps = 0;
  std::optional<BlowupEvent> blowup;
};

/// Repeated explicit steps under the adaptive CFL bound, emitting snapshots
/// at multiples of snapshot_every (plus the initial and final states).
Trajectory evolve(const OperatorSpec& op, FieldState state, double t_final,
                  const BoundaryMode& mode, OperatorBounds lb, double snapshot_every);

}  // namespace capflow
