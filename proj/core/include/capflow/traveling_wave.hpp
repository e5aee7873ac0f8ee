#pragma once

#include <span>
#include <vector>

#include "capflow/operators.hpp"

namespace capflow {

/// Sampled stationary profile (W, c): W convex, W_x(+-b) = +-inf, normalized
/// so that W(0) = 0. Immutable after construction; carries the operator it
/// was built from so boundary increments can be regenerated exactly.
struct WaveProfile {
  double b;
  double c;  // propagation speed
  std::vector<double> xs;
  std::vector<double> ws;
  double holder_exponent;  // (alpha-2)/(alpha-1)
  OperatorSpec op;
};

/// Unique speed c with 2 b f_inv(c) = G(inf). Throws NonIntegrableTail in
/// the fat-tail regime.
double solve_speed(const OperatorSpec& op, double b);

/// Sample W on a uniform grid of n_nodes points including both endpoints.
/// Interior panels integrate the slope G_inv(f_inv(c)(y+b)); the panels
/// touching +-b switch to the p-substitution so the endpoint singularity is
/// handled by an analytic power tail.
WaveProfile profile(const OperatorSpec& op, double b, int n_nodes);

/// Closed-form slope W_x(x) = G_inv(f_inv(c)(x+b)). Throws OutOfRange at
/// |x| >= b where the slope is infinite.
double profile_derivative(const OperatorSpec& op, double b, double x);

/// Max over interior nodes (excluding a 3-node boundary layer per side) of
/// |f(g(DW) D2W) - c| with centered differences.
double wave_residual(const OperatorSpec& op, const WaveProfile& wave);

/// Least-squares slope of log(W(b) - W(b-h)) against log h over the dyadic
/// ladder h = b 2^-j, j = 7..14. Expected (alpha-2)/(alpha-1).
double holder_fit(const WaveProfile& wave);

/// Same fit on raw samples using the node ladder h = k dx, k = 1,2,4,...
double holder_fit_samples(std::span<const double> xs, std::span<const double> ws);

/// Vertical rise of the lambda-speed stationary profile across [b-h, b]:
///   integral of G_inv(min(f_inv(lambda)(y+b), G_inf - eps_mach)) dy.
/// Always finite; valid whenever the tail exponent is > 1.
double boundary_increment(const OperatorSpec& op, double b, double h, double lambda);

/// Mirror increment across [-b, -b+h] (uses the left tail constant).
double boundary_increment_left(const OperatorSpec& op, double b, double h, double lambda);

}  // namespace capflow
