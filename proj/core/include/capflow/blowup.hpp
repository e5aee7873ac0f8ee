#pragma once

#include <optional>
#include <vector>

#include "capflow/operators.hpp"

namespace capflow {

/// Parameters of one explicit boundary-divergence subsolution in the
/// fat-tail regime (tail exponent <= 2).
struct BlowupWitness {
  double b = 0.0;            // domain half-width
  double k = 0.0;            // boundary slope of the arc piece
  double y_k = 0.0;          // root of 1/(y log y) = -k in (0, 1/e]
  double minus_log_y = 0.0;  // -log(y_k), kept separately for precision
  double r_k = 0.0;          // arc radius: slope k at x = +-b
  double M = 0.0;            // curvature floor constant
  double p0 = 0.0;           // slope threshold for the floor
};

/// Radius of the circular arc whose graph has slope +-k at x = +-b.
double arc_radius(double b, double k);

/// Curvature floor: (M, p0) with g(p) >= 2 M |p|^-2 for |p| >= p0, verified
/// on a log grid up to 1e6. Throws IntegrableTail when the tail exponent
/// is > 2 (no such floor is needed or guaranteed there).
std::pair<double, double> find_M_p0(const OperatorSpec& op);

/// Check the floor inequality for a candidate pair on the sampling grid.
bool curvature_floor_holds(const OperatorSpec& op, double M, double p0);

/// Assemble a witness for slope parameter k >= e. Throws RootNotBracketed
/// for smaller k (no root y_k in (0, 1/e]).
BlowupWitness make_witness(const OperatorSpec& op, double b, double k);

/// Front position x(k,t): starts at b, strictly decreasing in t.
double front(const BlowupWitness& w, const OperatorSpec& op, double t);

/// The three-branch subsolution value at (x, t).
double eval_subsolution(const BlowupWitness& w, const OperatorSpec& op, double x,
                        double t);

/// Max over probe points (away from the front) and a time grid of
/// u_t - f(g(u_x) u_xx), computed from hand-coded closed-form derivatives.
/// Nonpositive (up to roundoff) once k is large enough.
double verify_subsolution(const BlowupWitness& w, const OperatorSpec& op, int n_probe);

/// Lower bounds t0 f(M (-log y_k)) - r_k + u0_min for each k in ks
/// (increasing). M defaults to find_M_p0(op). Throws IntegrableTail for
/// tail exponents > 2.
std::vector<double> divergence_certificate(const OperatorSpec& op, double b, double t0,
                                           const std::vector<double>& ks, double u0_min,
                                           std::optional<double> M = std::nullopt);

/// Same bound addressed by log(k); usable far beyond the range where k (or
/// y_k) is representable. The bound grows only like M t0 f-scale of log k.
double certificate_from_log_k(const OperatorSpec& op, double b, double t0,
                              double log_k, double u0_min, double M);

}  // namespace capflow
