#include "capflow/traveling_wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "capflow/numerics.hpp"

namespace capflow {

namespace {

constexpr double kTailError = 1e-13;
constexpr double kHuge = 1e300;

/// Radius beyond which p*g(p) may be replaced by the declared power tail:
/// the deviation integrated to infinity stays below kTailError.
double moment_model_radius(const OperatorSpec& op, double c_side) {
  const double s = std::pow(c_side / (2.0 * kTailError), 1.0 / op.alpha());
  return std::clamp(s, op.tail_cutoff(), 1e7);
}

/// integral of c s^(1-alpha) over [s0, s1], 0 < s0 <= s1 (alpha == 2 safe;
/// s1 may be kHuge, meaning infinity for alpha > 2).
double power_moment(double c, double alpha, double s0, double s1) {
  if (s1 <= s0) return 0.0;
  if (std::abs(alpha - 2.0) < 1e-12) return c * std::log(s1 / s0);
  return c * (std::pow(s1, 2.0 - alpha) - std::pow(s0, 2.0 - alpha)) / (2.0 - alpha);
}

/// integral of p g(p) dp over [p_lo, p_hi], 0 <= p_lo <= p_hi.
double moment_pos(const OperatorSpec& op, double p_lo, double p_hi, double tol) {
  if (p_hi <= p_lo) return 0.0;
  const double s_model = moment_model_radius(op, op.c_plus());
  const auto integrand = [&op](double p) { return p * op.g(p); };
  double total = 0.0;
  const double q_hi = std::min(p_hi, s_model);
  if (q_hi > p_lo) {
    const double mid = std::clamp(1.0, p_lo, q_hi);
    if (mid > p_lo) total += num::adaptive_simpson(integrand, p_lo, mid, tol);
    if (q_hi > mid) total += num::integrate_dyadic(integrand, mid, q_hi, tol);
  }
  if (p_hi > s_model) {
    total += power_moment(op.c_plus(), op.alpha(), std::max(p_lo, s_model), p_hi);
  }
  return total;
}

/// integral of |p| g(p) dp over [p_lo, p_hi], p_lo <= p_hi <= 0.
double moment_neg(const OperatorSpec& op, double p_lo, double p_hi, double tol) {
  if (p_hi <= p_lo) return 0.0;
  const double s_model = moment_model_radius(op, op.c_minus());
  const auto integrand = [&op](double q) { return q * op.g(-q); };
  const double q_lo = -p_hi;  // magnitudes, q_lo <= q_hi
  const double q_hi = -p_lo;
  double total = 0.0;
  const double m_hi = std::min(q_hi, s_model);
  if (m_hi > q_lo) {
    const double mid = std::clamp(1.0, q_lo, m_hi);
    if (mid > q_lo) total += num::adaptive_simpson(integrand, q_lo, mid, tol);
    if (m_hi > mid) total += num::integrate_dyadic(integrand, mid, m_hi, tol);
  }
  if (q_hi > s_model) {
    total += power_moment(op.c_minus(), op.alpha(), std::max(q_lo, s_model), q_hi);
  }
  return total;
}

/// Signed integral of p g(p) dp over [p_lo, p_hi], any signs, p_lo <= p_hi.
/// Endpoints may be +-kHuge (infinite for tail exponents > 2).
double signed_moment(const OperatorSpec& op, double p_lo, double p_hi, double tol) {
  if (p_hi <= p_lo) return 0.0;
  if (p_lo >= 0.0) return moment_pos(op, p_lo, p_hi, tol);
  if (p_hi <= 0.0) return -moment_neg(op, p_lo, p_hi, tol);
  return -moment_neg(op, p_lo, 0.0, tol) + moment_pos(op, 0.0, p_hi, tol);
}

/// W(b) - W(x) for the profile with slope scale a = f_inv(speed); alpha > 2.
double rise_to_right_boundary(const OperatorSpec& op, double a, double b, double x,
                              double tol) {
  const double p_lo = op.G_inv(a * (x + b));
  return signed_moment(op, p_lo, kHuge, tol) / a;
}

}  // namespace

double solve_speed(const OperatorSpec& op, double b) {
  if (!(b > 0.0)) throw ConfigError("solve_speed: b must be > 0");
  return op.f(op.G_infinity() / (2.0 * b));
}

double profile_derivative(const OperatorSpec& op, double b, double x) {
  if (!(std::abs(x) < b)) {
    throw OutOfRange("profile_derivative: slope is infinite at |x| >= b");
  }
  const double c = solve_speed(op, b);
  return op.G_inv(op.f_inv(c) * (x + b));
}

WaveProfile profile(const OperatorSpec& op, double b, int n_nodes) {
  if (n_nodes < 16) throw BadDimension("profile: need at least 16 nodes");
  if (!(b > 0.0)) throw ConfigError("profile: b must be > 0");
  const double c = solve_speed(op, b);
  const double a = op.f_inv(c);
  const double alpha = op.alpha();

  std::vector<double> xs(n_nodes), ws(n_nodes, 0.0);
  const int m = n_nodes - 1;
  for (int i = 0; i <= m; ++i) {
    xs[i] = (i == m) ? b : -b + 2.0 * b * static_cast<double>(i) / m;
  }

  // Slopes at interior nodes; panels integrate in p-space:
  //   integral_{x_i}^{x_{i+1}} W_x dy = (1/a) integral_{P_i}^{P_{i+1}} p g(p) dp
  std::vector<double> P(n_nodes, 0.0);
  for (int i = 1; i < m; ++i) {
    P[i] = op.G_inv(a * (xs[i] + b));
  }
  const double panel_tol = std::min(1e-12, 1e-10 / n_nodes);

  // anchor at the node nearest x = 0 and accumulate outward (keeps even
  // profiles symmetric to roundoff)
  const int k0 = m / 2 + (m % 2);
  ws[k0] = 0.0;
  for (int i = k0; i + 1 < m; ++i) {
    ws[i + 1] = ws[i] + signed_moment(op, P[i], P[i + 1], panel_tol) / a;
  }
  for (int i = k0; i - 1 > 0; --i) {
    ws[i - 1] = ws[i] - signed_moment(op, P[i - 1], P[i], panel_tol) / a;
  }
  // endpoint panels carry the integrable singularity; analytic power tails
  ws[m] = ws[m - 1] + signed_moment(op, P[m - 1], kHuge, panel_tol) / a;
  ws[0] = ws[1] - signed_moment(op, -kHuge, P[1], panel_tol) / a;

  // exact normalization W(0) = 0 when 0 is not a node
  if (xs[k0] != 0.0) {
    const double p0 = op.G_inv(a * b);
    const double shift =
        ws[k0] + (P[k0] <= p0 ? signed_moment(op, P[k0], p0, panel_tol)
                              : -signed_moment(op, p0, P[k0], panel_tol)) /
                     a;
    for (double& w : ws) w -= shift;
  }
  return WaveProfile{b, c, std::move(xs), std::move(ws),
                     (alpha - 2.0) / (alpha - 1.0), op};
}

double wave_residual(const OperatorSpec& op, const WaveProfile& wave) {
  const auto n = static_cast<int>(wave.xs.size());
  if (n < 16) throw BadDimension("wave_residual: profile too coarse");
  const double dx = wave.xs[1] - wave.xs[0];
  double worst = 0.0;
  for (int i = 4; i + 4 < n; ++i) {
    const double p = (wave.ws[i + 1] - wave.ws[i - 1]) / (2.0 * dx);
    const double z = (wave.ws[i + 1] - 2.0 * wave.ws[i] + wave.ws[i - 1]) / (dx * dx);
    worst = std::max(worst, std::abs(op.f(op.g(p) * z) - wave.c));
  }
  return worst;
}

double holder_fit(const WaveProfile& wave) {
  if (wave.xs.size() < 128) throw BadDimension("holder_fit: need >= 128 nodes");
  const double a = wave.op.f_inv(wave.c);
  std::vector<double> lx, ly;
  for (int j = 7; j <= 14; ++j) {
    const double h = wave.b * std::pow(2.0, -j);
    const double rise = rise_to_right_boundary(wave.op, a, wave.b, wave.b - h, kTailError);
    lx.push_back(std::log(h));
    ly.push_back(std::log(rise));
  }
  return num::fit_slope(lx, ly);
}

double holder_fit_samples(std::span<const double> xs, std::span<const double> ws) {
  const auto n = xs.size();
  if (n < 16 || ws.size() != n) {
    throw BadDimension("holder_fit_samples: need matching samples, >= 16 nodes");
  }
  const double dx = xs[1] - xs[0];
  std::vector<double> lx, ly;
  for (std::size_t k = 1; k <= (n - 1) / 4; k *= 2) {
    const double rise = std::abs(ws[n - 1] - ws[n - 1 - k]);
    if (rise <= 0.0) continue;
    lx.push_back(std::log(static_cast<double>(k) * dx));
    ly.push_back(std::log(rise));
  }
  return num::fit_slope(lx, ly);
}

double boundary_increment(const OperatorSpec& op, double b, double h, double lambda) {
  if (!(h > 0.0) || !(h < b)) throw ConfigError("boundary_increment: need 0 < h < b");
  if (!(lambda > 0.0)) throw ConfigError("boundary_increment: need lambda > 0");
  const double a = op.f_inv(lambda);
  const double g_inf = op.G_infinity_raw();
  const double y_cap = g_inf * (1.0 - std::numeric_limits<double>::epsilon());
  const double tol = kTailError;

  const double p_lo = op.G_inv_raw(std::min(a * (2.0 * b - h), y_cap));
  const double p_max = op.G_inv_raw(std::min(a * 2.0 * b, y_cap));

  double clamped_len = 0.0;
  if (a * 2.0 * b > y_cap) {
    const double y_star = y_cap / a - b;  // where the cap engages
    clamped_len = b - std::max(b - h, y_star);
  }
  return signed_moment(op, p_lo, p_max, tol) / a + clamped_len * p_max;
}

double boundary_increment_left(const OperatorSpec& op, double b, double h, double lambda) {
  if (!(h > 0.0) || !(h < b)) throw ConfigError("boundary_increment: need 0 < h < b");
  if (!(lambda > 0.0)) throw ConfigError("boundary_increment: need lambda > 0");
  const double a = op.f_inv(lambda);
  const double g_inf = op.G_infinity_raw();
  const double y_floor = g_inf * std::numeric_limits<double>::epsilon();
  const double tol = kTailError;

  const double p_hi = op.G_inv_raw(std::max(a * h, y_floor));
  const double p_min = op.G_inv_raw(y_floor);

  // the floor always engages in a sliver adjacent to y = -b
  const double y_star = std::min(y_floor / a - b, -b + h);
  const double clamped_len = std::max(0.0, y_star + b);

  return -signed_moment(op, p_min, p_hi, tol) / a + clamped_len * (-p_min);
}

}  // namespace capflow
