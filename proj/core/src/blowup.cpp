#include "capflow/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace capflow {

namespace {

/// Solve L - log L = log k on [1, inf); L = -log(y_k).
double solve_minus_log_y(double log_k) {
  if (log_k < 1.0 - 1e-14) {
    throw RootNotBracketed("make_witness: need k >= e for a root y_k in (0, 1/e]");
  }
  if (std::abs(log_k - 1.0) <= 1e-14) return 1.0;  // k = e, boundary case
  // phi(L) = L - log L - log k is increasing on (1, inf), phi(1) < 0
  double lo = 1.0;
  double hi = log_k + std::log(std::max(log_k, 2.0)) + 2.0;
  double L = std::max(log_k + std::log(std::max(log_k, 1.5)), 1.5);
  for (int it = 0; it < 100; ++it) {
    const double phi = L - std::log(L) - log_k;
    const double dphi = 1.0 - 1.0 / L;
    if (phi > 0.0) {
      hi = L;
    } else {
      lo = L;
    }
    double next = (dphi > 1e-12) ? L - phi / dphi : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - L) <= 1e-16 * L) {
      L = next;
      break;
    }
    L = next;
  }
  return L;
}

void require_fat_tail(const OperatorSpec& op, const char* who) {
  if (op.alpha() > 2.0) {
    throw IntegrableTail(std::string(who) +
                         ": tail exponent > 2, boundary divergence machinery "
                         "does not apply");
  }
}

}  // namespace

double arc_radius(double b, double k) {
  return std::sqrt((1.0 + k * k) / (k * k)) * b;
}

bool curvature_floor_holds(const OperatorSpec& op, double M, double p0) {
  const int n = 600;
  for (int i = 0; i <= n; ++i) {
    const double p = p0 * std::pow(1e6 / p0, static_cast<double>(i) / n);
    if (op.g(p) < 2.0 * M / (p * p)) return false;
    if (op.g(-p) < 2.0 * M / (p * p)) return false;
  }
  return true;
}

std::pair<double, double> find_M_p0(const OperatorSpec& op) {
  require_fat_tail(op, "find_M_p0");
  const double p0 = 1.0;
  const int n = 600;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double p = p0 * std::pow(1e6 / p0, static_cast<double>(i) / n);
    best = std::min(best, 0.5 * p * p * std::min(op.g(p), op.g(-p)));
  }
  return {0.9 * best, p0};  // 10% margin against sampling gaps
}

BlowupWitness make_witness(const OperatorSpec& op, double b, double k) {
  require_fat_tail(op, "make_witness");
  if (!(b > 0.0)) throw ConfigError("make_witness: b must be > 0");
  BlowupWitness w;
  w.b = b;
  w.k = k;
  w.minus_log_y = solve_minus_log_y(std::log(k));
  w.y_k = std::exp(-w.minus_log_y);
  w.r_k = arc_radius(b, k);
  const auto [M, p0] = find_M_p0(op);
  w.M = M;
  w.p0 = p0;
  return w;
}

double front(const BlowupWitness& w, const OperatorSpec& op, double t) {
  if (!(t >= 0.0)) throw ConfigError("front: t must be >= 0");
  const double f0 = op.f(w.M * w.minus_log_y);
  const double a = w.minus_log_y * std::exp(f0 * t);
  return std::exp(-a) + w.b - w.y_k;
}

double eval_subsolution(const BlowupWitness& w, const OperatorSpec& op, double x,
                        double t) {
  const double xt = front(w, op, t);
  const double arc_at_front = -std::sqrt(w.r_k * w.r_k - xt * xt);
  if (x > xt) {
    const double big_x = xt - x + w.y_k;  // log(X)/log(y) = (-log X)/(-log y)
    return std::log(-std::log(big_x) / w.minus_log_y) + arc_at_front;
  }
  if (x < -xt) {
    const double big_x = xt + x + w.y_k;
    return std::log(-std::log(big_x) / w.minus_log_y) + arc_at_front;
  }
  return -std::sqrt(w.r_k * w.r_k - x * x);
}

double verify_subsolution(const BlowupWitness& w, const OperatorSpec& op, int n_probe) {
  require_fat_tail(op, "verify_subsolution");
  if (n_probe < 100) throw ConfigError("verify_subsolution: n_probe >= 100 required");
  const double b = w.b;
  const double exclusion = 1e-3 * b;
  const double r2 = w.r_k * w.r_k;
  double worst = -std::numeric_limits<double>::infinity();

  const int n_times = 16;
  for (int jt = 0; jt <= n_times; ++jt) {
    const double t = static_cast<double>(jt) / n_times;
    const double xt = front(w, op, t);
    const double f0 = op.f(w.M * w.minus_log_y);
    const double a = w.minus_log_y * std::exp(f0 * t);
    const double xt_dot = -f0 * a * std::exp(-a);
    const double arc_term = xt / std::sqrt(r2 - xt * xt);

    for (int jx = 0; jx <= n_probe; ++jx) {
      const double x = -b + 2.0 * b * static_cast<double>(jx) / n_probe;
      if (std::abs(x - xt) < exclusion || std::abs(x + xt) < exclusion) continue;
      double ut, ux, uxx;
      if (x > xt) {
        const double big_x = xt - x + w.y_k;
        const double lx = std::log(big_x);
        ut = xt_dot / (big_x * lx) + arc_term * xt_dot;
        ux = -1.0 / (big_x * lx);
        uxx = -(lx + 1.0) / (big_x * big_x * lx * lx);
      } else if (x < -xt) {
        const double big_x = xt + x + w.y_k;
        const double lx = std::log(big_x);
        ut = xt_dot / (big_x * lx) + arc_term * xt_dot;
        ux = 1.0 / (big_x * lx);
        uxx = -(lx + 1.0) / (big_x * big_x * lx * lx);
      } else {
        ut = 0.0;
        ux = x / std::sqrt(r2 - x * x);
        uxx = r2 / std::pow(r2 - x * x, 1.5);
      }
      worst = std::max(worst, ut - op.f(op.g(ux) * uxx));
    }
  }
  return worst;
}

double certificate_from_log_k(const OperatorSpec& op, double b, double t0,
                              double log_k, double u0_min, double M) {
  const double L = solve_minus_log_y(log_k);
  const double inv_k2 = std::exp(-2.0 * log_k);  // underflows gracefully to 0
  const double r = std::sqrt(1.0 + inv_k2) * b;
  return t0 * op.f(M * L) - r + u0_min;
}

std::vector<double> divergence_certificate(const OperatorSpec& op, double b, double t0,
                                           const std::vector<double>& ks, double u0_min,
                                           std::optional<double> M) {
  require_fat_tail(op, "divergence_certificate");
  if (!(t0 >= 0.0)) throw ConfigError("divergence_certificate: t0 must be >= 0");
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (!(ks[i] > ks[i - 1])) {
      throw ConfigError("divergence_certificate: ks must be strictly increasing");
    }
  }
  const double m_used = M ? *M : find_M_p0(op).first;
  std::vector<double> out;
  out.reserve(ks.size());
  for (double k : ks) {
    out.push_back(certificate_from_log_k(op, b, t0, std::log(k), u0_min, m_used));
  }
  return out;
}

}  // namespace capflow
