#include "capflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace capflow::num {

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson(fa, fm, fb, b - a);
  return adapt(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double integrate_dyadic(const std::function<double(double)>& f, double a,
                        double b, double abs_tol) {
  if (b <= a) return 0.0;
  if (a <= 0.0) throw std::invalid_argument("integrate_dyadic: need 0 < a");
  // Count chunks first so each gets a fair tolerance share.
  int chunks = 1;
  for (double lo = a; lo * 2.0 < b; lo *= 2.0) ++chunks;
  const double tol = abs_tol / static_cast<double>(chunks);
  double sum = 0.0;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(lo * 2.0, b);
    sum += adaptive_simpson(f, lo, hi, tol);
    lo = hi;
  }
  return sum;
}

double bisect_increasing(const std::function<double(double)>& f, double lo,
                         double hi, double target, double x_tol) {
  for (int it = 0; it < 200 && hi - lo > x_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at roundoff limit
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_slope: need two equal-length samples");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace capflow::num
