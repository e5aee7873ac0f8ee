#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace capflow::num {

/// Adaptive Simpson quadrature with embedded error estimate.
/// Bisects until the panel error estimate |S_fine - S_coarse|/15 meets the
/// (absolute) tolerance share of that panel.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 52);

/// Integral of a decaying function over a long interval [a, b], 0 < a < b.
/// Splits into dyadic chunks [a,2a], [2a,4a], ... so the adaptive rule never
/// sees a panel spanning many orders of magnitude.
double integrate_dyadic(const std::function<double(double)>& f, double a,
                        double b, double abs_tol);

/// Bisection for an increasing function: returns x in [lo, hi] with
/// f(x) ~ target, |interval| <= x_tol. Assumes f(lo) <= target <= f(hi).
double bisect_increasing(const std::function<double(double)>& f, double lo,
                         double hi, double target, double x_tol);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

/// Deterministic 64-bit generator (splitmix64). Used for property trials so
/// that identical seeds give byte-identical runs on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

}  // namespace capflow::num
