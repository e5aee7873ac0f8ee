#include "capflow/operators.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "capflow/numerics.hpp"

namespace capflow {

namespace {

constexpr double kModelError = 1e-13;  // permitted tail-model truncation

double power_f(double gamma, double s) {
  if (s == 0.0) return 0.0;
  if (gamma == 1.0) return s;
  if (gamma == 2.0) return std::abs(s) * s;
  if (gamma == 3.0) return s * s * s;
  return std::copysign(std::pow(std::abs(s), gamma), s);
}

double power_g(double gamma, double p) {
  const double w = 1.0 + p * p;
  if (gamma == 1.0) return 1.0 / w;                       // w^-1
  if (gamma == 2.0) return 1.0 / (w * w * std::sqrt(w));  // w^-5/2
  if (gamma == 3.0) {
    const double w2 = w * w;
    return 1.0 / (w2 * w2);  // w^-4
  }
  return std::pow(w, 0.5 * (1.0 - 3.0 * gamma));
}

/// Radius beyond which replacing g by the declared power tail contributes
/// less than kModelError to any remaining integral. Generic second-order
/// deviation of an admissible tail: |g - C|s|^-a| ~ (a/2) |s|^-a-2 C.
double model_radius(double alpha, double c, double tail_cutoff) {
  const double s =
      std::pow(alpha * c / (2.0 * (alpha - 1.0) * kModelError), 1.0 / (1.0 + alpha));
  return std::clamp(s, tail_cutoff, 1e7);
}

/// Mass of the declared power tail beyond radius s (per side).
double tail_mass(double alpha, double c, double s) {
  return c * std::pow(s, 1.0 - alpha) / (alpha - 1.0);
}

}  // namespace

struct OperatorSpec::Impl {
  OperatorFamily family = OperatorFamily::PowerCurvature;
  double gamma = 0.0;
  std::function<double(double)> f_fn, g_fn, finv_fn;
  double alpha = 0.0;
  double c_plus = 1.0;
  double c_minus = 1.0;
  double tail_cutoff = 10.0;

  double f(double s) const {
    return family == OperatorFamily::PowerCurvature ? power_f(gamma, s) : f_fn(s);
  }
  double g(double p) const {
    return family == OperatorFamily::PowerCurvature ? power_g(gamma, p) : g_fn(p);
  }

  // Cumulative table of G on [-s_left, s_right]; built once on demand.
  struct GTable {
    std::vector<double> p;    // increasing nodes
    std::vector<double> cum;  // G at nodes
    double total = 0.0;       // G(inf)
  };
  mutable std::once_flag g_once;
  mutable GTable table;

  const GTable& g_table() const {
    std::call_once(g_once, [this] { build_table(); });
    return table;
  }

  void build_table() const {
    const double s_left = model_radius(alpha, c_minus, tail_cutoff);
    const double s_right = model_radius(alpha, c_plus, tail_cutoff);

    std::vector<double> nodes;
    // log-spaced below -1, uniform core, log-spaced above 1
    const int per_decade = 48;
    auto push_log_zone = [&](double from, double to, bool negate) {
      // from > to >= 1 in magnitude; emits decreasing magnitudes
      const double decades = std::log10(from / to);
      const int m = std::max(2, static_cast<int>(std::ceil(decades * per_decade)));
      for (int i = 0; i <= m; ++i) {
        const double mag = from * std::pow(to / from, static_cast<double>(i) / m);
        nodes.push_back(negate ? -mag : mag);
      }
    };
    push_log_zone(s_left, 1.0, true);
    const int core_n = 512;
    for (int i = 1; i < core_n; ++i) {
      nodes.push_back(-1.0 + 2.0 * static_cast<double>(i) / core_n);
    }
    {
      std::vector<double> up;
      const double decades = std::log10(s_right / 1.0);
      const int m = std::max(2, static_cast<int>(std::ceil(decades * per_decade)));
      for (int i = 0; i <= m; ++i) {
        up.push_back(std::pow(10.0, decades * static_cast<double>(i) / m));
      }
      nodes.insert(nodes.end(), up.begin(), up.end());
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    table.p = std::move(nodes);
    table.cum.resize(table.p.size());
    table.cum[0] = tail_mass(alpha, c_minus, s_left);
    const auto g_here = [this](double s) { return g(s); };
    const double panel_tol = 2e-14;
    for (std::size_t k = 1; k < table.p.size(); ++k) {
      table.cum[k] = table.cum[k - 1] +
                     num::adaptive_simpson(g_here, table.p[k - 1], table.p[k], panel_tol);
    }
    table.total = table.cum.back() + tail_mass(alpha, c_plus, s_right);
  }

  double G_eval(double p) const {
    const GTable& t = g_table();
    if (p <= t.p.front()) return tail_mass(alpha, c_minus, -p);
    if (p >= t.p.back()) return t.total - tail_mass(alpha, c_plus, p);
    const auto it = std::lower_bound(t.p.begin(), t.p.end(), p);
    const std::size_t hi = static_cast<std::size_t>(it - t.p.begin());
    const std::size_t lo = hi - 1;
    const auto g_here = [this](double s) { return g(s); };
    // integrate from the nearer node
    if (p - t.p[lo] <= t.p[hi] - p) {
      return t.cum[lo] + num::adaptive_simpson(g_here, t.p[lo], p, 1e-13);
    }
    return t.cum[hi] - num::adaptive_simpson(g_here, p, t.p[hi], 1e-13);
  }

  double G_inv_eval(double y) const {
    const GTable& t = g_table();
    if (y <= 0.0 || y >= t.total) {
      throw OutOfRange("G_inv: argument outside (0, G(inf))");
    }
    if (y <= t.cum.front()) {
      // analytic tail-model inversion on the far left
      return -std::pow(c_minus / ((alpha - 1.0) * y), 1.0 / (alpha - 1.0));
    }
    const double top_gap = t.total - t.cum.back();
    if (y >= t.total - top_gap) {
      return std::pow(c_plus / ((alpha - 1.0) * (t.total - y)), 1.0 / (alpha - 1.0));
    }
    const auto it = std::lower_bound(t.cum.begin(), t.cum.end(), y);
    std::size_t hi = static_cast<std::size_t>(it - t.cum.begin());
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    return num::bisect_increasing([this](double p) { return G_eval(p); },
                                  t.p[lo], t.p[hi], y, 1e-12);
  }
};

OperatorSpec::OperatorSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

OperatorSpec OperatorSpec::power_curvature(double gamma, double tail_cutoff) {
  if (!(gamma > 0.0)) throw ConfigError("power_curvature: gamma must be > 0");
  if (!(tail_cutoff > 0.0)) throw ConfigError("power_curvature: tail_cutoff must be > 0");
  auto impl = std::make_shared<Impl>();
  impl->family = OperatorFamily::PowerCurvature;
  impl->gamma = gamma;
  impl->alpha = 3.0 * gamma - 1.0;
  impl->c_plus = 1.0;
  impl->c_minus = 1.0;
  impl->tail_cutoff = tail_cutoff;
  return OperatorSpec(std::move(impl));
}

OperatorSpec OperatorSpec::custom(std::function<double(double)> f,
                                  std::function<double(double)> g, double alpha,
                                  double c_plus, double c_minus,
                                  double tail_cutoff,
                                  std::function<double(double)> f_inverse) {
  if (!f || !g) throw ConfigError("custom operator: f and g callables required");
  if (!(c_plus > 0.0) || !(c_minus > 0.0)) {
    throw ConfigError("custom operator: tail constants must be positive");
  }
  if (!(tail_cutoff > 0.0)) throw ConfigError("custom operator: tail_cutoff must be > 0");
  auto impl = std::make_shared<Impl>();
  impl->family = OperatorFamily::Custom;
  impl->f_fn = std::move(f);
  impl->g_fn = std::move(g);
  impl->finv_fn = std::move(f_inverse);
  impl->alpha = alpha;
  impl->c_plus = c_plus;
  impl->c_minus = c_minus;
  impl->tail_cutoff = tail_cutoff;
  return OperatorSpec(std::move(impl));
}

OperatorFamily OperatorSpec::family() const { return impl_->family; }
double OperatorSpec::gamma() const { return impl_->gamma; }
double OperatorSpec::alpha() const { return impl_->alpha; }
double OperatorSpec::c_plus() const { return impl_->c_plus; }
double OperatorSpec::c_minus() const { return impl_->c_minus; }
double OperatorSpec::tail_cutoff() const { return impl_->tail_cutoff; }

double OperatorSpec::f(double s) const { return impl_->f(s); }
double OperatorSpec::g(double p) const { return impl_->g(p); }

double OperatorSpec::f_inv(double v) const {
  if (impl_->family == OperatorFamily::PowerCurvature) {
    if (v == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(v), 1.0 / impl_->gamma), v);
  }
  if (impl_->finv_fn) return impl_->finv_fn(v);
  if (v == 0.0) return 0.0;
  // expanding bracket around 0 for an increasing f
  double lo = 0.0, hi = 0.0;
  if (v > 0.0) {
    hi = 1.0;
    while (impl_->f(hi) < v) {
      hi *= 2.0;
      if (hi > 1e300) throw BracketFailure("f_inv: no upper bracket; f not surjective");
    }
  } else {
    lo = -1.0;
    while (impl_->f(lo) > v) {
      lo *= 2.0;
      if (lo < -1e300) throw BracketFailure("f_inv: no lower bracket; f not surjective");
    }
  }
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (b - a <= 1e-12 * (1.0 + std::abs(mid))) break;
    if (impl_->f(mid) < v) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double OperatorSpec::G_raw(double p) const {
  if (!(impl_->alpha > 1.0)) {
    throw NonIntegrableTail("G: tail exponent <= 1, antiderivative undefined");
  }
  return impl_->G_eval(p);
}

double OperatorSpec::G_infinity_raw() const {
  if (!(impl_->alpha > 1.0)) {
    throw NonIntegrableTail("G: tail exponent <= 1, antiderivative undefined");
  }
  return impl_->g_table().total;
}

double OperatorSpec::G_inv_raw(double y) const {
  if (!(impl_->alpha > 1.0)) {
    throw NonIntegrableTail("G_inv: tail exponent <= 1, antiderivative undefined");
  }
  return impl_->G_inv_eval(y);
}

double OperatorSpec::G(double p) const {
  if (!(impl_->alpha > 2.0)) {
    throw NonIntegrableTail("G: tail exponent <= 2 (boundary blow-up regime)");
  }
  return impl_->G_eval(p);
}

double OperatorSpec::G_infinity() const {
  if (!(impl_->alpha > 2.0)) {
    throw NonIntegrableTail("G_infinity: tail exponent <= 2 (boundary blow-up regime)");
  }
  return impl_->g_table().total;
}

double OperatorSpec::G_inv(double y) const {
  if (!(impl_->alpha > 2.0)) {
    throw NonIntegrableTail("G_inv: tail exponent <= 2 (boundary blow-up regime)");
  }
  return impl_->G_inv_eval(y);
}

double OperatorSpec::f_lipschitz(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  if (impl_->family == OperatorFamily::PowerCurvature && impl_->gamma >= 1.0) {
    const double s = std::max(std::abs(lo), std::abs(hi));
    if (impl_->gamma == 1.0) return 1.0;
    return impl_->gamma * std::pow(s, impl_->gamma - 1.0);
  }
  // sampled difference quotients
  const int k = 128;
  double lip = 0.0;
  double prev_s = lo;
  double prev_f = impl_->f(lo);
  for (int i = 1; i <= k; ++i) {
    const double s = lo + (hi - lo) * static_cast<double>(i) / k;
    const double fs = impl_->f(s);
    if (s > prev_s) lip = std::max(lip, (fs - prev_f) / (s - prev_s));
    prev_s = s;
    prev_f = fs;
  }
  return lip;
}

AssumptionReport OperatorSpec::check_assumptions(int sample_count) const {
  if (sample_count < 100) {
    throw ConfigError("check_assumptions: sample_count must be >= 100");
  }
  AssumptionReport rep;
  rep.tail_integrable = impl_->alpha > 2.0;

  // sample set: uniform core plus log-spaced wings
  std::vector<double> ss;
  const int half = sample_count / 2;
  for (int i = 0; i <= half; ++i) {
    ss.push_back(-10.0 + 20.0 * static_cast<double>(i) / half);
  }
  for (int i = 0; i <= half; ++i) {
    const double mag = std::pow(10.0, 1.0 + 7.0 * static_cast<double>(i) / half);
    ss.push_back(mag);
    ss.push_back(-mag);
  }
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());

  rep.f_monotone_ok = std::abs(impl_->f(0.0)) <= 1e-14;
  rep.g_positive_ok = true;
  double prev_f = impl_->f(ss.front());
  for (std::size_t i = 1; i < ss.size(); ++i) {
    const double fs = impl_->f(ss[i]);
    if (!(fs > prev_f)) rep.f_monotone_ok = false;
    prev_f = fs;
  }
  for (double s : ss) {
    if (!(impl_->g(s) > 0.0)) rep.g_positive_ok = false;
  }

  if (!rep.g_positive_ok) {
    rep.fitted_tail_exponent = std::numeric_limits<double>::quiet_NaN();
    rep.tail_exponent_gap = std::numeric_limits<double>::quiet_NaN();
    rep.tail_matches_declared = false;
    return rep;
  }

  // log-log regression of g over |s| in [cutoff, 100*cutoff], one fit per
  // side, averaged (separate tail constants shift intercepts, not slopes)
  const int m = std::max(64, sample_count / 4);
  auto side_fit = [&](double sign) {
    std::vector<double> xs(m), ys(m);
    for (int i = 0; i < m; ++i) {
      const double mag =
          impl_->tail_cutoff * std::pow(100.0, static_cast<double>(i) / (m - 1));
      xs[i] = std::log(mag);
      ys[i] = std::log(impl_->g(sign * mag));
    }
    return -num::fit_slope(xs, ys);
  };
  rep.fitted_tail_exponent = 0.5 * (side_fit(1.0) + side_fit(-1.0));
  rep.tail_exponent_gap = std::abs(rep.fitted_tail_exponent - impl_->alpha);

  // the declared limit must hold in the far field
  const double far = 1000.0 * impl_->tail_cutoff;
  const double rp = std::pow(far, impl_->alpha) * impl_->g(far) / impl_->c_plus;
  const double rm = std::pow(far, impl_->alpha) * impl_->g(-far) / impl_->c_minus;
  rep.tail_matches_declared =
      std::abs(rp - 1.0) <= 1e-6 && std::abs(rm - 1.0) <= 1e-6;
  return rep;
}

}  // namespace capflow
