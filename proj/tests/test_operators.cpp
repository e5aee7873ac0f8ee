#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "capflow/io.hpp"
#include "capflow/numerics.hpp"
#include "capflow/operators.hpp"

using namespace capflow;

namespace {

// independent quadrature oracle for integrals of g (simple global Simpson
// refinement, no shared code with the library's adaptive rule)
double oracle_integral(const OperatorSpec& op, double a, double b, int levels = 22) {
  double prev = 0.0;
  for (int lvl = 8; lvl <= levels; ++lvl) {
    const long n = 1L << lvl;  // panels
    double sum = op.g(a) + op.g(b);
    for (long i = 1; i < n; ++i) {
      const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
      sum += (i % 2 == 1 ? 4.0 : 2.0) * op.g(x);
    }
    const double val = sum * (b - a) / (3.0 * static_cast<double>(n));
    if (lvl > 8 && std::abs(val - prev) < 1e-13) return val;
    prev = val;
  }
  return prev;
}

}  // namespace

TEST_CASE("power family: construction and closed forms") {
  const auto op2 = OperatorSpec::power_curvature(2.0);
  CHECK(op2.alpha() == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(op2.c_plus() == 1.0);
  CHECK(op2.c_minus() == 1.0);

  const auto op1 = OperatorSpec::power_curvature(1.0);
  CHECK(op1.alpha() == doctest::Approx(2.0).epsilon(1e-15));  // fat-tail regime

  CHECK(op2.f(2.0) == doctest::Approx(4.0));
  CHECK(op2.f(0.0) == 0.0);
  CHECK(op2.f(-3.0) == doctest::Approx(-9.0));
  CHECK(OperatorSpec::power_curvature(3.0).f(2.0) == doctest::Approx(8.0));

  // g values
  CHECK(op2.g(0.0) == doctest::Approx(1.0));
  CHECK(op1.g(1.0) == doctest::Approx(0.5));
  // true tail value at p = 10: (1+100)^(-5/2); near the power model 1e-5
  CHECK(op2.g(10.0) == doctest::Approx(9.75431026575815249e-6).epsilon(1e-12));
  CHECK(std::abs(op2.g(10.0) - 1e-5) < 1e-4);
}

TEST_CASE("f inversion") {
  const auto op2 = OperatorSpec::power_curvature(2.0);
  CHECK(op2.f_inv(4.0 / 9.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(op2.f_inv(0.0) == 0.0);
  CHECK(op2.f_inv(-9.0) == doctest::Approx(-3.0).epsilon(1e-14));

  // custom path exercises the expanding bracket
  const auto cus = OperatorSpec::custom([](double s) { return s * s * s; },
                                        [](double p) { return std::exp(-p * p); },
                                        8.0, 1.0, 1.0);
  CHECK(cus.f_inv(27.0) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(cus.f_inv(-8.0) == doctest::Approx(-2.0).epsilon(1e-10));

  // bounded (non-surjective) f must report bracket failure
  const auto bad = OperatorSpec::custom([](double s) { return std::tanh(s); },
                                        [](double p) { return 1.0 / (1.0 + p * p); },
                                        2.0, 1.0, 1.0);
  CHECK_THROWS_AS((void)bad.f_inv(2.0), BracketFailure);
}

TEST_CASE("antiderivative G: frozen values and the total mass") {
  const auto op2 = OperatorSpec::power_curvature(2.0);
  CHECK(op2.G_infinity() == doctest::Approx(4.0 / 3.0).epsilon(1e-11));
  CHECK(op2.G(0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK(op2.G(-5.0) == doctest::Approx(3.7466908181066077e-4).epsilon(1e-9));
  CHECK(op2.G(-1.0) == doctest::Approx(0.077411015677877063).epsilon(1e-10));
  CHECK(op2.G(1.0) == doctest::Approx(1.2559223176554563).epsilon(1e-10));
  CHECK(op2.G(10.0) == doctest::Approx(1.3333087445961313).epsilon(1e-10));

  const auto op3 = OperatorSpec::power_curvature(3.0);
  // closed form 5*pi/16 for the total mass
  CHECK(op3.G_infinity() ==
        doctest::Approx(5.0 * 3.14159265358979323846 / 16.0).epsilon(1e-11));
  // independent quadrature oracle over the bulk
  const double core = oracle_integral(op3, -40.0, 40.0);
  CHECK(op3.G_infinity() == doctest::Approx(core).epsilon(1e-7));

  // fat tails are refused
  const auto op1 = OperatorSpec::power_curvature(1.0);
  CHECK_THROWS_AS((void)op1.G(0.0), NonIntegrableTail);
  CHECK_THROWS_AS((void)op1.G_infinity(), NonIntegrableTail);
  // but the ungated path knows the arctangent mass
  CHECK(op1.G_infinity_raw() == doctest::Approx(3.14159265358979).epsilon(1e-9));
}

TEST_CASE("G inversion: ends, seeds, and round trips") {
  const auto op = OperatorSpec::power_curvature(2.0);
  const double g_inf = op.G_infinity();

  CHECK(op.G_inv(2.0 / 3.0) == doctest::Approx(0.0).epsilon(1e-10));

  // near the top the tail-model inversion takes over
  const double y = g_inf - 1e-9;
  const double p = op.G_inv(y);
  const double p_model = std::pow(1.0 / (4.0 * 1e-9), 0.25);
  CHECK(std::abs(p - p_model) / p < 1e-3);
  // frozen oracle value; tolerance dominated by dp/dy = p^5 ~ 3e10 acting on
  // the ~1e-13 uncertainty of G_inf itself
  CHECK(p == doctest::Approx(125.740029309).epsilon(1e-4));

  CHECK_THROWS_AS((void)op.G_inv(-0.1), OutOfRange);
  CHECK_THROWS_AS((void)op.G_inv(g_inf), OutOfRange);

  // round trip over the full range
  for (int i = 1; i < 1000; ++i) {
    const double yy = g_inf * static_cast<double>(i) / 1000.0;
    CHECK(std::abs(op.G(op.G_inv(yy)) - yy) <= 1e-9);
  }
}

TEST_CASE("f round trip and monotonicity properties") {
  for (double gamma : {1.5, 2.0, 3.0, 5.0}) {
    const auto op = OperatorSpec::power_curvature(gamma);
    // log-spaced v in [-1e3, 1e3]
    double prev_f = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
      const double mag = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(i) / 999.0);
      for (double v : {-mag, mag}) {
        CHECK(std::abs(op.f(op.f_inv(v)) - v) <= 1e-10 * (1.0 + std::abs(v)));
      }
      const double fv = op.f(-1e3 + 2e3 * static_cast<double>(i) / 999.0);
      CHECK(fv > prev_f);
      prev_f = fv;
    }
  }
}

TEST_CASE("G monotone and symmetric for even g") {
  const auto op = OperatorSpec::power_curvature(2.0);
  const double g_inf = op.G_infinity();
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double p = -20.0 + 40.0 * static_cast<double>(i) / 200.0;
    const double val = op.G(p);
    CHECK(val > prev);
    prev = val;
    CHECK(std::abs(op.G(p) + op.G(-p) - g_inf) <= 1e-9);
  }
}

TEST_CASE("assumption audit") {
  const auto rep2 = OperatorSpec::power_curvature(2.0).check_assumptions(512);
  CHECK(rep2.f_monotone_ok);
  CHECK(rep2.g_positive_ok);
  CHECK(rep2.tail_integrable);
  CHECK(rep2.tail_matches_declared);
  CHECK(rep2.fitted_tail_exponent == doctest::Approx(5.0).epsilon(2e-3));
  CHECK(rep2.tail_exponent_gap < 0.01);

  const auto rep1 = OperatorSpec::power_curvature(1.0).check_assumptions(512);
  CHECK_FALSE(rep1.tail_integrable);  // the fat-tail variant of the audit
  CHECK(rep1.fitted_tail_exponent == doctest::Approx(2.0).epsilon(5e-3));
  CHECK(rep1.tail_exponent_gap < 0.01);

  // negative g flags positivity, not monotonicity
  const auto bad = OperatorSpec::custom([](double s) { return s; },
                                        [](double) { return -1.0; }, 2.0, 1.0, 1.0);
  const auto repb = bad.check_assumptions(128);
  CHECK(repb.f_monotone_ok);
  CHECK_FALSE(repb.g_positive_ok);

  CHECK_THROWS_AS((void)bad.check_assumptions(50), ConfigError);

  // tail consistency across the family
  for (double gamma : {1.5, 2.0, 3.0, 5.0}) {
    const auto rep = OperatorSpec::power_curvature(gamma).check_assumptions(256);
    CHECK(rep.tail_exponent_gap < 0.05);
  }
}

TEST_CASE("json round trip for power specs") {
  const auto op = OperatorSpec::power_curvature(2.5, 12.0);
  const std::string text = io::operator_to_json(op);
  const auto back = io::operator_from_json(text);
  CHECK(back.family() == OperatorFamily::PowerCurvature);
  CHECK(back.gamma() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(back.tail_cutoff() == doctest::Approx(12.0).epsilon(1e-15));

  const auto cus = OperatorSpec::custom([](double s) { return s; },
                                        [](double p) { return 1.0 / (1.0 + p * p); },
                                        2.0, 1.0, 1.0);
  CHECK_THROWS_AS((void)io::operator_from_json(io::operator_to_json(cus)), ConfigError);
  CHECK_THROWS_AS((void)io::operator_from_json("{not json"), ConfigError);
}
