#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "capflow/operators.hpp"
#include "capflow/traveling_wave.hpp"

#ifdef CAPFLOW_HAVE_BOOST_MATH
#include <boost/math/quadrature/gauss_kronrod.hpp>
#endif

using namespace capflow;

namespace {

const OperatorSpec kOp2 = OperatorSpec::power_curvature(2.0);

}  // namespace

TEST_CASE("speed: closed-form values and the defining identity") {
  CHECK(solve_speed(kOp2, 1.0) == doctest::Approx(4.0 / 9.0).epsilon(1e-11));
  CHECK(solve_speed(kOp2, 2.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-11));
  CHECK_THROWS_AS((void)solve_speed(OperatorSpec::power_curvature(1.0), 1.0),
                  NonIntegrableTail);

  // frozen oracle speeds
  CHECK(solve_speed(OperatorSpec::power_curvature(1.5), 1.0) ==
        doctest::Approx(0.817111736121501949).epsilon(1e-10));
  CHECK(solve_speed(OperatorSpec::power_curvature(3.0), 1.0) ==
        doctest::Approx(0.118279558869551926).epsilon(1e-10));
  CHECK(solve_speed(OperatorSpec::power_curvature(1.5), 0.5) ==
        doctest::Approx(2.31114099839450736).epsilon(1e-10));
  CHECK(solve_speed(OperatorSpec::power_curvature(3.0), 2.0) ==
        doctest::Approx(0.0147849448586939908).epsilon(1e-10));

  for (double gamma : {1.5, 2.0, 3.0, 5.0}) {
    const auto op = OperatorSpec::power_curvature(gamma);
    for (double b : {0.5, 1.0, 2.0}) {
      const double c = solve_speed(op, b);
      CHECK(c > 0.0);
      CHECK(std::abs(2.0 * b * op.f_inv(c) - op.G_infinity()) <= 1e-9);
    }
  }

#ifdef CAPFLOW_HAVE_BOOST_MATH
  // independent quadrature route to the same speed (gamma = 2, b = 1)
  const auto g2 = [](double s) { return std::pow(1.0 + s * s, -2.5); };
  const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      g2, -std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity(), 12, 1e-13);
  const double c_oracle = std::pow(mass / 2.0, 2.0);
  CHECK(solve_speed(kOp2, 1.0) == doctest::Approx(c_oracle).epsilon(1e-10));
#endif
}

TEST_CASE("profile: frozen values, normalization, symmetry") {
  const WaveProfile wave = profile(kOp2, 1.0, 1025);
  REQUIRE(wave.xs.size() == 1025);
  CHECK(wave.xs.front() == -1.0);
  CHECK(wave.xs.back() == 1.0);
  CHECK(wave.ws[512] == 0.0);  // W(0) = 0 exactly by normalization

  // frozen oracle samples (30-digit quadrature of the slope law)
  CHECK(wave.ws[640] == doctest::Approx(0.021081172975141089).epsilon(1e-9));   // W(1/4)
  CHECK(wave.ws[768] == doctest::Approx(0.087675858481148233).epsilon(1e-9));   // W(1/2)
  CHECK(wave.ws[896] == doctest::Approx(0.21418379796782340).epsilon(1e-9));    // W(3/4)
  CHECK(wave.ws[1024] == doctest::Approx(0.5).epsilon(1e-10));                  // W(1) = 1/2

  // even g: symmetric profile
  for (std::size_t i = 0; i < wave.xs.size(); ++i) {
    CHECK(std::abs(wave.ws[i] - wave.ws[wave.xs.size() - 1 - i]) <= 1e-9);
  }
  // strict convexity of the sampled sequence
  for (std::size_t i = 1; i + 1 < wave.ws.size(); ++i) {
    CHECK(wave.ws[i + 1] - 2.0 * wave.ws[i] + wave.ws[i - 1] > 0.0);
  }
  CHECK(wave.holder_exponent == doctest::Approx(0.75).epsilon(1e-14));

  CHECK_THROWS_AS((void)profile(kOp2, 1.0, 8), BadDimension);
  CHECK_THROWS_AS((void)profile(OperatorSpec::power_curvature(1.0), 1.0, 257),
                  NonIntegrableTail);
}

TEST_CASE("profile: uniqueness across resolutions") {
  const WaveProfile coarse = profile(kOp2, 1.0, 257);
  const WaveProfile fine = profile(kOp2, 1.0, 513);
  for (int i = 0; i < 257; ++i) {
    CHECK(std::abs(coarse.ws[i] - fine.ws[2 * i]) <= 1e-9);
  }
}

TEST_CASE("profile derivative: closed form, oddness, range gate") {
  CHECK(profile_derivative(kOp2, 1.0, 0.0) == doctest::Approx(0.0).epsilon(1e-10));
  // frozen oracle value
  CHECK(profile_derivative(kOp2, 1.0, 0.999) ==
        doctest::Approx(4.3051507906896375).epsilon(1e-7));
  // large positive near the wall, matching the tail-inversion model once the
  // slope is deep in the tail
  const double a = kOp2.f_inv(solve_speed(kOp2, 1.0));
  const double x = 1.0 - 1e-5;
  const double p = profile_derivative(kOp2, 1.0, x);
  const double p_model =
      std::pow(1.0 / (4.0 * (kOp2.G_infinity() - a * (x + 1.0))), 0.25);
  CHECK(std::abs(p - p_model) / p < 1e-2);

  // odd in x for even g; strictly increasing
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < 64; ++i) {
    const double xi = -1.0 + 2.0 * static_cast<double>(i) / 64.0;
    const double d = profile_derivative(kOp2, 1.0, xi);
    CHECK(std::abs(d + profile_derivative(kOp2, 1.0, -xi)) <= 1e-9);
    CHECK(d > prev);
    prev = d;
  }
  CHECK_THROWS_AS((void)profile_derivative(kOp2, 1.0, 1.0), OutOfRange);
  CHECK_THROWS_AS((void)profile_derivative(kOp2, 1.0, -1.5), OutOfRange);
}

TEST_CASE("centered differences of the samples track the closed-form slope") {
  const WaveProfile wave = profile(kOp2, 1.0, 513);
  const double dx = wave.xs[1] - wave.xs[0];
  // away from the walls the slope is smooth; O(h^2) with a modest constant
  for (std::size_t i = 16; i + 16 < wave.xs.size(); ++i) {
    const double centered = (wave.ws[i + 1] - wave.ws[i - 1]) / (2.0 * dx);
    const double exact = profile_derivative(kOp2, 1.0, wave.xs[i]);
    const double wiggle = std::abs(wave.xs[i]) > 0.9 ? 50.0 : 5.0;
    CHECK(std::abs(centered - exact) <= wiggle * dx * dx + 1e-9);
  }
}

TEST_CASE("wave residual: magnitude and shift invariance") {
  const WaveProfile w257 = profile(kOp2, 1.0, 257);
  const double r257 = wave_residual(kOp2, w257);
  CHECK(r257 < 1e-2);

  const WaveProfile w1025 = profile(kOp2, 1.0, 1025);
  const double r1025 = wave_residual(kOp2, w1025);
  CHECK(r1025 < 1e-2);

  // the sampled residual near a Holder cusp is self-similar: with the fixed
  // 3-node exclusion it saturates at a resolution-independent plateau
  // instead of decaying (the acceptance runner reports the measured values)
  CHECK(r1025 < 2e-3);  // frozen plateau guard

  WaveProfile shifted = w257;
  for (double& w : shifted.ws) w += 17.5;
  CHECK(wave_residual(kOp2, shifted) ==
        doctest::Approx(r257).epsilon(1e-6));  // the residual sees derivatives only
}

TEST_CASE("holder fit: exponents for the power family and a linear graph") {
  const WaveProfile w2 = profile(kOp2, 1.0, 1025);
  CHECK(std::abs(holder_fit(w2) - 0.75) < 0.05);

  const auto op3 = OperatorSpec::power_curvature(3.0);
  const WaveProfile w3 = profile(op3, 1.0, 1025);
  CHECK(std::abs(holder_fit(w3) - 6.0 / 7.0) < 0.05);

  // a linear function is Lipschitz: sampled fit returns 1
  std::vector<double> xs(257), ws(257);
  for (int i = 0; i < 257; ++i) {
    xs[i] = -1.0 + 2.0 * i / 256.0;
    ws[i] = xs[i];
  }
  CHECK(holder_fit_samples(xs, ws) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("boundary increment: wave consistency, monotonicity, scaling") {
  const double c = solve_speed(kOp2, 1.0);
  const WaveProfile wave = profile(kOp2, 1.0, 1025);

  // at lambda = c the increment is exactly the wave's boundary rise
  for (int k : {1, 2, 8, 64}) {
    const double h = k * (wave.xs[1] - wave.xs[0]);
    const double inc = boundary_increment(kOp2, 1.0, h, c);
    const double rise = wave.ws.back() - wave.ws[wave.ws.size() - 1 - k];
    CHECK(inc == doctest::Approx(rise).epsilon(1e-8));
  }
  // frozen oracle increments at dyadic h
  CHECK(boundary_increment(kOp2, 1.0, 1.0 / 16, c) ==
        doctest::Approx(0.1164931474341553).epsilon(1e-10));
  CHECK(boundary_increment(kOp2, 1.0, 1.0 / 256, c) ==
        doctest::Approx(0.01588246803554974).epsilon(1e-10));
  CHECK(boundary_increment(kOp2, 1.0, 1.0 / 1024, c) ==
        doctest::Approx(0.005690037963269105).epsilon(1e-10));

  // increasing in lambda at fixed h
  double prev = -std::numeric_limits<double>::infinity();
  for (double lam : {0.05, 0.1, 0.2, 0.4, 4.0 / 9.0, 0.6, 1.0, 2.0}) {
    const double inc = boundary_increment(kOp2, 1.0, 1.0 / 64, lam);
    CHECK(inc > prev);
    prev = inc;
  }

  // cusp scaling: Delta(h, c) / h^(3/4) bounded above and below
  for (int j = 4; j <= 10; ++j) {
    const double h = std::pow(2.0, -j);
    const double ratio = boundary_increment(kOp2, 1.0, h, c) / std::pow(h, 0.75);
    CHECK(ratio > 0.5);
    CHECK(ratio < 1.5);
  }

  // symmetric family: left increment mirrors the right one
  CHECK(boundary_increment_left(kOp2, 1.0, 1.0 / 64, c) ==
        doctest::Approx(boundary_increment(kOp2, 1.0, 1.0 / 64, c)).epsilon(1e-9));

  CHECK_THROWS_AS((void)boundary_increment(kOp2, 1.0, 2.0, c), ConfigError);
  CHECK_THROWS_AS((void)boundary_increment(kOp2, 1.0, 0.1, -1.0), ConfigError);
}

TEST_CASE("rescaled profiles satisfy the slowed-down profile law") {
  // W_s(x) = s W(-b + (x+b)/s) has g(W_s') W_s'' = f_inv(c)/s
  const double b = 1.0;
  const double c = solve_speed(kOp2, b);
  const double a = kOp2.f_inv(c);
  const WaveProfile wave = profile(kOp2, b, 4097);
  const auto w_at = [&](double x) {
    // piecewise-linear read of the fine profile
    const double s = (x + b) / (2.0 * b) * 4096.0;
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), 4095);
    const double t = s - static_cast<double>(i);
    return (1.0 - t) * wave.ws[i] + t * wave.ws[i + 1];
  };
  for (double scale : {1.5, 2.0, 3.0}) {
    for (double x : {-0.5, 0.0, 0.5}) {
      const double d = 1.0 / 256.0;
      const auto ws_at = [&](double xx) { return scale * w_at(-b + (xx + b) / scale); };
      const double slope = (ws_at(x + d) - ws_at(x - d)) / (2.0 * d);
      const double curv = (ws_at(x + d) - 2.0 * ws_at(x) + ws_at(x - d)) / (d * d);
      CHECK(kOp2.g(slope) * curv ==
            doctest::Approx(a / scale).epsilon(2e-2));  // discretization tolerance
    }
  }
}
