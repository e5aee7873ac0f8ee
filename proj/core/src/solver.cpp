#include "capflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "capflow/traveling_wave.hpp"

namespace capflow {

namespace {

constexpr double kLambdaFloor = 1e-6;

struct PassResult {
  double max_g = 0.0;  // largest diffusivity weight in the state
  double rate_lo = std::numeric_limits<double>::infinity();
  double rate_hi = -std::numeric_limits<double>::infinity();
  bool any_finite = false;
};

/// Computes the nodal rates f(g(p_i) z_i). The stability data come along
/// for free: the realized-argument hull is f_inv of the rate hull (f is
/// monotone), so the kernels only track rates plus the diffusivity maximum.
template <class Kernel, class GMax>
PassResult operator_pass(const double* u, int n, double inv2h, double invh2,
                         Kernel&& kernel, GMax&& g_of_tracked, double* out) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double tracked = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) {
    const double p = (u[i + 1] - u[i - 1]) * inv2h;
    const double z = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * invh2;
    const double rate = kernel(p, z, tracked);
    out[i] = rate;
    lo = std::min(lo, rate);  // NaN rates fall through both reductions
    hi = std::max(hi, rate);
  }
  PassResult r;
  r.any_finite = lo <= hi;
  r.rate_lo = lo;
  r.rate_hi = hi;
  r.max_g = r.any_finite ? g_of_tracked(tracked) : 0.0;
  return r;
}

PassResult run_pass(const OperatorSpec& op, const std::vector<double>& u,
                    const Grid& grid, std::vector<double>& rate) {
  const double inv2h = 0.5 / grid.h;
  const double invh2 = 1.0 / (grid.h * grid.h);
  const double* p = u.data();
  double* out = rate.data();
  if (op.family() == OperatorFamily::PowerCurvature) {
    const double gam = op.gamma();
    // power kernels track min(1+p^2); g is even and decreasing in |p|
    if (gam == 1.0) {
      return operator_pass(
          p, grid.n, inv2h, invh2,
          [](double q, double z, double& wmin) {
            const double w = 1.0 + q * q;
            wmin = std::min(wmin, w);
            return z / w;
          },
          [](double wmin) { return 1.0 / wmin; }, out);
    }
    if (gam == 2.0) {
      return operator_pass(
          p, grid.n, inv2h, invh2,
          [](double q, double z, double& wmin) {
            const double w = 1.0 + q * q;
            wmin = std::min(wmin, w);
            const double w2 = w * w;
            return z * std::abs(z) / (w2 * w2 * w);  // f(g z) = z|z| w^-5
          },
          [](double wmin) { return 1.0 / (wmin * wmin * std::sqrt(wmin)); }, out);
    }
    if (gam == 3.0) {
      return operator_pass(
          p, grid.n, inv2h, invh2,
          [](double q, double z, double& wmin) {
            const double w = 1.0 + q * q;
            wmin = std::min(wmin, w);
            const double w4 = (w * w) * (w * w);
            const double w12 = w4 * w4 * w4;
            return z * z * z / w12;  // f(g z) = z^3 w^-12
          },
          [](double wmin) {
            const double w2 = wmin * wmin;
            return 1.0 / (w2 * w2);
          },
          out);
    }
    return operator_pass(
        p, grid.n, inv2h, invh2,
        [gam](double q, double z, double& wmin) {
          const double w = 1.0 + q * q;
          wmin = std::min(wmin, w);
          const double arg = std::pow(w, 0.5 * (1.0 - 3.0 * gam)) * z;
          return arg == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(arg), gam), arg);
        },
        [gam](double wmin) { return std::pow(wmin, 0.5 * (1.0 - 3.0 * gam)); }, out);
  }
  return operator_pass(
      p, grid.n, inv2h, invh2,
      [&op](double q, double z, double& gmax) {
        const double gp = op.g(q);
        gmax = std::min(gmax, -gp);  // tracked slot holds -max(g)
        return op.f(gp * z);
      },
      [](double neg_gmax) { return -neg_gmax; }, out);
}

double stable_dt(const OperatorSpec& op, const PassResult& r, OperatorBounds lb,
                 double h, double safety) {
  if (!r.any_finite) {
    throw DegenerateState("cfl_dt: no finite slopes/curvatures in state");
  }
  const double lo = op.f_inv(std::min(r.rate_lo, lb.lower));
  const double hi = op.f_inv(std::max(r.rate_hi, lb.upper));
  const double lf = std::max(op.f_lipschitz(lo, hi), 1e-300);
  const double mg = std::max(r.max_g, 1e-300);
  return safety * h * h / (2.0 * lf * mg);
}

/// Applies one explicit update in place, including the wall nodes.
/// Memoizes the profile increments: they vary slowly with lambda, so they
/// are recomputed only when lambda moves by more than 0.01%.
class Stepper {
 public:
  Stepper(const OperatorSpec& op, const Grid& grid, const BoundaryMode& mode,
          OperatorBounds lb)
      : op_(op), grid_(grid), mode_(mode), lb_(lb), rate_(grid.total(), 0.0) {}

  PassResult pass(const std::vector<double>& u) { return run_pass(op_, u, grid_, rate_); }

  /// Update in place; returns max |u| of the new state.
  double apply(std::vector<double>& u, double dt) {
    const int n = grid_.n;
    const double old_u1 = u[1];
    const double old_un = u[n];
    double biggest = 0.0;
    for (int i = 1; i <= n; ++i) {
      u[i] += dt * rate_[i];
      biggest = std::max(biggest, std::abs(u[i]));
    }

    if (mode_.kind == BoundaryMode::Kind::CopySpeed) {
      u[0] += u[1] - old_u1;
      u[n + 1] += u[n] - old_un;
      lam_left_ = lam_right_ = 0.0;
      return std::max({biggest, std::abs(u[0]), std::abs(u[n + 1])});
    }
    const double lo = std::max(lb_.lower, kLambdaFloor);
    const double hi = std::max(lb_.upper, lo);
    double lam_r, lam_l;
    if (mode_.policy == BoundaryMode::Lambda::Fixed) {
      lam_r = lam_l = mode_.fixed_lambda;
    } else {
      lam_r = std::clamp(rate_[n], lo, hi);
      lam_l = std::clamp(rate_[1], lo, hi);
    }
    u[n + 1] = u[n] + right_increment(lam_r);
    u[0] = u[1] + left_increment(lam_l);
    lam_left_ = lam_l;
    lam_right_ = lam_r;
    return std::max({biggest, std::abs(u[0]), std::abs(u[n + 1])});
  }

  double rate_at(int i) const { return rate_[i]; }
  double lambda_left() const { return lam_left_; }
  double lambda_right() const { return lam_right_; }

 private:
  double right_increment(double lam) {
    if (!(std::abs(lam - memo_lam_r_) <= 1e-4 * memo_lam_r_)) {
      memo_inc_r_ = boundary_increment(op_, grid_.b, grid_.h, lam);
      memo_lam_r_ = lam;
    }
    return memo_inc_r_;
  }
  double left_increment(double lam) {
    if (!(std::abs(lam - memo_lam_l_) <= 1e-4 * memo_lam_l_)) {
      memo_inc_l_ = boundary_increment_left(op_, grid_.b, grid_.h, lam);
      memo_lam_l_ = lam;
    }
    return memo_inc_l_;
  }

  const OperatorSpec& op_;
  Grid grid_;
  BoundaryMode mode_;
  OperatorBounds lb_;
  std::vector<double> rate_;
  double memo_lam_r_ = -1.0, memo_inc_r_ = 0.0;
  double memo_lam_l_ = -1.0, memo_inc_l_ = 0.0;
  double lam_left_ = 0.0, lam_right_ = 0.0;
};

}  // namespace

Grid make_grid(double b, int n) {
  if (!(b > 0.0)) throw BadDimension("make_grid: b must be > 0");
  if (n < 8) throw BadDimension("make_grid: need at least 8 interior nodes");
  return Grid{b, n, 2.0 * b / static_cast<double>(n + 1)};
}

FieldState regularize_initial(const std::function<double(double)>& u0, double eps,
                              const OperatorSpec& op, const Grid& grid) {
  if (!(op.alpha() > 2.0)) {
    throw NonIntegrableTail("regularize_initial: requires tail exponent > 2");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ConfigError("regularize_initial: eps must be in (0,1)");
  }
  const double b = grid.b;
  const double beta = (op.alpha() - 2.0) / (op.alpha() - 1.0);
  const double sigma = 0.5 * eps * b / (1.0 - eps);

  // smooth bump kernel on [-1,1], self-normalized Simpson weights
  constexpr int kPanels = 128;
  FieldState st{grid, std::vector<double>(grid.total(), 0.0), 0.0};
  for (int i = 0; i < grid.total(); ++i) {
    const double x = grid.x(i);
    const double cusp = -std::pow(std::max(b * b - x * x, 0.0) / (2.0 * b), beta);
    double acc = 0.0, norm = 0.0;
    for (int j = 0; j <= kPanels; ++j) {
      const double s = -1.0 + 2.0 * static_cast<double>(j) / kPanels;
      const double one_minus = 1.0 - s * s;
      if (one_minus <= 0.0) continue;  // kernel vanishes at the ends
      const double w = (j == 0 || j == kPanels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      const double rho = w * std::exp(-1.0 / one_minus);
      acc += rho * u0((1.0 - eps) * (x - sigma * s));
      norm += rho;
    }
    st.u[i] = eps * cusp + acc / norm;
  }
  return st;
}

double discrete_operator(const OperatorSpec& op, const FieldState& state, int i) {
  const int n = state.grid.n;
  if (i < 1 || i > n) throw OutOfRange("discrete_operator: interior index required");
  const double h = state.grid.h;
  const double p = (state.u[i + 1] - state.u[i - 1]) / (2.0 * h);
  const double z = (state.u[i + 1] - 2.0 * state.u[i] + state.u[i - 1]) / (h * h);
  return op.f(op.g(p) * z);
}

OperatorBounds discrete_operator_range(const OperatorSpec& op, const FieldState& state) {
  OperatorBounds r{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
  for (int i = 1; i <= state.grid.n; ++i) {
    const double v = discrete_operator(op, state, i);
    r.lower = std::min(r.lower, v);
    r.upper = std::max(r.upper, v);
  }
  return r;
}

double cfl_dt(const OperatorSpec& op, const FieldState& state, OperatorBounds lb,
              double safety) {
  if (!(safety > 0.0 && safety <= 1.0)) {
    throw ConfigError("cfl_dt: safety must be in (0,1]");
  }
  std::vector<double> rate(state.grid.total(), 0.0);
  const PassResult r = run_pass(op, state.u, state.grid, rate);
  return stable_dt(op, r, lb, state.grid.h, safety);
}

FieldState step(const OperatorSpec& op, const FieldState& state, double dt,
                const BoundaryMode& mode, OperatorBounds lb) {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be > 0");
  Stepper stepper(op, state.grid, mode, lb);
  const PassResult r = stepper.pass(state.u);
  const double bound = stable_dt(op, r, lb, state.grid.h, 1.0);
  if (dt > bound * (1.0 + 1e-9)) {
    throw CflViolation("step: dt exceeds the stability bound");
  }
  FieldState next = state;
  stepper.apply(next.u, dt);
  next.t = state.t + dt;
  return next;
}

Trajectory evolve(const OperatorSpec& op, FieldState state, double t_final,
                  const BoundaryMode& mode, OperatorBounds lb, double snapshot_every) {
  if (!(t_final > state.t)) throw ConfigError("evolve: t_final must exceed state.t");
  Trajectory traj;
  traj.grid = state.grid;
  traj.dt_min = std::numeric_limits<double>::infinity();
  traj.dt_max = 0.0;

  Stepper stepper(op, state.grid, mode, lb);
  auto emit = [&](double lam_l, double lam_r) {
    traj.snapshots.push_back({state.t, state.u});
    traj.lambda_left.push_back(lam_l);
    traj.lambda_right.push_back(lam_r);
  };
  emit(0.0, 0.0);

  double next_snap = snapshot_every > 0.0 ? state.t + snapshot_every
                                          : std::numeric_limits<double>::infinity();
  while (state.t < t_final) {
    const double target = std::min(next_snap, t_final);
    const PassResult r = stepper.pass(state.u);
    const double dt_stable = stable_dt(op, r, lb, state.grid.h, 0.9);
    const bool clipped = dt_stable >= target - state.t;
    const double dt = clipped ? target - state.t : dt_stable;
    const double biggest = stepper.apply(state.u, dt);
    state.t = clipped ? target : state.t + dt;
    ++traj.steps;
    traj.dt_min = std::min(traj.dt_min, dt);
    traj.dt_max = std::max(traj.dt_max, dt);

    if (biggest > kBlowupSentinel) {
      traj.blowup = BlowupEvent{state.t, biggest};
      emit(stepper.lambda_left(), stepper.lambda_right());
      return traj;
    }
    if (clipped) {
      emit(stepper.lambda_left(), stepper.lambda_right());
      if (target == next_snap) next_snap += snapshot_every;
    }
  }
  return traj;
}

}  // namespace capflow
