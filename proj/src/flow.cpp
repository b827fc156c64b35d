#include "ars2d/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ars2d {

namespace {

// Dormand-Prince RK5(4)7M coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense-output coefficients
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafe = 0.9, kFac1 = 0.2, kFac2 = 10.0, kBeta = 0.04;
constexpr long kMaxSteps = 4000000;

struct Stepper {
  const Rhs& rhs;
  std::size_t n;
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp, ysti, errv;

  explicit Stepper(const Rhs& f, std::size_t dim)
      : rhs(f), n(dim), k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim),
        ytmp(dim), ysti(dim), errv(dim) {}

  // One trial step from (t, y) with k1 = f(t, y) already loaded.
  // On return: ysti = 5th-order result, errv = scaled error vector, k7 = f at ysti.
  void stages(double t, const std::vector<double>& y, double h) {
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ysti[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(t + h, ysti, k7);
    for (std::size_t i = 0; i < n; ++i)
      errv[i] =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }

  double error_norm(const std::vector<double>& y, double tol) const {
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = tol + tol * std::max(std::abs(y[i]), std::abs(ysti[i]));
      const double e = errv[i] / sk;
      err += e * e;
    }
    return std::sqrt(err / static_cast<double>(n));
  }
};

double initial_step(const Rhs& rhs, const std::vector<double>& y0,
                    const std::vector<double>& f0, double t_end, double tol) {
  const std::size_t n = y0.size();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = tol + tol * std::abs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
  h = std::min(h, std::abs(t_end));
  // second-derivative probe
  std::vector<double> y1(n), f1(n);
  const double dir = t_end >= 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + dir * h * f0[i];
  rhs(dir * h, y1, f1);
  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = tol + tol * std::abs(y0[i]);
    const double d = (f1[i] - f0[i]) / sk;
    der2 += d * d;
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(der2, std::sqrt(dnf));
  const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
  return dir * std::min({100.0 * h, h1, std::abs(t_end)});
}

template <class OnStep>
void run_integration(const Rhs& rhs, std::vector<double>& y, double t_end, double tol,
                     OnStep&& on_step) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be positive");
  const std::size_t n = y.size();
  if (t_end == 0.0) return;
  const double dir = t_end > 0 ? 1.0 : -1.0;

  Stepper st(rhs, n);
  rhs(0.0, y, st.k1);
  double t = 0.0;
  double h = initial_step(rhs, y, st.k1, t_end, tol);
  double facold = 1e-4;
  const double expo1 = 0.2 - kBeta * 0.75;
  bool rejected = false;

  for (long step = 0; step < kMaxSteps; ++step) {
    if ((t + 1.01 * h - t_end) * dir > 0.0) h = t_end - t;
    if (std::abs(h) <= std::abs(t) * 1e-16 + 1e-300)
      throw IntegrationError("step size underflow", t);

    st.stages(t, y, h);
    const double err = st.error_norm(y, tol);
    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, kBeta);
    fac = std::max(1.0 / kFac2, std::min(1.0 / kFac1, fac / kSafe));
    double hnew = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      on_step(t, h, y, st);
      t += h;
      y = st.ysti;
      std::swap(st.k1, st.k7);
      if (std::abs(t - t_end) <= 1e-14 * std::max(1.0, std::abs(t_end))) return;
      if (rejected) hnew = dir * std::min(std::abs(hnew), std::abs(h));
      rejected = false;
      h = hnew;
    } else {
      rejected = true;
      h = h / std::min(1.0 / kFac1, fac11 / kSafe);
    }
    if (!std::isfinite(h) || !std::isfinite(err))
      throw IntegrationError("non-finite state encountered", t);
  }
  throw IntegrationError("maximum step count exceeded", t);
}

}  // namespace

std::vector<double> Trajectory::sample(double t) const {
  if (times_.empty()) throw std::runtime_error("empty trajectory");
  if (dense_.empty()) return states_.front();  // zero-length integration
  const double lo = std::min(times_.front(), times_.back());
  const double hi = std::max(times_.front(), times_.back());
  if (t < lo - 1e-12 || t > hi + 1e-12)
    throw std::out_of_range("sample time outside trajectory range");
  t = std::clamp(t, lo, hi);
  // locate the step containing t
  std::size_t idx;
  if (times_.back() >= times_.front()) {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - times_.begin())) - 1;
  } else {
    auto it = std::upper_bound(times_.begin(), times_.end(), t, std::greater<double>());
    idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - times_.begin())) - 1;
  }
  idx = std::min(idx, dense_.size() - 1);
  const double t0 = times_[idx], t1 = times_[idx + 1];
  const double h = t1 - t0;
  const double theta = h != 0.0 ? (t - t0) / h : 0.0;
  const double theta1 = 1.0 - theta;
  const auto& rc = dense_[idx];
  std::vector<double> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double r1 = rc[i], r2 = rc[dim_ + i], r3 = rc[2 * dim_ + i], r4 = rc[3 * dim_ + i],
                 r5 = rc[4 * dim_ + i];
    out[i] = r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
  }
  return out;
}

Trajectory integrate(const Rhs& rhs, std::vector<double> y0, double t_end, double tol) {
  Trajectory tr;
  tr.dim_ = y0.size();
  tr.times_.push_back(0.0);
  tr.states_.push_back(y0);
  const std::size_t n = y0.size();
  run_integration(rhs, y0, t_end, tol, [&](double t, double h, const std::vector<double>& y,
                                           const Stepper& st) {
    std::vector<double> rc(5 * n);
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = st.ysti[i] - y[i];
      const double bspl = h * st.k1[i] - ydiff;
      rc[i] = y[i];
      rc[n + i] = ydiff;
      rc[2 * n + i] = bspl;
      rc[3 * n + i] = ydiff - h * st.k7[i] - bspl;
      rc[4 * n + i] = h * (d1 * st.k1[i] + d3 * st.k3[i] + d4 * st.k4[i] + d5 * st.k5[i] +
                           d6 * st.k6[i] + d7 * st.k7[i]);
    }
    tr.dense_.push_back(std::move(rc));
    tr.times_.push_back(t + h);
    tr.states_.push_back(st.ysti);
  });
  return tr;
}

std::vector<double> integrate_to(const Rhs& rhs, std::vector<double> y0, double t_end,
                                 double tol) {
  run_integration(rhs, y0, t_end, tol, [](double, double, const std::vector<double>&,
                                          const Stepper&) {});
  return y0;
}

Rhs ars_flow(const Model& m) {
  return [m](double, const std::vector<double>& y, std::vector<double>& dy) {
    const CotangentState s{y[0], y[1], y[2], y[3]};
    const CotangentState d = ars_rhs(m, s);
    dy[0] = d.y;
    dy[1] = d.z;
    dy[2] = d.p_y;
    dy[3] = d.p_z;
  };
}

Rhs lifted_flow(const Model& m) {
  return [m](double, const std::vector<double>& y, std::vector<double>& dy) {
    const LiftedState s{y[0], y[1], y[2], y[3], y[4], y[5]};
    const LiftedState d = lifted_rhs_order0(m, s);
    dy[0] = d.x;
    dy[1] = d.y;
    dy[2] = d.z;
    dy[3] = d.p_x;
    dy[4] = d.p_y;
    dy[5] = d.p_z;
  };
}

Rhs grushin_flow() {
  return [](double, const std::vector<double>& y, std::vector<double>& dy) {
    const auto d = grushin_rhs({y[0], y[1], y[2], y[3]});
    std::copy(d.begin(), d.end(), dy.begin());
  };
}

Rhs heisenberg_flow() {
  return [](double, const std::vector<double>& y, std::vector<double>& dy) {
    const auto d = heisenberg_rhs({y[0], y[1], y[2], y[3], y[4], y[5]});
    std::copy(d.begin(), d.end(), dy.begin());
  };
}

Rhs ars_variational_flow(const Model& m) {
  return [m](double, const std::vector<double>& y, std::vector<double>& dy) {
    const CotangentState s{y[0], y[1], y[2], y[3]};
    const CotangentState d = ars_rhs(m, s);
    dy[0] = d.y;
    dy[1] = d.z;
    dy[2] = d.p_y;
    dy[3] = d.p_z;
    const auto A = ars_rhs_jacobian(m, s);
    // two variation columns stored row-major after the base state
    for (int col = 0; col < 2; ++col) {
      double v[4];
      for (int r = 0; r < 4; ++r) v[r] = y[4 + 2 * r + col];
      for (int r = 0; r < 4; ++r) {
        double acc = 0.0;
        for (int cidx = 0; cidx < 4; ++cidx) acc += A[4 * r + cidx] * v[cidx];
        dy[4 + 2 * r + col] = acc;
      }
    }
  };
}

std::pair<double, double> exp_map(const Model& m, double p_y0, double p_z0, double t,
                                  double tol) {
  const CotangentState s = exp_map_state(m, p_y0, p_z0, t, tol);
  return {s.y, s.z};
}

CotangentState exp_map_state(const Model& m, double p_y0, double p_z0, double t, double tol) {
  const auto y = integrate_to(ars_flow(m), {0.0, 0.0, p_y0, p_z0}, t, tol);
  return {y[0], y[1], y[2], y[3]};
}

namespace {

std::vector<double> variational_init(double p_y0, double p_z0) {
  std::vector<double> y(12, 0.0);
  y[2] = p_y0;
  y[3] = p_z0;
  y[4 + 2 * 2 + 0] = 1.0;  // dp_y/dp_y0
  y[4 + 2 * 3 + 1] = 1.0;  // dp_z/dp_z0
  return y;
}

double det_from_state(const Model& m, const std::vector<double>& y) {
  const CotangentState s{y[0], y[1], y[2], y[3]};
  const CotangentState d = ars_rhs(m, s);
  const double dy_dpz = y[4 + 2 * 0 + 1];
  const double dz_dpz = y[4 + 2 * 1 + 1];
  return d.y * dz_dpz - d.z * dy_dpz;
}

// Shared grid-scan + bisection for a scalar det(t).
std::optional<double> first_sign_change(const std::function<double(double)>& det, double t_max,
                                        double tol, int grid) {
  double t_prev = 0.0, d_prev = 0.0;
  bool have_prev = false;
  for (int i = 1; i <= grid; ++i) {
    const double t = t_max * static_cast<double>(i) / grid;
    const double d = det(t);
    if (have_prev && d_prev != 0.0 && ((d_prev < 0 && d > 0) || (d_prev > 0 && d < 0))) {
      double a = t_prev, b = t, fa = d_prev;
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = det(mid);
        if (fm == 0.0) return mid;
        if ((fa < 0) == (fm < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    if (d == 0.0 && have_prev) return t;
    t_prev = t;
    d_prev = d;
    have_prev = true;
  }
  return std::nullopt;
}

}  // namespace

double exp_jacobian_det(const Model& m, double p_y0, double p_z0, double t, double tol) {
  const auto y = integrate_to(ars_variational_flow(m), variational_init(p_y0, p_z0), t, tol);
  return det_from_state(m, y);
}

std::optional<double> first_conjugate_time(const Model& m, double p_y0, double p_z0,
                                           double t_max, double tol, int grid) {
  // One forward pass provides the scan values through dense output; the
  // bisection refines with exact re-integrations.
  const Trajectory tr = integrate(ars_variational_flow(m), variational_init(p_y0, p_z0),
                                  t_max, tol);
  double t_prev = 0.0, d_prev = 0.0;
  bool have_prev = false;
  for (int i = 1; i <= grid; ++i) {
    const double t = t_max * static_cast<double>(i) / grid;
    const double d = det_from_state(m, tr.sample(t));
    if (have_prev && d_prev != 0.0 && ((d_prev < 0 && d > 0) || (d_prev > 0 && d < 0))) {
      auto det = [&](double tt) { return exp_jacobian_det(m, p_y0, p_z0, tt, tol); };
      double a = t_prev, b = t, fa = det(a);
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = det(mid);
        if (fm == 0.0) return mid;
        if ((fa < 0) == (fm < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    t_prev = t;
    d_prev = d;
    have_prev = true;
  }
  return std::nullopt;
}

namespace {

// Grushin base + variation wrt p_y0: state (x, y, p_x, p_y, v[4]).
Rhs grushin_variational_flow() {
  return [](double, const std::vector<double>& y, std::vector<double>& dy) {
    const double x = y[0], px = y[2], py = y[3];
    dy[0] = px;
    dy[1] = x * x * py;
    dy[2] = -x * py * py;
    dy[3] = 0.0;
    const double vx = y[4], vpx = y[6], vpy = y[7];
    dy[4] = vpx;
    dy[5] = 2.0 * x * py * vx + x * x * vpy;
    dy[6] = -py * py * vx - 2.0 * x * py * vpy;
    dy[7] = 0.0;
  };
}

// Heisenberg base + variations wrt (theta, p_y0): state (q[6], J[6x2] row-major).
Rhs heisenberg_variational_flow() {
  return [](double, const std::vector<double>& y, std::vector<double>& dy) {
    const double x = y[0], px = y[3], py = y[4], pz = y[5];
    const double w = x * py + pz;
    dy[0] = px;
    dy[1] = w * x;
    dy[2] = w;
    dy[3] = -w * py;
    dy[4] = 0.0;
    dy[5] = 0.0;
    for (int col = 0; col < 2; ++col) {
      const double vx = y[6 + 2 * 0 + col];
      const double vpx = y[6 + 2 * 3 + col];
      const double vpy = y[6 + 2 * 4 + col];
      const double vpz = y[6 + 2 * 5 + col];
      const double vw = vx * py + x * vpy + vpz;
      dy[6 + 2 * 0 + col] = vpx;
      dy[6 + 2 * 1 + col] = vw * x + w * vx;
      dy[6 + 2 * 2 + col] = vw;
      dy[6 + 2 * 3 + col] = -vw * py - w * vpy;
      dy[6 + 2 * 4 + col] = 0.0;
      dy[6 + 2 * 5 + col] = 0.0;
    }
  };
}

}  // namespace

double grushin_jacobian_det(double p_x0, double p_y0, double t, double tol) {
  std::vector<double> y0(8, 0.0);
  y0[2] = p_x0;
  y0[3] = p_y0;
  y0[7] = 1.0;  // dp_y/dp_y0
  const auto y = integrate_to(grushin_variational_flow(), std::move(y0), t, tol);
  const double xdot = y[2];
  const double ydot = y[0] * y[0] * y[3];
  return xdot * y[5] - ydot * y[4];
}

std::optional<double> grushin_first_conjugate_time(double p_x0, double p_y0, double t_max,
                                                   double tol, int grid) {
  return first_sign_change(
      [&](double t) { return grushin_jacobian_det(p_x0, p_y0, t, tol); }, t_max, tol, grid);
}

double heisenberg_jacobian_det(double p_y0, double t, double tol) {
  std::vector<double> y0(18, 0.0);
  y0[3] = 1.0;  // p_x = cos(0)
  y0[4] = p_y0;
  // column 0: d/dtheta of (p_x, p_y, p_z) = (0, 0, 1); column 1: d/dp_y
  y0[6 + 2 * 5 + 0] = 1.0;
  y0[6 + 2 * 4 + 1] = 1.0;
  const auto y = integrate_to(heisenberg_variational_flow(), std::move(y0), t, tol);
  const double x = y[0], px = y[3], py = y[4], pz = y[5];
  const double w = x * py + pz;
  const double ct[3] = {px, w * x, w};
  // det of [ct | J_pos col0 | J_pos col1]
  const double j00 = y[6 + 0], j01 = y[6 + 1];
  const double j10 = y[6 + 2], j11 = y[6 + 3];
  const double j20 = y[6 + 4], j21 = y[6 + 5];
  return ct[0] * (j10 * j21 - j11 * j20) - j00 * (ct[1] * j21 - ct[2] * j11) +
         j01 * (ct[1] * j20 - ct[2] * j10);
}

std::vector<double> heisenberg_conjugate_times(double p_y0, double t_max, double tol,
                                               int grid) {
  std::vector<double> roots;
  double t_prev = 0.0, d_prev = 0.0;
  bool have_prev = false;
  for (int i = 1; i <= grid; ++i) {
    const double t = t_max * static_cast<double>(i) / grid;
    const double d = heisenberg_jacobian_det(p_y0, t, tol);
    if (have_prev && d_prev != 0.0 && ((d_prev < 0 && d > 0) || (d_prev > 0 && d < 0))) {
      double a = t_prev, b = t, fa = d_prev;
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = heisenberg_jacobian_det(p_y0, mid, tol);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fa < 0) == (fm < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    t_prev = t;
    d_prev = d;
    have_prev = true;
  }
  return roots;
}

}  // namespace ars2d
