#include "ars2d/perturb.hpp"

#include <cmath>
#include <stdexcept>

#include "ars2d/elliptic.hpp"

namespace ars2d {

PerturbState PerturbState::from_vector(const std::vector<double>& v) {
  PerturbState s;
  s.Y0 = v[0];
  s.Z0 = v[1];
  s.PY0 = v[2];
  s.PZ0 = v[3];
  s.Y1 = v[4];
  s.Z1 = v[5];
  s.PY1 = v[6];
  s.PZ1 = v[7];
  s.g1 = v[8];
  s.g2 = v[9];
  s.g3 = v[10];
  return s;
}

namespace {

Rhs expansion_flow(const Model& m) {
  const double eps = m.epsilon();
  const double epsp = m.epsilon_prime();
  return [eps, epsp](double, const std::vector<double>& v, std::vector<double>& dv) {
    const double Y0 = v[0], Z0 = v[1], PY0 = v[2], PZ0 = v[3];
    const double Y1 = v[4], PY1 = v[6], PZ1 = v[7];
    const double g1 = v[8], g3 = v[10];
    const double Y0_2 = Y0 * Y0;
    const double Y0_3 = Y0_2 * Y0;
    const double Y0_4 = Y0_2 * Y0_2;
    const double Y0_5 = Y0_4 * Y0;
    const double PZ0_2 = PZ0 * PZ0;
    dv[0] = PY0;
    dv[1] = PZ0 * Y0_4 / 4.0;
    dv[2] = -PZ0_2 * Y0_3 / 2.0;
    dv[3] = 0.0;
    dv[4] = PY1;
    dv[5] = 0.25 * PZ1 * Y0_4 + PZ0 * (Y0_3 * Y1 + eps * Z0 * Y0_2 + epsp * Y0_5);
    dv[6] = -PZ0 * PZ1 * Y0_3 - PZ0_2 * (1.5 * Y0_2 * Y1 + eps * Z0 * Y0 + 2.5 * epsp * Y0_4);
    dv[7] = -0.5 * PZ0_2 * eps * Y0_2;
    dv[8] = g3;
    dv[9] = g1 * Y0_3 + Y0_5;
    dv[10] = -1.5 * Y0_2 * g1 - 2.5 * Y0_4;
  };
}

}  // namespace

Trajectory integrate_expansion(const Model& m, int sign_py, int sign_pz, double s_end,
                               double tol) {
  if (!(s_end > 0.0)) throw std::invalid_argument("integrate_expansion: s_end must be > 0");
  if (sign_py * sign_py != 1 || sign_pz * sign_pz != 1)
    throw std::invalid_argument("integrate_expansion: signs must be +-1");
  std::vector<double> v0(11, 0.0);
  v0[2] = sign_py;
  v0[3] = sign_pz;
  Trajectory tr = integrate(expansion_flow(m), std::move(v0), s_end, tol);
  tr.set_model_name(m.name());
  return tr;
}

GConstants g_constants(double tol) {
  auto compute = [](double t) {
    const Trajectory tr =
        integrate_expansion(Model::nilpotent(), 1, 1, 2.0 * quarter_period(), t);
    const PerturbState s = PerturbState::from_vector(tr.back_state());
    return GConstants{s.g1, s.g2, s.g3};
  };
  if (tol == 1e-10) {
    static const GConstants cached = compute(1e-10);
    return cached;
  }
  return compute(tol);
}

double j_function(double s) {
  const double K = quarter_period();
  const Jacobi j = jacobi(K + s, modulus_half());
  const double sqrt2 = std::sqrt(2.0);
  const double Y0 = -sqrt2 * j.cn;
  const double Z0 = (s + 2.0 * j.sn * j.cn * j.dn) / 3.0;
  const double dY0 = sqrt2 * j.sn * j.dn;
  const double dZ0 = j.cn * j.cn * j.cn * j.cn;
  return Y0 * dZ0 - 3.0 * Z0 * dY0;
}

double j_function_derivative(double s) {
  // j' = (1/2) Y0^4 Y0' + (3/2) Z0 Y0^3, using Y0'' = -Y0^3/2, Z0' = Y0^4/4
  const double K = quarter_period();
  const Jacobi j = jacobi(K + s, modulus_half());
  const double sqrt2 = std::sqrt(2.0);
  const double Y0 = -sqrt2 * j.cn;
  const double Z0 = (s + 2.0 * j.sn * j.cn * j.dn) / 3.0;
  const double dY0 = sqrt2 * j.sn * j.dn;
  const double Y0_3 = Y0 * Y0 * Y0;
  return 0.5 * Y0_3 * Y0 * dY0 + 1.5 * Z0 * Y0_3;
}

JZero j_first_zero(double tol) {
  const double K = quarter_period();
  const int n = 200;
  double a = 2.0 * K, fa = j_function(a);
  for (int i = 1; i <= n; ++i) {
    const double b = 2.0 * K + 2.0 * K * static_cast<double>(i) / n;
    const double fb = j_function(b);
    if ((fa < 0) != (fb < 0)) {
      double lo = a, hi = b, flo = fa;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = j_function(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0) == (fm < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double s0 = 0.5 * (lo + hi);
      return {s0, j_function_derivative(s0)};
    }
    a = b;
    fa = fb;
  }
  throw std::runtime_error("j(s) has no sign change in (2K, 4K)");
}

std::pair<double, double> predicted_cut_point(const Model& m, double eta0, Branch branch) {
  if (!(eta0 > 0.0)) throw std::domain_error("predicted_cut_point: eta0 must be > 0");
  const GConstants g = g_constants();
  const double K = quarter_period();
  const double epsp = m.epsilon_prime();
  if (branch == Branch::Upper)
    return {eta0 * eta0 * epsp * (g.g1_2K - g.g2_2K), eta0 * eta0 * eta0 * 2.0 * K / 3.0};
  return {eta0 * eta0 * epsp * (g.g1_2K + g.g2_2K), -eta0 * eta0 * eta0 * 2.0 * K / 3.0};
}

double predicted_alpha(const Model& m, Branch branch) {
  const double epsp = m.epsilon_prime();
  if (epsp == 0.0)
    throw std::domain_error("predicted_alpha: cusp degenerates for epsilon' = 0");
  const GConstants g = g_constants();
  const double K = quarter_period();
  const double gg = branch == Branch::Upper ? g.g1_2K - g.g2_2K : g.g1_2K + g.g2_2K;
  const double denom = 9.0 * epsp * epsp * epsp * gg * gg * gg;
  return 4.0 * K * K / denom;
}

}  // namespace ars2d
