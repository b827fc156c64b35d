#include "ars2d/loci.hpp"

#include <algorithm>
#include <cmath>

#include "ars2d/elliptic.hpp"
#include "ars2d/flow.hpp"

namespace ars2d {

namespace {

double branch_sign(Branch b) { return b == Branch::Upper ? 1.0 : -1.0; }

struct Vec2 {
  double y, z;
};

Vec2 endpoint(const Model& m, double p_y0, double p_z0, double t, double tol) {
  const auto e = exp_map(m, p_y0, p_z0, t, tol);
  return {e.first, e.second};
}

}  // namespace

std::vector<FrontPoint> compute_front(const Model& m, double t,
                                      const std::vector<double>& p_z0_grid,
                                      const std::vector<int>& signs, double tol) {
  std::vector<FrontPoint> out;
  out.reserve(signs.size() * p_z0_grid.size());
  for (int sign : signs) {
    for (double pz : p_z0_grid) {
      FrontPoint fp;
      fp.p_y0 = sign;
      fp.p_z0 = pz;
      fp.t = t;
      try {
        const auto e = exp_map(m, sign, pz, t, tol);
        fp.y = e.first;
        fp.z = e.second;
      } catch (const IntegrationError&) {
        fp.ok = false;
      }
      out.push_back(fp);
    }
  }
  return out;
}

CutPoint cut_point_pair(const Model& m, double eta0, Branch branch, double tol,
                        const std::optional<std::pair<double, double>>& seed) {
  if (!(eta0 > 0.0)) throw std::invalid_argument("cut_point_pair: eta0 must be > 0");
  const double K = quarter_period();
  const double sgn = branch_sign(branch);
  const double pz_plus = sgn / (eta0 * eta0);
  // endpoint accuracy must sit well below the matching tolerance
  const double itol = std::min(1e-13, tol * 0.01);

  double eta_m = seed ? seed->first : eta0;
  double t = seed ? seed->second : 2.0 * K * eta0;

  auto residual = [&](double em, double tt) -> Vec2 {
    const Vec2 p = endpoint(m, 1.0, pz_plus, tt, itol);
    const Vec2 q = endpoint(m, -1.0, sgn / (em * em), tt, itol);
    return {p.y - q.y, p.z - q.z};
  };
  auto norm = [](const Vec2& v) { return std::max(std::abs(v.y), std::abs(v.z)); };

  Vec2 F = residual(eta_m, t);
  for (int it = 0; it < 50 && norm(F) > tol; ++it) {
    // finite-difference 2x2 Jacobian
    const double he = 1e-7 * std::max(std::abs(eta_m), eta0);
    const double ht = 1e-7 * std::max(std::abs(t), K * eta0);
    const Vec2 Fe1 = residual(eta_m + he, t), Fe2 = residual(eta_m - he, t);
    const Vec2 Ft1 = residual(eta_m, t + ht), Ft2 = residual(eta_m, t - ht);
    const double a = (Fe1.y - Fe2.y) / (2 * he), b = (Ft1.y - Ft2.y) / (2 * ht);
    const double c = (Fe1.z - Fe2.z) / (2 * he), d = (Ft1.z - Ft2.z) / (2 * ht);
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det))
      throw NewtonError("singular matching Jacobian (try smaller eta0)", eta_m, t);
    double de = (-F.y * d + F.z * b) / det;
    double dt = (-a * F.z + c * F.y) / det;
    // trust region keeps iterates inside the shooting regime
    const double cap_e = 0.5 * std::max(eta_m, eta0);
    const double cap_t = 0.5 * std::max(t, K * eta0);
    const double over = std::max(std::abs(de) / cap_e, std::abs(dt) / cap_t);
    if (over > 1.0) {
      de /= over;
      dt /= over;
    }
    // step halving
    double lam = 1.0;
    bool moved = false;
    for (int half = 0; half < 30; ++half) {
      const double em_n = eta_m + lam * de;
      const double t_n = t + lam * dt;
      if (em_n > 0.0 && t_n > 0.0) {
        const Vec2 Fn = residual(em_n, t_n);
        if (norm(Fn) < norm(F)) {
          eta_m = em_n;
          t = t_n;
          F = Fn;
          moved = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!moved)
      throw NewtonError("Newton stalled (try smaller eta0)", eta_m, t);
  }
  if (norm(F) > tol)
    throw NewtonError("Newton did not reach tolerance (try smaller eta0)", eta_m, t);

  const Vec2 p = endpoint(m, 1.0, pz_plus, t, itol);
  CutPoint cp;
  cp.y = p.y;
  cp.z = p.z;
  cp.t = t;
  cp.eta_plus = eta0;
  cp.eta_minus = eta_m;
  cp.branch = branch;
  cp.residual = norm(F);
  return cp;
}

std::vector<CutPoint> cut_locus(const Model& m, const std::vector<double>& eta0_list,
                                Branch branch, double tol) {
  std::vector<CutPoint> out;
  out.reserve(eta0_list.size());
  // continuation: the previous solution, rescaled to each new eta0, seeds the next solve
  std::optional<std::pair<double, double>> ratios;  // (eta_minus, t) per unit eta_plus
  for (double eta0 : eta0_list) {
    std::optional<std::pair<double, double>> seed;
    if (ratios) seed = {ratios->first * eta0, ratios->second * eta0};
    const CutPoint cp = cut_point_pair(m, eta0, branch, tol, seed);
    ratios = {cp.eta_minus / cp.eta_plus, cp.t / cp.eta_plus};
    out.push_back(cp);
  }
  return out;
}

std::vector<ConjugatePoint> conjugate_locus(const Model& m,
                                            const std::vector<double>& eta_list,
                                            double tol) {
  const double K = quarter_period();
  std::vector<ConjugatePoint> out;
  for (double eta : eta_list) {
    for (int sp : {+1, -1}) {
      for (int sl : {+1, -1}) {
        const double pz = sl / (eta * eta);
        const double t_max = 4.0 * K * eta;
        const auto t_star = first_conjugate_time(m, sp, pz, t_max, tol);
        if (!t_star) continue;  // reported per-point by absence
        const auto e = exp_map(m, sp, pz, *t_star, std::min(tol, 1e-12));
        ConjugatePoint cj;
        cj.y = e.first;
        cj.z = e.second;
        cj.t = *t_star;
        cj.p_y0 = sp;
        cj.p_z0 = pz;
        out.push_back(cj);
      }
    }
  }
  return out;
}

namespace {

// Corner of the sphere of radius r on one branch: both families at the
// common fixed time r, unknowns (eta_plus, eta_minus).
struct Corner {
  double eta_plus, eta_minus;
  double y, z;
};

std::optional<Corner> sphere_corner(const Model& m, double r, Branch branch, double tol) {
  const double K = quarter_period();
  const double sgn = branch_sign(branch);
  const double itol = std::min(1e-12, tol * 0.1);
  double ep = r / (2.0 * K), em = r / (2.0 * K);

  auto residual = [&](double a, double b) -> Vec2 {
    const Vec2 p = endpoint(m, 1.0, sgn / (a * a), r, itol);
    const Vec2 q = endpoint(m, -1.0, sgn / (b * b), r, itol);
    return {p.y - q.y, p.z - q.z};
  };
  auto norm = [](const Vec2& v) { return std::max(std::abs(v.y), std::abs(v.z)); };

  Vec2 F = residual(ep, em);
  for (int it = 0; it < 50 && norm(F) > tol; ++it) {
    const double h1 = 1e-7 * ep, h2 = 1e-7 * em;
    const Vec2 Fa1 = residual(ep + h1, em), Fa2 = residual(ep - h1, em);
    const Vec2 Fb1 = residual(ep, em + h2), Fb2 = residual(ep, em - h2);
    const double a = (Fa1.y - Fa2.y) / (2 * h1), b = (Fb1.y - Fb2.y) / (2 * h2);
    const double c = (Fa1.z - Fa2.z) / (2 * h1), d = (Fb1.z - Fb2.z) / (2 * h2);
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const double de = (-F.y * d + F.z * b) / det;
    const double dm = (-a * F.z + c * F.y) / det;
    double lam = 1.0;
    bool moved = false;
    for (int half = 0; half < 30; ++half) {
      const double ep_n = ep + lam * de, em_n = em + lam * dm;
      if (ep_n > 0.0 && em_n > 0.0) {
        const Vec2 Fn = residual(ep_n, em_n);
        if (norm(Fn) < norm(F)) {
          ep = ep_n;
          em = em_n;
          F = Fn;
          moved = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!moved) return std::nullopt;
  }
  if (norm(F) > tol) return std::nullopt;
  const Vec2 p = endpoint(m, 1.0, sgn / (ep * ep), r, itol);
  return Corner{ep, em, p.y, p.z};
}

}  // namespace

SphereCurve sphere(const Model& m, double r, int resolution, double tol) {
  if (resolution < 8) resolution = 8;
  SphereCurve curve;
  const double itol = std::min(1e-12, tol * 0.1);

  const auto up = sphere_corner(m, r, Branch::Upper, tol);
  const auto lo = sphere_corner(m, r, Branch::Lower, tol);
  if (!up || !lo) {
    // unmatched cut pairs: raw front, flagged
    curve.matched = false;
    const double pz_max = std::pow(2.0 * quarter_period() / r, 2);
    for (int sp : {+1, -1}) {
      for (int i = 0; i <= resolution; ++i) {
        const double pz = -pz_max + 2.0 * pz_max * static_cast<double>(i) / resolution;
        const auto e = exp_map(m, sp, sp > 0 ? pz : -pz, r, itol);
        curve.points.push_back(e);
      }
    }
    return curve;
  }
  curve.corners = {{up->y, up->z}, {lo->y, lo->z}};

  // optimal p_z0 bands at radius r
  const double pz_up_plus = 1.0 / (up->eta_plus * up->eta_plus);
  const double pz_lo_plus = -1.0 / (lo->eta_plus * lo->eta_plus);
  const double pz_up_minus = 1.0 / (up->eta_minus * up->eta_minus);
  const double pz_lo_minus = -1.0 / (lo->eta_minus * lo->eta_minus);

  auto arc = [&](int sign, double pz_from, double pz_to) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(resolution + 1);
    for (int i = 0; i <= resolution; ++i) {
      const double pz = pz_from + (pz_to - pz_from) * static_cast<double>(i) / resolution;
      pts.push_back(exp_map(m, sign, pz, r, itol));
    }
    return pts;
  };

  // p_y0 = +1 arc runs upper corner -> lower corner; p_y0 = -1 closes the loop
  const auto arc_plus = arc(+1, pz_up_plus, pz_lo_plus);
  const auto arc_minus = arc(-1, pz_lo_minus, pz_up_minus);
  curve.points = arc_plus;
  curve.points.insert(curve.points.end(), arc_minus.begin() + 1, arc_minus.end());
  curve.points.push_back(curve.points.front());  // close
  return curve;
}

CuspFit fit_cusp(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw std::invalid_argument("fit_cusp: need at least 4 points");
  double ymin = 1e300, ymax = 0.0;
  double sy = 0.0, sz = 0.0;
  for (const auto& [y, z] : points) {
    if (y == 0.0 || z == 0.0) throw std::invalid_argument("fit_cusp: points must avoid axes");
    ymin = std::min(ymin, std::abs(y));
    ymax = std::max(ymax, std::abs(y));
    sy += y;
    sz += z;
  }
  if (ymax / ymin < 4.0)
    throw std::invalid_argument("fit_cusp: degenerate spread (max|y|/min|y| < 4)");

  const double n = static_cast<double>(points.size());
  double sx = 0.0, sv = 0.0, sxx = 0.0, sxv = 0.0;
  for (const auto& [y, z] : points) {
    const double lx = std::log(std::abs(y));
    const double lv = std::log(std::abs(z));
    sx += lx;
    sv += lv;
    sxx += lx * lx;
    sxv += lx * lv;
  }
  const double a = (n * sxv - sx * sv) / (n * sxx - sx * sx);
  const double b = (sv - a * sx) / n;

  CuspFit fit;
  fit.exponent = a;
  fit.coefficient = (sz >= 0 ? 1.0 : -1.0) * std::exp(b);
  fit.alpha = (sy >= 0 ? 1.0 : -1.0) * std::exp(2.0 * b);
  return fit;
}

}  // namespace ars2d
