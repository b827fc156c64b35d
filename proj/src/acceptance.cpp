#include "ars2d/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "ars2d/closedform.hpp"
#include "ars2d/elliptic.hpp"
#include "ars2d/flow.hpp"
#include "ars2d/loci.hpp"
#include "ars2d/model.hpp"
#include "ars2d/perturb.hpp"
#include "json.hpp"

namespace ars2d {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

CriterionResult c1_elliptic_identities() {
  const auto t0 = Clock::now();
  std::mt19937 rng(20240517u);
  std::uniform_real_distribution<double> uk(0.0, 0.99), uu(-30.0, 30.0);
  double worst1 = 0.0, worst2 = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Modulus k(uk(rng));
    const Jacobi j = jacobi(uu(rng), k);
    worst1 = std::max(worst1, std::abs(j.sn * j.sn + j.cn * j.cn - 1.0));
    worst2 = std::max(worst2, std::abs(j.dn * j.dn + k.m() * j.sn * j.sn - 1.0));
  }
  const double k0_err = std::abs(complete_K(Modulus(0.0)) - kPi / 2.0);
  const double sec = seconds_since(t0);
  CriterionResult r{1, "elliptic identities", false, "", sec};
  r.pass = worst1 <= 1e-12 && worst2 <= 1e-12 && k0_err <= 1e-14 && sec < 1.0;
  r.detail = "max|sn^2+cn^2-1|=" + fmt(worst1) + " max|dn^2+k^2sn^2-1|=" + fmt(worst2) +
             " |K(0)-pi/2|=" + fmt(k0_err) + " runtime=" + fmt(sec) + "s";
  return r;
}

CriterionResult c2_nilpotent_oracle() {
  const auto t0 = Clock::now();
  const Model nil = Model::nilpotent();
  const double K = quarter_period();
  double worst = 0.0;
  for (double lambda : {0.25, 1.0, 4.0, 25.0}) {
    const double T = 4.0 * K / std::sqrt(lambda);
    const Trajectory tr = integrate(ars_flow(nil), {0.0, 0.0, 1.0, lambda}, T, 1e-12);
    const NilpotentGeodesicParams p{1.0, lambda};
    for (int i = 0; i <= 800; ++i) {
      const double t = T * static_cast<double>(i) / 800;
      const auto s = tr.sample(t);
      const auto [yc, zc] = nilpotent_geodesic(p, t);
      worst = std::max({worst, std::abs(s[0] - yc), std::abs(s[1] - zc)});
    }
  }
  const double sec = seconds_since(t0);
  CriterionResult r{2, "nilpotent oracle equivalence", worst <= 1e-8 && sec < 5.0, "", sec};
  r.detail = "sup|closed-form - integrated|=" + fmt(worst) + " runtime=" + fmt(sec) + "s";
  return r;
}

CriterionResult c3_cut_time() {
  const auto t0 = Clock::now();
  const Model nil = Model::nilpotent();
  const double K = quarter_period();
  double worst_rel = 0.0, worst_gap = 0.0;
  for (double lambda : {0.25, 1.0, 4.0}) {
    const double expect = 2.0 * K / std::sqrt(lambda);
    // first return of y to 0: bracket on a grid, then bisect
    auto y_at = [&](double t) {
      return integrate_to(ars_flow(nil), {0.0, 0.0, 1.0, lambda}, t, 1e-12)[0];
    };
    const double t_hi = 2.4 * K / std::sqrt(lambda);
    double a = 0.0, fa = 0.0, t_cut = -1.0;
    for (int i = 1; i <= 64; ++i) {
      const double b = t_hi * static_cast<double>(i) / 64;
      const double fb = y_at(b);
      if (i > 1 && fa != 0.0 && (fa < 0) != (fb < 0)) {
        double lo = a, hi = b, flo = fa;
        while (hi - lo > 1e-13) {
          const double mid = 0.5 * (lo + hi);
          const double fm = y_at(mid);
          if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        t_cut = 0.5 * (lo + hi);
        break;
      }
      a = b;
      fa = fb;
    }
    worst_rel = std::max(worst_rel, std::abs(t_cut - expect) / expect);
    const auto p = exp_map(nil, 1.0, lambda, expect, 1e-13);
    const auto q = exp_map(nil, -1.0, lambda, expect, 1e-13);
    worst_gap = std::max({worst_gap, std::abs(p.first - q.first), std::abs(p.second - q.second)});
  }
  CriterionResult r{3, "nilpotent cut time", worst_rel <= 1e-8 && worst_gap <= 1e-9, "",
                    seconds_since(t0)};
  r.detail = "max rel err(t_cut)=" + fmt(worst_rel) + " max pair gap=" + fmt(worst_gap);
  return r;
}

CriterionResult c4_conjugate_structure() {
  const auto t0 = Clock::now();
  const double K = quarter_period();
  const JZero jz = j_first_zero(1e-12);
  const double ratio = jz.s0 / K;
  const bool band_ok = ratio >= 2.9 && ratio <= 3.1;
  const bool slope_ok = std::abs(jz.j_prime_s0) > 1e-3;

  const Model nil = Model::nilpotent();
  const auto t1 = first_conjugate_time(nil, 1.0, 1.0, 4.0 * K, 1e-12);
  const auto t4 = first_conjugate_time(nil, 1.0, 4.0, 2.0 * K, 1e-12);
  const bool agree_ok = t1 && std::abs(*t1 - jz.s0) <= 1e-6;
  const bool scaling_ok = t1 && t4 && std::abs(*t4 - *t1 / 2.0) <= 1e-8;

  CriterionResult r{4, "conjugate structure", band_ok && slope_ok && agree_ok && scaling_ok,
                    "", seconds_since(t0)};
  r.detail = "s0=" + fmt(jz.s0) + " s0/K=" + fmt(ratio) + (band_ok ? "" : " [outside 2.9..3.1]") +
             " j'(s0)=" + fmt(jz.j_prime_s0) +
             " |t*(1)-s0|=" + fmt(t1 ? std::abs(*t1 - jz.s0) : -1.0) +
             " |t*(4)-t*(1)/2|=" + fmt(t1 && t4 ? std::abs(*t4 - *t1 / 2.0) : -1.0);
  return r;
}

CriterionResult c5_perturbation_constants() {
  const auto t0 = Clock::now();
  const GConstants g = g_constants(1e-10);
  const bool g1_ok = std::abs(g.g1_2K + 2.0 * kPi) <= 0.05 * 2.0 * kPi;
  const bool g2_ok = std::abs(g.g2_2K + kPi) <= 0.05 * kPi;
  const bool g3_ok = std::abs(g.g3_2K) <= 0.05 * std::abs(g.g1_2K);

  // sign_py flip: (Y0, PY0, Y1, PY1, g2) negate; (Z0, PZ0, Z1, PZ1, g1, g3) fixed
  const Model m = Model::order0(1.0, 0.0);
  const double s_end = 2.0 * quarter_period();
  const PerturbState a =
      PerturbState::from_vector(integrate_expansion(m, 1, 1, s_end, 1e-12).back_state());
  const PerturbState b =
      PerturbState::from_vector(integrate_expansion(m, -1, 1, s_end, 1e-12).back_state());
  double flip = 0.0;
  flip = std::max(flip, std::abs(a.Y0 + b.Y0));
  flip = std::max(flip, std::abs(a.PY0 + b.PY0));
  flip = std::max(flip, std::abs(a.Y1 + b.Y1));
  flip = std::max(flip, std::abs(a.PY1 + b.PY1));
  flip = std::max(flip, std::abs(a.g2 + b.g2));
  flip = std::max(flip, std::abs(a.Z0 - b.Z0));
  flip = std::max(flip, std::abs(a.PZ0 - b.PZ0));
  flip = std::max(flip, std::abs(a.Z1 - b.Z1));
  flip = std::max(flip, std::abs(a.PZ1 - b.PZ1));
  flip = std::max(flip, std::abs(a.g1 - b.g1));
  flip = std::max(flip, std::abs(a.g3 - b.g3));
  const bool flip_ok = flip <= 1e-10;

  CriterionResult r{5, "perturbation constants", g1_ok && g2_ok && g3_ok && flip_ok, "",
                    seconds_since(t0)};
  r.detail = "g1(2K)=" + fmt(g.g1_2K) + " g2(2K)=" + fmt(g.g2_2K) + " g3(2K)=" + fmt(g.g3_2K) +
             " flip residual=" + fmt(flip);
  return r;
}

CriterionResult c6_cut_cusp() {
  const auto t0 = Clock::now();
  const Model m = Model::order0(1.0, 1.0);
  const GConstants g = g_constants();
  const std::vector<double> etas{0.08, 0.06, 0.04, 0.02};

  bool ok = true;
  std::string detail;
  double alpha_fit[2] = {0.0, 0.0};
  int bi = 0;
  for (Branch br : {Branch::Upper, Branch::Lower}) {
    const auto pts = cut_locus(m, etas, br, 1e-11);
    std::vector<std::pair<double, double>> yz;
    for (const auto& c : pts) yz.push_back({c.y, c.z});
    const CuspFit fit = fit_cusp(yz);
    alpha_fit[bi] = fit.alpha;
    const bool exp_ok = std::abs(fit.exponent - 1.5) <= 0.1;

    const double lead =
        br == Branch::Upper ? m.epsilon_prime() * (g.g1_2K - g.g2_2K)
                            : m.epsilon_prime() * (g.g1_2K + g.g2_2K);
    const CutPoint& smallest = pts.back();
    const double ratio_y = smallest.y / (smallest.eta_plus * smallest.eta_plus);
    const bool lead_ok = std::abs(ratio_y - lead) <= 0.25 * std::abs(lead);

    ok = ok && exp_ok && lead_ok;
    detail += std::string(br == Branch::Upper ? "upper" : "lower") + ": exponent=" +
              fmt(fit.exponent) + (exp_ok ? "" : " [not 1.5+-0.1]") + " y/eta0^2=" +
              fmt(ratio_y) + " vs " + fmt(lead) + (lead_ok ? "" : " [>25% off]") + "; ";
    ++bi;
  }
  const double ratio = alpha_fit[0] / alpha_fit[1];
  const bool ratio_ok = std::abs(ratio - 27.0) <= 0.3 * 27.0;
  ok = ok && ratio_ok;
  const double sec = seconds_since(t0);
  ok = ok && sec < 120.0;
  CriterionResult r{6, "cut-locus cusp (eps=1, eps'=1)", ok, "", sec};
  r.detail = detail + "alpha1/alpha2=" + fmt(ratio) + (ratio_ok ? "" : " [not 27+-30%]") +
             " runtime=" + fmt(sec) + "s";
  return r;
}

CriterionResult c7_symmetric_degeneration() {
  const auto t0 = Clock::now();
  const Model m = Model::order0(1.0, 0.0);
  bool y_ok = true;
  double worst = 0.0;
  for (double eta0 : {0.05, 0.04, 0.03, 0.02}) {
    const CutPoint cp = cut_point_pair(m, eta0, Branch::Upper, 1e-12);
    const double bound = 0.05 * eta0 * eta0;
    worst = std::max(worst, std::abs(cp.y) / (eta0 * eta0));
    if (std::abs(cp.y) > bound) y_ok = false;
  }

  const SphereCurve sc = sphere(m, 0.3, 400, 1e-11);
  double sym = 0.0;
  if (!sc.matched) sym = 1e300;
  for (const auto& [y, z] : sc.points) {
    double best = 1e300;
    for (const auto& [y2, z2] : sc.points)
      best = std::min(best, std::hypot(y + y2, z - z2));
    sym = std::max(sym, best);
  }
  const bool sym_ok = sym <= 1e-6;

  CriterionResult r{7, "symmetric degeneration (eps'=0)", y_ok && sym_ok, "",
                    seconds_since(t0)};
  r.detail = "max |y_cut|/eta0^2=" + fmt(worst) + " (bound 0.05); sphere reflection gap=" +
             fmt(sym);
  return r;
}

CriterionResult c8_lift_projection() {
  const auto t0 = Clock::now();
  // projection of the lifted order-0 flow with p_x(0) = 0
  double proj = 0.0;
  for (const Model& m : {Model::nilpotent(), Model::order0(1.0, 1.0)}) {
    const double lambda = 1.0, T = 2.0;
    const Trajectory lift =
        integrate(lifted_flow(m), {0.0, 0.0, 0.0, 0.0, 1.0, lambda}, T, 1e-12);
    const Trajectory plane = integrate(ars_flow(m), {0.0, 0.0, 1.0, lambda}, T, 1e-12);
    for (int i = 0; i <= 200; ++i) {
      const double t = T * static_cast<double>(i) / 200;
      const auto a = lift.sample(t);
      const auto b = plane.sample(t);
      proj = std::max({proj, std::abs(a[1] - b[0]), std::abs(a[2] - b[1])});
    }
  }
  const bool proj_ok = proj <= 1e-10;

  // Grushin cut: first meeting of the symmetric pair, x_+(t) = x_-(t)
  auto xgap = [&](double t) {
    const auto a = integrate_to(grushin_flow(), {0.0, 0.0, 1.0, 1.0}, t, 1e-13);
    const auto b = integrate_to(grushin_flow(), {0.0, 0.0, -1.0, 1.0}, t, 1e-13);
    return a[0] - b[0];
  };
  double ga = 0.5, gfa = xgap(ga), t_cut = -1.0;
  for (int i = 1; i <= 80; ++i) {
    const double b = 0.5 + 3.5 * static_cast<double>(i) / 80;
    const double fb = xgap(b);
    if ((gfa < 0) != (fb < 0)) {
      double lo = ga, hi = b, flo = gfa;
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double fm = xgap(mid);
        if ((flo < 0) == (fm < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      t_cut = 0.5 * (lo + hi);
      break;
    }
    ga = b;
    gfa = fb;
  }
  const bool grushin_ok = t_cut > 0 && std::abs(t_cut - kPi) <= 1e-8;

  // Heisenberg conjugate: the det root solving (p_y t)/2 = tan((p_y t)/2)
  const double target = 8.986818915818128;
  const auto roots = heisenberg_conjugate_times(1.0, 10.0, 1e-12);
  double best = 1e300;
  for (double rt : roots) best = std::min(best, std::abs(rt - target));
  const bool heis_ok = best <= 1e-8;

  CriterionResult r{8, "lift/projection and Grushin-Heisenberg roots",
                    proj_ok && grushin_ok && heis_ok, "", seconds_since(t0)};
  r.detail = "max projection gap=" + fmt(proj) + " grushin |t_cut-pi|=" +
             fmt(t_cut > 0 ? std::abs(t_cut - kPi) : -1.0) +
             " heisenberg |root-8.986818915818128|=" + fmt(best);
  return r;
}

CriterionResult c9_energy(double tol) {
  const auto t0 = Clock::now();
  double worst = 0.0;

  auto drift_ars = [&](const Model& m, std::vector<double> y0, double T) {
    const Trajectory tr = integrate(ars_flow(m), std::move(y0), T, tol);
    const CotangentState s0{tr.front_state()[0], tr.front_state()[1], tr.front_state()[2],
                            tr.front_state()[3]};
    const double H0 = ars_hamiltonian(m, s0);
    for (const auto& v : tr.states()) {
      const CotangentState s{v[0], v[1], v[2], v[3]};
      worst = std::max(worst, std::abs(ars_hamiltonian(m, s) - H0));
    }
  };
  const double K = quarter_period();
  drift_ars(Model::nilpotent(), {0, 0, 1, 1}, 4.0 * K);
  drift_ars(Model::nilpotent(), {0, 0, 1, 25}, 4.0 * K / 5.0);
  drift_ars(Model::order0(1.0, 1.0), {0, 0, 1, 1.0 / (0.02 * 0.02)}, 2.0 * K * 0.02);
  drift_ars(Model::order0(1.0, 1.0), {0, 0, -1, -1.0 / (0.05 * 0.05)}, 2.0 * K * 0.05);

  {
    const Model m = Model::order0(1.0, 1.0);
    const Trajectory tr = integrate(lifted_flow(m), {0, 0, 0, 0.3, 1.0, 2.0}, 3.0, tol);
    const LiftedState s0{tr.front_state()[0], tr.front_state()[1], tr.front_state()[2],
                         tr.front_state()[3], tr.front_state()[4], tr.front_state()[5]};
    const double H0 = lifted_hamiltonian(m, s0);
    for (const auto& v : tr.states()) {
      const LiftedState s{v[0], v[1], v[2], v[3], v[4], v[5]};
      worst = std::max(worst, std::abs(lifted_hamiltonian(m, s) - H0));
    }
  }
  {
    const Trajectory tr = integrate(grushin_flow(), {0, 0, 1, 1}, 6.0, tol);
    const double H0 = grushin_hamiltonian({tr.front_state()[0], tr.front_state()[1],
                                           tr.front_state()[2], tr.front_state()[3]});
    for (const auto& v : tr.states())
      worst = std::max(worst, std::abs(grushin_hamiltonian({v[0], v[1], v[2], v[3]}) - H0));
  }

  CriterionResult r{9, "energy conservation", worst <= 100.0 * tol, "", seconds_since(t0)};
  r.detail = "max |H(t)-H(0)|=" + fmt(worst) + " bound=" + fmt(100.0 * tol);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(double tol) {
  std::vector<CriterionResult> out;
  out.push_back(c1_elliptic_identities());
  out.push_back(c2_nilpotent_oracle());
  out.push_back(c3_cut_time());
  out.push_back(c4_conjugate_structure());
  out.push_back(c5_perturbation_constants());
  out.push_back(c6_cut_cusp());
  out.push_back(c7_symmetric_degeneration());
  out.push_back(c8_lift_projection());
  out.push_back(c9_energy(tol));
  return out;
}

std::string acceptance_report_json(const std::vector<CriterionResult>& results) {
  nlohmann::json j;
  j["criteria"] = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    j["criteria"].push_back({{"id", r.id},
                             {"name", r.name},
                             {"pass", r.pass},
                             {"detail", r.detail},
                             {"seconds", r.seconds}});
    all = all && r.pass;
  }
  j["all_pass"] = all;
  return j.dump(2);
}

}  // namespace ars2d
