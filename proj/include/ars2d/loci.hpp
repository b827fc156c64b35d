// ars2d - wave fronts, spheres, cut and conjugate loci by numerical shooting.

#ifndef ARS2D_LOCI_HPP
#define ARS2D_LOCI_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ars2d/model.hpp"
#include "ars2d/perturb.hpp"

namespace ars2d {

struct FrontPoint {
  double y = 0.0, z = 0.0;
  double p_y0 = 1.0;
  double p_z0 = 0.0;
  double t = 0.0;
  bool ok = true;  // per-point integration failures are recorded, not fatal
};

/// Meeting point of the two matched geodesics (p_y0 = +1, p_z0 = s/eta_plus^2)
/// and (p_y0 = -1, p_z0 = s/eta_minus^2), s = +-1 by branch, at common time t.
struct CutPoint {
  double y = 0.0, z = 0.0, t = 0.0;
  double eta_plus = 0.0, eta_minus = 0.0;
  Branch branch = Branch::Upper;
  double residual = 0.0;  // endpoint gap of the two geodesics
};

struct ConjugatePoint {
  double y = 0.0, z = 0.0, t = 0.0;
  double p_y0 = 1.0;
  double p_z0 = 0.0;
};

/// Thrown when the damped Newton matching fails; carries the last iterate.
class NewtonError : public std::runtime_error {
 public:
  NewtonError(const std::string& what, double eta_minus, double t)
      : std::runtime_error(what), eta_minus_(eta_minus), t_(t) {}
  double eta_minus() const { return eta_minus_; }
  double t() const { return t_; }

 private:
  double eta_minus_, t_;
};

/// Wave front at time t: one point per (sign, p_z0) pair.
std::vector<FrontPoint> compute_front(const Model& m, double t,
                                      const std::vector<double>& p_z0_grid,
                                      const std::vector<int>& signs, double tol = 1e-12);

/// Solve exp_+(t; eta0) = exp_-(t; eta_minus) for (eta_minus, t) with the
/// damped 2x2 Newton of the symmetric-family matching, seeded at
/// (eta0, 2K eta0).  branch selects the sign of p_z0.
CutPoint cut_point_pair(const Model& m, double eta0, Branch branch, double tol = 1e-11,
                        const std::optional<std::pair<double, double>>& seed = std::nullopt);

/// cut_point_pair mapped over eta0 values with continuation seeding.
std::vector<CutPoint> cut_locus(const Model& m, const std::vector<double>& eta0_list,
                                Branch branch, double tol = 1e-11);

/// First conjugate points for p_z0 = +-1/eta^2 and both p_y0 signs.
std::vector<ConjugatePoint> conjugate_locus(const Model& m,
                                            const std::vector<double>& eta_list,
                                            double tol = 1e-10);

struct SphereCurve {
  std::vector<std::pair<double, double>> points;  // ordered, closed (first == last)
  std::vector<std::pair<double, double>> corners;  // on the cut locus
  bool matched = true;  // false: corner solve failed, raw front returned
};

/// Sphere of radius r: the front at t = r with the non-optimal arcs beyond
/// the matched cut pairs removed; the corner points are the sphere's
/// intersection with the cut locus.
SphereCurve sphere(const Model& m, double r, int resolution, double tol = 1e-11);

struct CuspFit {
  double exponent = 0.0;     // slope a of log|z| = a log|y| + b
  double coefficient = 0.0;  // sign(z) e^b, prefactor of |y|^a
  double alpha = 0.0;        // sign(y) e^{2b}, the z^2 = alpha y^3 coefficient
};

/// Least-squares power-law fit on one branch of locus points.
/// Requires >= 4 points, |y| > 0, z != 0, and spread max|y|/min|y| >= 4.
CuspFit fit_cusp(const std::vector<std::pair<double, double>>& points);

}  // namespace ars2d

#endif
