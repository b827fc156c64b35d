// ars2d - expansion systems of the high-|p_z| geodesics in rescaled time
// s = t sqrt|lambda|, their epsilon'-sensitivity (g) system, and the
// resulting cut/conjugate asymptotics near the tangency point.

#ifndef ARS2D_PERTURB_HPP
#define ARS2D_PERTURB_HPP

#include <utility>

#include "ars2d/flow.hpp"
#include "ars2d/model.hpp"

namespace ars2d {

enum class Branch { Upper, Lower };  // sign of p_z(0)

/// Joint state of the leading (order-0) system, the first-order system with
/// the model's epsilon and epsilon', and the epsilon'-sensitivity functions
/// g1, g2, g3 (g4 vanishes identically and is not stored).
struct PerturbState {
  double Y0 = 0.0, Z0 = 0.0, PY0 = 0.0, PZ0 = 0.0;
  double Y1 = 0.0, Z1 = 0.0, PY1 = 0.0, PZ1 = 0.0;
  double g1 = 0.0, g2 = 0.0, g3 = 0.0;

  static PerturbState from_vector(const std::vector<double>& v);
};

/// Joint integration from the initial state (0,0,sign_py,sign_pz,0,...,0)
/// to rescaled time s_end.  The 11 trajectory components follow the
/// PerturbState field order.
Trajectory integrate_expansion(const Model& m, int sign_py, int sign_pz, double s_end,
                               double tol);

struct GConstants {
  double g1_2K = 0.0;
  double g2_2K = 0.0;
  double g3_2K = 0.0;
};

/// g1, g2, g3 evaluated at s = 2K.  The default-tolerance values are cached
/// after the first call (idempotent single assignment).
GConstants g_constants(double tol = 1e-10);

/// j(s) = Y0 dZ0/ds - 3 Z0 dY0/ds from the closed-form nilpotent solution
/// (initial covector (1, 1)); its first positive zero s0 marks the conjugate
/// time of the rescaled flow.
double j_function(double s);
double j_function_derivative(double s);

struct JZero {
  double s0 = 0.0;
  double j_prime_s0 = 0.0;  // transversality certificate
};

/// First zero of j in (2K, 4K), by bracketing and bisection to tol.
/// Throws std::runtime_error if no sign change exists in that window.
JZero j_first_zero(double tol = 1e-12);

/// Leading-order cut point of Proposition-6 type:
/// upper:  ( eta0^2 eps' (g1 - g2)(2K),  eta0^3 2K/3 )
/// lower:  ( eta0^2 eps' (g1 + g2)(2K), -eta0^3 2K/3 ).
std::pair<double, double> predicted_cut_point(const Model& m, double eta0, Branch branch);

/// Cusp coefficient of z^2 = alpha y^3 on the requested branch:
/// alpha_1 = 4K^2 / (9 eps'^3 (g1 - g2)^3),
/// alpha_2 = 4K^2 / (9 eps'^3 (g1 + g2)^3).
/// Throws std::domain_error when eps' = 0 (the cusp degenerates).
double predicted_alpha(const Model& m, Branch branch);

}  // namespace ars2d

#endif
