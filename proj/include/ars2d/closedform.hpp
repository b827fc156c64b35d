// ars2d - exact geodesics of the nilpotent tangency model and of the
// Grushin plane / Heisenberg group, used as oracles against the integrator.
//
// Nilpotent model g = dy^2 + (y^2/2)^{-2} dz^2, covector (p_y = +-1,
// p_z = lambda != 0):
//   y(t) = -p_y (sqrt2 / sqrt|lambda|) cn(K + t sqrt|lambda|)
//   z(t) = sign(lambda)/(3 |lambda|^{3/2}) [ t sqrt|lambda|
//           + 2 sn cn dn(K + t sqrt|lambda|) ]
// at modulus k = 1/sqrt2.  lambda = 0 gives the straight lines y = p_y t.

#ifndef ARS2D_CLOSEDFORM_HPP
#define ARS2D_CLOSEDFORM_HPP

#include <optional>
#include <utility>

#include "ars2d/model.hpp"

namespace ars2d {

/// Initial covector of a nilpotent geodesic: p_y0 in {+1, -1},
/// lambda = p_z(0), eta = 1/sqrt|lambda| for lambda != 0.
struct NilpotentGeodesicParams {
  double p_y0 = 1.0;
  double lambda = 0.0;

  double eta() const;
};

std::pair<double, double> nilpotent_geodesic(const NilpotentGeodesicParams& p, double t);

/// Full phase state (y, z, p_y, p_z) along the closed-form geodesic.
CotangentState nilpotent_geodesic_state(const NilpotentGeodesicParams& p, double t);

/// Time derivative of the closed-form state, from the elliptic derivative
/// identities; matches ars_rhs on the nilpotent model.
CotangentState nilpotent_geodesic_velocity(const NilpotentGeodesicParams& p, double t);

/// 2K/sqrt|lambda| (first return to the z-axis); nullopt for lambda = 0,
/// whose geodesics are optimal forever.
std::optional<double> nilpotent_cut_time(double lambda);

/// alpha = K/(2 sqrt2) with the conjugate locus approximated by z = +-alpha y^3
/// (elimination of lambda from the parametric curve at t = 3K/sqrt(lambda)).
double nilpotent_conjugate_coefficient();

/// Grushin geodesic from the origin, covector (p_x0 = +-1, p_y):
///   x(t) = p_x sin(p_y t)/p_y,  y(t) = (2 p_y t - sin(2 p_y t))/(2 p_y)^2.
std::pair<double, double> grushin_geodesic(double p_x0, double p_y, double t);

/// Third coordinate of the Heisenberg lift (p_z = 0):
///   z(t) = p_x (1 - cos(p_y t))/p_y.
double heisenberg_z(double p_x0, double p_y, double t);

}  // namespace ars2d

#endif
