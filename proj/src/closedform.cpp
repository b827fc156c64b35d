#include "ars2d/closedform.hpp"

#include <cmath>
#include <stdexcept>

#include "ars2d/elliptic.hpp"

namespace ars2d {

double NilpotentGeodesicParams::eta() const {
  if (lambda == 0.0) throw std::domain_error("eta undefined for lambda = 0");
  return 1.0 / std::sqrt(std::abs(lambda));
}

CotangentState nilpotent_geodesic_state(const NilpotentGeodesicParams& p, double t) {
  CotangentState s;
  if (p.lambda == 0.0) {
    s.y = p.p_y0 * t;
    s.z = 0.0;
    s.p_y = p.p_y0;
    s.p_z = 0.0;
    return s;
  }
  const double w = std::sqrt(std::abs(p.lambda));
  const double sigma = p.lambda > 0 ? 1.0 : -1.0;
  const double K = quarter_period();
  const Jacobi j = jacobi(K + t * w, modulus_half());
  const double sqrt2 = std::sqrt(2.0);
  s.y = -p.p_y0 * sqrt2 / w * j.cn;
  s.z = sigma / (3.0 * w * w * w) * (t * w + 2.0 * j.sn * j.cn * j.dn);
  s.p_y = p.p_y0 * sqrt2 * j.sn * j.dn;
  s.p_z = p.lambda;
  return s;
}

std::pair<double, double> nilpotent_geodesic(const NilpotentGeodesicParams& p, double t) {
  const CotangentState s = nilpotent_geodesic_state(p, t);
  return {s.y, s.z};
}

CotangentState nilpotent_geodesic_velocity(const NilpotentGeodesicParams& p, double t) {
  CotangentState d;
  if (p.lambda == 0.0) {
    d.y = p.p_y0;
    d.z = 0.0;
    d.p_y = 0.0;
    d.p_z = 0.0;
    return d;
  }
  const double w = std::sqrt(std::abs(p.lambda));
  const double sigma = p.lambda > 0 ? 1.0 : -1.0;
  const double K = quarter_period();
  const Jacobi j = jacobi(K + t * w, modulus_half());
  const double sqrt2 = std::sqrt(2.0);
  const double cn4 = j.cn * j.cn * j.cn * j.cn;
  d.y = p.p_y0 * sqrt2 * j.sn * j.dn;         // = p_y
  d.z = sigma * cn4 / (w * w);                // = p_z f^2 = lambda y^4 / 4
  d.p_y = p.p_y0 * sqrt2 * w * j.cn * j.cn * j.cn;  // cn (dn^2 - sn^2/2) = cn^3
  d.p_z = 0.0;
  return d;
}

std::optional<double> nilpotent_cut_time(double lambda) {
  if (lambda == 0.0) return std::nullopt;
  return 2.0 * quarter_period() / std::sqrt(std::abs(lambda));
}

double nilpotent_conjugate_coefficient() {
  return quarter_period() / (2.0 * std::sqrt(2.0));
}

std::pair<double, double> grushin_geodesic(double p_x0, double p_y, double t) {
  if (p_y == 0.0) return {p_x0 * t, 0.0};
  const double u = p_y * t;
  const double x = p_x0 * std::sin(u) / p_y;
  const double y = (2.0 * u - std::sin(2.0 * u)) / (4.0 * p_y * p_y);
  return {x, y};
}

double heisenberg_z(double p_x0, double p_y, double t) {
  if (p_y == 0.0) return 0.0;
  return p_x0 * (1.0 - std::cos(p_y * t)) / p_y;
}

}  // namespace ars2d
