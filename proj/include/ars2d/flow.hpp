// ars2d - adaptive ODE integration and the exponential map.
//
// The integrator is the Dormand-Prince embedded Runge-Kutta 5(4) pair with
// PI step-size control and the standard order-4 continuous extension
// (Hairer, Norsett & Wanner, Solving ODE I).  It is deterministic: identical
// inputs reproduce identical trajectories bit for bit.

#ifndef ARS2D_FLOW_HPP
#define ARS2D_FLOW_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ars2d/model.hpp"

namespace ars2d {

using Rhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

/// Thrown when the step size underflows (stiffness or finite-time blow-up);
/// carries the last time the integrator reached.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t_reached)
      : std::runtime_error(what), t_reached_(t_reached) {}
  double t_reached() const { return t_reached_; }

 private:
  double t_reached_;
};

/// Accepted-step trajectory with dense output on every step.
class Trajectory {
 public:
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::vector<double>>& states() const { return states_; }
  const std::vector<double>& front_state() const { return states_.front(); }
  const std::vector<double>& back_state() const { return states_.back(); }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  const std::string& model_name() const { return model_name_; }
  void set_model_name(std::string n) { model_name_ = std::move(n); }

  /// Order-4 dense interpolation at any t inside [t_begin, t_end].
  std::vector<double> sample(double t) const;

 private:
  friend Trajectory integrate(const Rhs&, std::vector<double>, double, double);
  std::vector<double> times_;
  std::vector<std::vector<double>> states_;
  // per step: 5 contiguous dense coefficient blocks of size dim
  std::vector<std::vector<double>> dense_;
  std::size_t dim_ = 0;
  std::string model_name_;
};

/// Integrate from t = 0 to t_end (either sign) with |local error| ~ tol
/// (used as both absolute and relative scale).
Trajectory integrate(const Rhs& rhs, std::vector<double> y0, double t_end, double tol);

/// Endpoint only; no trajectory storage.
std::vector<double> integrate_to(const Rhs& rhs, std::vector<double> y0, double t_end,
                                 double tol);

/// Vector fields packaged for the integrator.
Rhs ars_flow(const Model& m);
Rhs lifted_flow(const Model& m);
Rhs grushin_flow();
Rhs heisenberg_flow();

/// Base flow + first variation with respect to (p_y(0), p_z(0)).
/// State layout: (y, z, p_y, p_z, J[4x2] row-major), 12 components; at t = 0
/// the covector rows of J are the identity and the position rows vanish.
Rhs ars_variational_flow(const Model& m);

/// Geodesic endpoint from the tangency point with covector (p_y0, p_z0),
/// p_y0 = +-1 under the arclength normalization H = 1/2.
std::pair<double, double> exp_map(const Model& m, double p_y0, double p_z0, double t,
                                  double tol);
CotangentState exp_map_state(const Model& m, double p_y0, double p_z0, double t, double tol);

/// det [ d(y,z)/dt , d(y,z)/dp_z0 ] of the front parameterization
/// (t, p_z0) -> (y, z), from the variational flow.
double exp_jacobian_det(const Model& m, double p_y0, double p_z0, double t, double tol);

/// First zero of exp_jacobian_det on (0, t_max]: scan a uniform grid
/// (default 400 points), then bisect the first sign change down to tol.
std::optional<double> first_conjugate_time(const Model& m, double p_y0, double p_z0,
                                           double t_max, double tol, int grid = 400);

/// Same machinery for the Grushin exponential map (t, p_y) -> (x, y),
/// p_x0 = +-1; the first conjugate time solves p_y t = tan(p_y t).
double grushin_jacobian_det(double p_x0, double p_y0, double t, double tol);
std::optional<double> grushin_first_conjugate_time(double p_x0, double p_y0, double t_max,
                                                   double tol, int grid = 400);

/// 3-D Heisenberg exponential map from the origin with covector
/// (cos th, p_y, sin th) at th = 0: det of d(x,y,z)/d(t, th, p_y).
/// Returns every sign-change root in (0, t_max] (the first is p_y t = 2 pi,
/// the second solves p_y t / 2 = tan(p_y t / 2)).
double heisenberg_jacobian_det(double p_y0, double t, double tol);
std::vector<double> heisenberg_conjugate_times(double p_y0, double t_max, double tol,
                                               int grid = 400);

}  // namespace ars2d

#endif
