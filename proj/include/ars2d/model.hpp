// ars2d - almost-Riemannian models at a tangency point and their extremal flows.
//
// The order-0 model is the orthonormal frame
//   F1 = (eps z + y^2/2 + eps' y^3 + higher terms) d/dz,   F2 = d/dy,
// with eps = eps' = 0 giving the nilpotent approximation.  Optional higher
// terms are finite monomial lists c y^i z^j of weighted order i + 3j >= 4
// (y has weight 1, z weight 3), kept polynomial so models serialize and all
// partial derivatives are exact.

#ifndef ARS2D_MODEL_HPP
#define ARS2D_MODEL_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ars2d {

/// One extra monomial c y^i z^j of the frame coefficient.
struct HigherTerm {
  int i = 0;
  int j = 0;
  double c = 0.0;
};

/// Phase point (y, z, p_y, p_z) of the planar Hamiltonian flow.
struct CotangentState {
  double y = 0.0;
  double z = 0.0;
  double p_y = 0.0;
  double p_z = 0.0;
};

/// Phase point (x, y, z, p_x, p_y, p_z) of the desingularized 3-D flow.
/// p_x and p_z are first integrals of the lifted dynamics.
struct LiftedState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double p_x = 0.0;
  double p_y = 0.0;
  double p_z = 0.0;
};

class Model {
 public:
  Model() = default;
  Model(double epsilon, double epsilon_prime, std::vector<HigherTerm> higher = {},
        std::string name = "");

  static Model nilpotent();
  static Model order0(double epsilon, double epsilon_prime);

  double epsilon() const { return epsilon_; }
  double epsilon_prime() const { return epsilon_prime_; }
  const std::vector<HigherTerm>& higher_terms() const { return higher_; }
  const std::string& name() const { return name_; }

  /// Frame coefficient f(y,z) = eps z + y^2/2 + eps' y^3 + sum c y^i z^j.
  double f1_coefficient(double y, double z) const;
  double df_dy(double y, double z) const;
  double df_dz(double y, double z) const;
  double d2f_dydy(double y, double z) const;
  double d2f_dydz(double y, double z) const;
  double d2f_dzdz(double y, double z) const;

  /// JSON object {name, epsilon, epsilon_prime, higher_terms: [[i,j,c],...]}.
  std::string to_json() const;
  static Model from_json(const std::string& text);
  static Model load(const std::string& path);

 private:
  double epsilon_ = 0.0;
  double epsilon_prime_ = 0.0;
  std::vector<HigherTerm> higher_;
  std::string name_;
};

/// eps = e^{xi(0)}, eps' = (psi'(0) + psi(0) dxi/dy(0)) / (2 psi(0)) from the
/// tangency normal-form data.  Requires psi0 > 0.
std::pair<double, double> normal_form_to_model(double psi0, double dpsi0, double xi0,
                                               double dxi_dy0);

/// H = ( p_z^2 f(y,z)^2 + p_y^2 ) / 2.
double ars_hamiltonian(const Model& m, const CotangentState& s);

/// Hamiltonian vector field of ars_hamiltonian.
CotangentState ars_rhs(const Model& m, const CotangentState& s);

/// 4x4 Jacobian of ars_rhs in the state (y, z, p_y, p_z), row-major.
std::array<double, 16> ars_rhs_jacobian(const Model& m, const CotangentState& s);

/// Lifted order-0 flow: normal extremals of H = (P1^2 + P2^2)/2 with
/// P1 = p_x + f(y,z) p_z and P2 = p_y.  On the p_x = 0 slice the
/// (y, z, p_y, p_z) components coincide with ars_rhs.
LiftedState lifted_rhs_order0(const Model& m, const LiftedState& s);
double lifted_hamiltonian(const Model& m, const LiftedState& s);

/// Grushin plane, H = (p_x^2 + x^2 p_y^2)/2; state layout (x, y, p_x, p_y).
std::array<double, 4> grushin_rhs(const std::array<double, 4>& s);
double grushin_hamiltonian(const std::array<double, 4>& s);

/// Heisenberg group (lift of Grushin), H = (p_x^2 + (x p_y + p_z)^2)/2;
/// state layout (x, y, z, p_x, p_y, p_z).
std::array<double, 6> heisenberg_rhs(const std::array<double, 6>& s);
double heisenberg_hamiltonian(const std::array<double, 6>& s);

/// Solve f(y, z) = 0 for z near the order-0 root; the singular set Z.
/// For eps = 0 there is no z-solution (the order-0 singular set is y = 0):
/// returns nullopt.
std::optional<double> singular_set_z(const Model& m, double y);

}  // namespace ars2d

#endif
