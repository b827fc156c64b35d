#include "ars2d/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ars2d {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

Model::Model(double epsilon, double epsilon_prime, std::vector<HigherTerm> higher,
             std::string name)
    : epsilon_(epsilon),
      epsilon_prime_(epsilon_prime),
      higher_(std::move(higher)),
      name_(std::move(name)) {
  for (const auto& t : higher_) {
    if (t.i < 0 || t.j < 0 || t.i + 3 * t.j < 4)
      throw std::invalid_argument("higher term must have weighted order i + 3j >= 4");
  }
}

Model Model::nilpotent() { return Model(0.0, 0.0, {}, "nilpotent"); }

Model Model::order0(double epsilon, double epsilon_prime) {
  return Model(epsilon, epsilon_prime, {}, "order0");
}

double Model::f1_coefficient(double y, double z) const {
  double f = epsilon_ * z + 0.5 * y * y + epsilon_prime_ * y * y * y;
  for (const auto& t : higher_) f += t.c * ipow(y, t.i) * ipow(z, t.j);
  return f;
}

double Model::df_dy(double y, double z) const {
  double d = y + 3.0 * epsilon_prime_ * y * y;
  for (const auto& t : higher_)
    if (t.i > 0) d += t.c * t.i * ipow(y, t.i - 1) * ipow(z, t.j);
  return d;
}

double Model::df_dz(double y, double z) const {
  double d = epsilon_;
  for (const auto& t : higher_)
    if (t.j > 0) d += t.c * t.j * ipow(y, t.i) * ipow(z, t.j - 1);
  return d;
}

double Model::d2f_dydy(double y, double z) const {
  double d = 1.0 + 6.0 * epsilon_prime_ * y;
  for (const auto& t : higher_)
    if (t.i > 1) d += t.c * t.i * (t.i - 1) * ipow(y, t.i - 2) * ipow(z, t.j);
  return d;
}

double Model::d2f_dydz(double y, double z) const {
  double d = 0.0;
  for (const auto& t : higher_)
    if (t.i > 0 && t.j > 0) d += t.c * t.i * t.j * ipow(y, t.i - 1) * ipow(z, t.j - 1);
  return d;
}

double Model::d2f_dzdz(double y, double z) const {
  double d = 0.0;
  for (const auto& t : higher_)
    if (t.j > 1) d += t.c * t.j * (t.j - 1) * ipow(y, t.i) * ipow(z, t.j - 2);
  return d;
}

std::string Model::to_json() const {
  nlohmann::json j;
  j["name"] = name_;
  j["epsilon"] = epsilon_;
  j["epsilon_prime"] = epsilon_prime_;
  auto terms = nlohmann::json::array();
  for (const auto& t : higher_) terms.push_back({t.i, t.j, t.c});
  j["higher_terms"] = terms;
  return j.dump(2);
}

Model Model::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<HigherTerm> higher;
  if (j.contains("higher_terms")) {
    for (const auto& t : j.at("higher_terms"))
      higher.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>()});
  }
  return Model(j.at("epsilon").get<double>(), j.at("epsilon_prime").get<double>(),
               std::move(higher), j.value("name", ""));
}

Model Model::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::pair<double, double> normal_form_to_model(double psi0, double dpsi0, double xi0,
                                               double dxi_dy0) {
  if (!(psi0 > 0.0)) throw std::domain_error("normal form requires psi(0) > 0");
  const double eps = std::exp(xi0);
  const double eps_prime = (dpsi0 + psi0 * dxi_dy0) / (2.0 * psi0);
  return {eps, eps_prime};
}

double ars_hamiltonian(const Model& m, const CotangentState& s) {
  const double f = m.f1_coefficient(s.y, s.z);
  return 0.5 * (s.p_z * s.p_z * f * f + s.p_y * s.p_y);
}

CotangentState ars_rhs(const Model& m, const CotangentState& s) {
  const double f = m.f1_coefficient(s.y, s.z);
  const double fy = m.df_dy(s.y, s.z);
  const double fz = m.df_dz(s.y, s.z);
  CotangentState d;
  d.y = s.p_y;
  d.z = s.p_z * f * f;
  d.p_y = -s.p_z * s.p_z * f * fy;
  d.p_z = -s.p_z * s.p_z * f * fz;
  return d;
}

std::array<double, 16> ars_rhs_jacobian(const Model& m, const CotangentState& s) {
  const double f = m.f1_coefficient(s.y, s.z);
  const double fy = m.df_dy(s.y, s.z);
  const double fz = m.df_dz(s.y, s.z);
  const double fyy = m.d2f_dydy(s.y, s.z);
  const double fyz = m.d2f_dydz(s.y, s.z);
  const double fzz = m.d2f_dzdz(s.y, s.z);
  const double pz = s.p_z, pz2 = pz * pz;
  // rows: d(ydot, zdot, pydot, pzdot); cols: d/d(y, z, p_y, p_z)
  return {
      0.0,                       0.0,                       1.0, 0.0,
      2.0 * pz * f * fy,         2.0 * pz * f * fz,         0.0, f * f,
      -pz2 * (fy * fy + f * fyy), -pz2 * (fz * fy + f * fyz), 0.0, -2.0 * pz * f * fy,
      -pz2 * (fy * fz + f * fyz), -pz2 * (fz * fz + f * fzz), 0.0, -2.0 * pz * f * fz,
  };
}

LiftedState lifted_rhs_order0(const Model& m, const LiftedState& s) {
  const double f = m.f1_coefficient(s.y, s.z);
  const double fy = m.df_dy(s.y, s.z);
  const double fz = m.df_dz(s.y, s.z);
  const double P1 = s.p_x + f * s.p_z;
  LiftedState d;
  d.x = P1;
  d.y = s.p_y;
  d.z = P1 * f;
  d.p_x = 0.0;  // f does not depend on x
  d.p_y = -P1 * s.p_z * fy;
  d.p_z = -P1 * s.p_z * fz;
  return d;
}

double lifted_hamiltonian(const Model& m, const LiftedState& s) {
  const double P1 = s.p_x + m.f1_coefficient(s.y, s.z) * s.p_z;
  return 0.5 * (P1 * P1 + s.p_y * s.p_y);
}

std::array<double, 4> grushin_rhs(const std::array<double, 4>& s) {
  const double x = s[0], px = s[2], py = s[3];
  return {px, x * x * py, -x * py * py, 0.0};
}

double grushin_hamiltonian(const std::array<double, 4>& s) {
  return 0.5 * (s[2] * s[2] + s[0] * s[0] * s[3] * s[3]);
}

std::array<double, 6> heisenberg_rhs(const std::array<double, 6>& s) {
  const double x = s[0], px = s[3], py = s[4], pz = s[5];
  const double w = x * py + pz;
  return {px, w * x, w, -w * py, 0.0, 0.0};
}

double heisenberg_hamiltonian(const std::array<double, 6>& s) {
  const double w = s[0] * s[4] + s[5];
  return 0.5 * (s[3] * s[3] + w * w);
}

std::optional<double> singular_set_z(const Model& m, double y) {
  if (m.epsilon() == 0.0) return std::nullopt;
  // order-0 root; exact when there are no higher terms
  double z = -(0.5 * y * y + m.epsilon_prime() * y * y * y) / m.epsilon();
  if (m.higher_terms().empty()) return z;
  // Newton refinement for polynomial higher terms
  for (int it = 0; it < 80; ++it) {
    const double f = m.f1_coefficient(y, z);
    const double fz = m.df_dz(y, z);
    if (std::abs(f) <= 1e-14 * (1.0 + std::abs(z))) return z;
    if (fz == 0.0) return std::nullopt;
    const double step = f / fz;
    z -= step;
    if (std::abs(step) > 1e6) return std::nullopt;  // diverging
  }
  if (std::abs(m.f1_coefficient(y, z)) <= 1e-12) return z;
  return std::nullopt;
}

}  // namespace ars2d
