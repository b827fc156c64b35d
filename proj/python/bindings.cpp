// Python bindings for the ars2d core operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ars2d/acceptance.hpp"
#include "ars2d/closedform.hpp"
#include "ars2d/elliptic.hpp"
#include "ars2d/flow.hpp"
#include "ars2d/loci.hpp"
#include "ars2d/model.hpp"
#include "ars2d/perturb.hpp"

namespace py = pybind11;
using namespace ars2d;

PYBIND11_MODULE(_core, m) {
  m.doc() = "geodesics, spheres, conjugate and cut loci of 2-D almost-Riemannian "
            "structures at a tangency point";

  // elliptic
  m.def("complete_K", [](double k) { return complete_K(Modulus(k)); }, py::arg("k"));
  m.def(
      "jacobi",
      [](double u, double k) {
        const Jacobi j = jacobi(u, Modulus(k));
        return py::make_tuple(j.sn, j.cn, j.dn);
      },
      py::arg("u"), py::arg("k"));
  m.def("quarter_period", &quarter_period);

  // models
  py::class_<Model>(m, "Model")
      .def(py::init([](double eps, double epsp, const std::string& name) {
             return Model(eps, epsp, {}, name);
           }),
           py::arg("epsilon"), py::arg("epsilon_prime"), py::arg("name") = "")
      .def_static("nilpotent", &Model::nilpotent)
      .def_static("order0", &Model::order0, py::arg("epsilon"), py::arg("epsilon_prime"))
      .def_static("from_json", &Model::from_json)
      .def_static("load", &Model::load)
      .def_property_readonly("epsilon", &Model::epsilon)
      .def_property_readonly("epsilon_prime", &Model::epsilon_prime)
      .def_property_readonly("name", &Model::name)
      .def("f1_coefficient", &Model::f1_coefficient, py::arg("y"), py::arg("z"))
      .def("to_json", &Model::to_json)
      .def("__repr__", [](const Model& mm) {
        return "Model(epsilon=" + std::to_string(mm.epsilon()) +
               ", epsilon_prime=" + std::to_string(mm.epsilon_prime()) + ")";
      });

  m.def("normal_form_to_model", &normal_form_to_model, py::arg("psi0"), py::arg("dpsi0"),
        py::arg("xi0"), py::arg("dxi_dy0"));
  m.def(
      "ars_hamiltonian",
      [](const Model& mm, double y, double z, double py_, double pz) {
        return ars_hamiltonian(mm, {y, z, py_, pz});
      },
      py::arg("model"), py::arg("y"), py::arg("z"), py::arg("p_y"), py::arg("p_z"));
  m.def(
      "ars_rhs",
      [](const Model& mm, double y, double z, double py_, double pz) {
        const CotangentState d = ars_rhs(mm, {y, z, py_, pz});
        return py::make_tuple(d.y, d.z, d.p_y, d.p_z);
      },
      py::arg("model"), py::arg("y"), py::arg("z"), py::arg("p_y"), py::arg("p_z"));
  m.def(
      "singular_set_z",
      [](const Model& mm, double y) -> py::object {
        const auto z = singular_set_z(mm, y);
        return z ? py::cast(*z) : py::none();
      },
      py::arg("model"), py::arg("y"));

  // flow
  m.def("exp_map", &exp_map, py::arg("model"), py::arg("p_y0"), py::arg("p_z0"),
        py::arg("t"), py::arg("tol") = 1e-12);
  m.def("exp_jacobian_det", &exp_jacobian_det, py::arg("model"), py::arg("p_y0"),
        py::arg("p_z0"), py::arg("t"), py::arg("tol") = 1e-12);
  m.def(
      "first_conjugate_time",
      [](const Model& mm, double py0, double pz0, double t_max, double tol) -> py::object {
        const auto t = first_conjugate_time(mm, py0, pz0, t_max, tol);
        return t ? py::cast(*t) : py::none();
      },
      py::arg("model"), py::arg("p_y0"), py::arg("p_z0"), py::arg("t_max"),
      py::arg("tol") = 1e-10);
  m.def(
      "grushin_first_conjugate_time",
      [](double px0, double py0, double t_max, double tol) -> py::object {
        const auto t = grushin_first_conjugate_time(px0, py0, t_max, tol);
        return t ? py::cast(*t) : py::none();
      },
      py::arg("p_x0"), py::arg("p_y0"), py::arg("t_max"), py::arg("tol") = 1e-12);
  m.def("heisenberg_conjugate_times", &heisenberg_conjugate_times, py::arg("p_y0"),
        py::arg("t_max"), py::arg("tol") = 1e-12, py::arg("grid") = 400);

  // closed forms
  m.def(
      "nilpotent_geodesic",
      [](double py0, double lambda, double t) {
        return nilpotent_geodesic({py0, lambda}, t);
      },
      py::arg("p_y0"), py::arg("lam"), py::arg("t"));
  m.def(
      "nilpotent_cut_time",
      [](double lambda) -> py::object {
        const auto t = nilpotent_cut_time(lambda);
        return t ? py::cast(*t) : py::none();
      },
      py::arg("lam"));
  m.def("nilpotent_conjugate_coefficient", &nilpotent_conjugate_coefficient);
  m.def("grushin_geodesic", &grushin_geodesic, py::arg("p_x0"), py::arg("p_y"), py::arg("t"));
  m.def("heisenberg_z", &heisenberg_z, py::arg("p_x0"), py::arg("p_y"), py::arg("t"));

  // perturb
  py::enum_<Branch>(m, "Branch").value("UPPER", Branch::Upper).value("LOWER", Branch::Lower);
  m.def(
      "g_constants",
      [](double tol) {
        const GConstants g = g_constants(tol);
        return py::make_tuple(g.g1_2K, g.g2_2K, g.g3_2K);
      },
      py::arg("tol") = 1e-10);
  m.def("j_function", &j_function, py::arg("s"));
  m.def("j_first_zero", [](double tol) {
    const JZero z = j_first_zero(tol);
    return py::make_tuple(z.s0, z.j_prime_s0);
  }, py::arg("tol") = 1e-12);
  m.def("predicted_cut_point", &predicted_cut_point, py::arg("model"), py::arg("eta0"),
        py::arg("branch"));
  m.def("predicted_alpha", &predicted_alpha, py::arg("model"), py::arg("branch"));

  // loci
  py::class_<CutPoint>(m, "CutPoint")
      .def_readonly("y", &CutPoint::y)
      .def_readonly("z", &CutPoint::z)
      .def_readonly("t", &CutPoint::t)
      .def_readonly("eta_plus", &CutPoint::eta_plus)
      .def_readonly("eta_minus", &CutPoint::eta_minus)
      .def_readonly("residual", &CutPoint::residual);
  py::class_<ConjugatePoint>(m, "ConjugatePoint")
      .def_readonly("y", &ConjugatePoint::y)
      .def_readonly("z", &ConjugatePoint::z)
      .def_readonly("t", &ConjugatePoint::t)
      .def_readonly("p_y0", &ConjugatePoint::p_y0)
      .def_readonly("p_z0", &ConjugatePoint::p_z0);
  py::class_<CuspFit>(m, "CuspFit")
      .def_readonly("exponent", &CuspFit::exponent)
      .def_readonly("coefficient", &CuspFit::coefficient)
      .def_readonly("alpha", &CuspFit::alpha);
  py::class_<SphereCurve>(m, "SphereCurve")
      .def_readonly("points", &SphereCurve::points)
      .def_readonly("corners", &SphereCurve::corners)
      .def_readonly("matched", &SphereCurve::matched);

  m.def("cut_point_pair", &cut_point_pair, py::arg("model"), py::arg("eta0"),
        py::arg("branch"), py::arg("tol") = 1e-11, py::arg("seed") = py::none());
  m.def("cut_locus", &cut_locus, py::arg("model"), py::arg("eta0_list"), py::arg("branch"),
        py::arg("tol") = 1e-11);
  m.def("conjugate_locus", &conjugate_locus, py::arg("model"), py::arg("eta_list"),
        py::arg("tol") = 1e-10);
  m.def("sphere", &sphere, py::arg("model"), py::arg("r"), py::arg("resolution") = 200,
        py::arg("tol") = 1e-11);
  m.def("fit_cusp", &fit_cusp, py::arg("points"));

  // verification
  m.def("run_acceptance", [](double tol) {
    py::list out;
    for (const auto& r : run_acceptance(tol)) {
      py::dict d;
      d["id"] = r.id;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["detail"] = r.detail;
      d["seconds"] = r.seconds;
      out.append(d);
    }
    return out;
  }, py::arg("tol") = 1e-10);

  m.attr("__version__") = "0.1.0";
}
