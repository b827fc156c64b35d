// ars2d command-line front-end: geodesic integration, locus computations,
// expansion constants, and the verification suite.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ars2d/acceptance.hpp"
#include "ars2d/closedform.hpp"
#include "ars2d/elliptic.hpp"
#include "ars2d/flow.hpp"
#include "ars2d/io.hpp"
#include "ars2d/loci.hpp"
#include "ars2d/model.hpp"
#include "ars2d/perturb.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace ars2d;

namespace {

struct RunConfig {
  std::string model = "nilpotent";  // builtin name or path to a JSON model file
  double epsilon = 1.0;
  double epsilon_prime = 0.0;
  bool epsilon_set = false;
  bool epsilon_prime_set = false;
  double tol = 1e-10;
  std::string output_dir = ".";
  std::string format = "csv";
  bool plot = false;
};

// precedence: built-in defaults < ARS_TOL < --config file < explicit flags
void apply_env(RunConfig& c) {
  if (const char* env = std::getenv("ARS_TOL")) c.tol = std::atof(env);
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("model")) c.model = j["model"].get<std::string>();
  if (j.contains("epsilon")) {
    c.epsilon = j["epsilon"].get<double>();
    c.epsilon_set = true;
  }
  if (j.contains("epsilon_prime")) {
    c.epsilon_prime = j["epsilon_prime"].get<double>();
    c.epsilon_prime_set = true;
  }
  if (j.contains("tol")) c.tol = j["tol"].get<double>();
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("format")) c.format = j["format"].get<std::string>();
  if (j.contains("plot")) c.plot = j["plot"].get<bool>();
}

void validate(const RunConfig& c) {
  if (!(c.tol > 0.0) || c.tol > 1e-4)
    throw CLI::ValidationError("--tol", "tolerance must lie in (0, 1e-4]");
  if (c.format != "csv" && c.format != "json")
    throw CLI::ValidationError("--format", "must be csv or json");
}

Model resolve_model(const RunConfig& c) {
  if (c.model == "nilpotent" && !c.epsilon_set && !c.epsilon_prime_set)
    return Model::nilpotent();
  if (c.model == "nilpotent" || c.model == "order0")
    return Model(c.epsilon_set ? c.epsilon : (c.model == "order0" ? 1.0 : 0.0),
                 c.epsilon_prime_set ? c.epsilon_prime : 0.0, {}, c.model);
  if (c.model == "grushin")
    throw CLI::ValidationError("--model", "grushin supports only the geodesic command");
  return Model::load(c.model);
}

fs::path out_path(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  return fs::path(c.output_dir) / name;
}

// range syntax start:step:count
std::vector<double> parse_range(const std::string& text) {
  try {
    std::vector<double> out;
    const auto p1 = text.find(':');
    if (p1 == std::string::npos) {
      out.push_back(std::stod(text));
      return out;
    }
    const auto p2 = text.find(':', p1 + 1);
    if (p2 == std::string::npos)
      throw CLI::ValidationError("range", "expected start:step:count, got " + text);
    const double start = std::stod(text.substr(0, p1));
    const double step = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
    const int count = std::stoi(text.substr(p2 + 1));
    if (count < 1) throw CLI::ValidationError("range", "count must be >= 1");
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(start + i * step);
    return out;
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError("range", "expected start:step:count, got " + text);
  } catch (const std::out_of_range&) {
    throw CLI::ValidationError("range", "value out of range in " + text);
  }
}

void add_common(CLI::App* cmd, RunConfig& c, std::string& config_path) {
  cmd->add_option("--model", c.model, "builtin model (nilpotent|order0|grushin) or JSON file");
  cmd->add_option("--epsilon", c.epsilon, "epsilon of the order-0 model")
      ->each([&c](const std::string&) { c.epsilon_set = true; });
  cmd->add_option("--epsilon-prime", c.epsilon_prime, "epsilon' of the order-0 model")
      ->each([&c](const std::string&) { c.epsilon_prime_set = true; });
  cmd->add_option("--tol", c.tol, "integrator tolerance, in (0, 1e-4]");
  cmd->add_option("--output-dir", c.output_dir, "output directory");
  cmd->add_option("--format", c.format, "csv|json");
  cmd->add_flag("--plot", c.plot, "emit SVG plots");
  cmd->add_option("--config", config_path, "JSON config file (flags override it)");
}

// ---- subcommand implementations ----------------------------------------

int run_geodesic(const RunConfig& cfg, double py, double pz, double t_end, bool lifted,
                 double px0) {
  if (cfg.model == "grushin") {
    Trajectory tr = integrate(grushin_flow(), {0, 0, py, pz}, t_end, cfg.tol);
    tr.set_model_name("grushin");
    write_trajectory_csv(out_path(cfg, "geodesic_grushin.csv"), tr, "t,x,y,p_x,p_y");
    std::cout << "wrote " << out_path(cfg, "geodesic_grushin.csv").string() << "\n";
    return 0;
  }
  const Model m = resolve_model(cfg);
  if (lifted) {
    Trajectory tr =
        integrate(lifted_flow(m), {0, 0, 0, px0, py, pz}, t_end, cfg.tol);
    tr.set_model_name(m.name());
    write_trajectory_csv(out_path(cfg, "geodesic_lifted.csv"), tr, "t,x,y,z,p_x,p_y,p_z");
    std::cout << "wrote " << out_path(cfg, "geodesic_lifted.csv").string() << "\n";
    return 0;
  }
  Trajectory tr = integrate(ars_flow(m), {0, 0, py, pz}, t_end, cfg.tol);
  tr.set_model_name(m.name());
  const auto path = out_path(cfg, "geodesic.csv");
  write_trajectory_csv(path, tr, "t,y,z,p_y,p_z");
  if (cfg.plot) {
    SvgLayer traj;
    for (const auto& s : tr.states()) traj.points.push_back({s[0], s[1]});
    traj.label = "geodesic";
    traj.style = "solid";
    write_svg_plot(out_path(cfg, "geodesic.svg"), {traj});
  }
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

std::vector<double> default_pz_grid(double t) {
  // log-spaced magnitudes on both sides of p_z = 0, plus the axis itself
  std::vector<double> grid{0.0};
  const double hi = std::pow(2.0 * quarter_period() / t, 2);
  for (int i = 0; i <= 12; ++i) {
    const double mag = hi * std::pow(10.0, -2.5 * (12 - i) / 12.0);
    grid.push_back(mag);
    grid.push_back(-mag);
  }
  return grid;
}

SvgLayer singular_layer(const Model& m, double yspan) {
  SvgLayer l;
  l.label = "singular set";
  l.style = "dotted";
  l.color = "#888888";
  for (int i = 0; i <= 160; ++i) {
    const double y = -yspan + 2.0 * yspan * i / 160.0;
    const auto z = singular_set_z(m, y);
    if (z) l.points.push_back({y, *z});
  }
  return l;
}

int run_locus(const RunConfig& cfg, const std::string& kind, double t, double r,
              const std::string& eta_range, const std::string& pz_range,
              const std::string& branch_sel, int resolution) {
  const Model m = resolve_model(cfg);

  if (kind == "front") {
    const std::vector<double> grid =
        pz_range.empty() ? default_pz_grid(t) : parse_range(pz_range);
    const auto pts = compute_front(m, t, grid, {+1, -1}, cfg.tol);
    std::vector<std::vector<double>> rows;
    for (const auto& p : pts)
      if (p.ok) rows.push_back({p.y, p.z, p.p_y0, p.p_z0, p.t});
    write_points_csv(out_path(cfg, "front.csv"), "y,z,p_y0,p_z0,t", rows);
    std::cout << "wrote " << out_path(cfg, "front.csv").string() << " (" << rows.size()
              << " points)\n";
    return 0;
  }

  if (kind == "sphere") {
    const SphereCurve sc = sphere(m, r, resolution, 1e-11);
    if (!sc.matched)
      std::cerr << "warning: unmatched cut pairs, raw front returned\n";
    std::vector<std::vector<double>> rows;
    for (const auto& [y, z] : sc.points) rows.push_back({y, z});
    write_points_csv(out_path(cfg, "sphere.csv"), "y,z", rows);
    if (cfg.plot) {
      SvgLayer sph;
      sph.points = sc.points;
      sph.label = "sphere r=" + std::to_string(r);
      sph.style = "solid";
      // cut segments from the corners toward the origin
      SvgLayer cut;
      cut.label = "cut locus";
      cut.style = "dashed";
      cut.color = "#c02020";
      for (const auto& corner : sc.corners) {
        const Branch br = corner.second > 0 ? Branch::Upper : Branch::Lower;
        const double eta_r = std::cbrt(std::abs(corner.second) * 3.0 / (2.0 * quarter_period()));
        std::vector<double> etas;
        for (int i = 0; i < 8; ++i) etas.push_back(eta_r * (1.0 - i / 8.0) + eta_r / 8.0);
        try {
          cut.points.push_back(corner);
          for (const auto& cp : cut_locus(m, etas, br, 1e-10))
            cut.points.push_back({cp.y, cp.z});
          cut.points.push_back({0.0, 0.0});
        } catch (const NewtonError&) {
          // leave the partial polyline
        }
      }
      double yspan = 0.0;
      for (const auto& [y, z] : sc.points) yspan = std::max(yspan, std::abs(y));
      write_svg_plot(out_path(cfg, "sphere.svg"),
                     {sph, cut, singular_layer(m, yspan)});
      std::cout << "wrote " << out_path(cfg, "sphere.svg").string() << "\n";
    }
    std::cout << "wrote " << out_path(cfg, "sphere.csv").string() << "\n";
    return 0;
  }

  if (kind == "cut") {
    if (eta_range.empty())
      throw CLI::RequiredError("--eta0 is required for locus cut");
    const auto etas = parse_range(eta_range);
    const std::vector<Branch> branches =
        branch_sel == "upper" ? std::vector<Branch>{Branch::Upper}
        : branch_sel == "lower" ? std::vector<Branch>{Branch::Lower}
                                : std::vector<Branch>{Branch::Upper, Branch::Lower};
    bool any = false;
    for (Branch br : branches) {
      const std::string tag = br == Branch::Upper ? "upper" : "lower";
      // per-point resilience: a failed eta0 is reported and skipped, the
      // last converged solution still seeds the next point
      std::vector<CutPoint> pts;
      std::optional<std::pair<double, double>> ratios;
      for (double eta0 : etas) {
        std::optional<std::pair<double, double>> seed;
        if (ratios) seed = {ratios->first * eta0, ratios->second * eta0};
        try {
          const CutPoint cp = cut_point_pair(m, eta0, br, 1e-11, seed);
          ratios = {cp.eta_minus / cp.eta_plus, cp.t / cp.eta_plus};
          pts.push_back(cp);
        } catch (const NewtonError& e) {
          std::cerr << "warning: " << tag << " eta0=" << eta0 << ": " << e.what() << "\n";
        }
      }
      any = any || !pts.empty();
      std::vector<std::vector<double>> rows;
      for (const auto& cp : pts)
        rows.push_back({cp.y, cp.z, cp.t, cp.eta_plus, br == Branch::Upper ? 1.0 : -1.0});
      write_points_csv(out_path(cfg, "cut_" + tag + ".csv"), "y,z,t,eta,branch", rows);
      std::cout << "wrote " << out_path(cfg, "cut_" + tag + ".csv").string() << "\n";
      if (pts.size() >= 4) {
        std::vector<std::pair<double, double>> yz;
        for (const auto& cp : pts) yz.push_back({cp.y, cp.z});
        try {
          const CuspFit fit = fit_cusp(yz);
          std::cout << tag << " branch fit: exponent=" << fit.exponent
                    << " alpha=" << fit.alpha << "\n";
        } catch (const std::invalid_argument& e) {
          std::cout << tag << " branch fit skipped: " << e.what() << "\n";
        }
      }
    }
    if (!any) throw std::runtime_error("no cut point converged; try smaller eta0 values");
    return 0;
  }

  if (kind == "conjugate") {
    if (eta_range.empty())
      throw CLI::RequiredError("--eta is required for locus conjugate");
    const auto etas = parse_range(eta_range);
    const auto pts = conjugate_locus(m, etas, cfg.tol);
    std::vector<std::vector<double>> rows;
    for (const auto& c : pts)
      rows.push_back({c.y, c.z, c.t, 1.0 / std::sqrt(std::abs(c.p_z0)),
                      c.p_z0 > 0 ? 1.0 : -1.0});
    write_points_csv(out_path(cfg, "conjugate.csv"), "y,z,t,eta,branch", rows);
    std::cout << "wrote " << out_path(cfg, "conjugate.csv").string() << "\n";
    std::vector<std::pair<double, double>> branch;
    for (const auto& c : pts)
      if (c.y < 0 && c.z > 0) branch.push_back({c.y, c.z});
    if (branch.size() >= 4) {
      try {
        const CuspFit fit = fit_cusp(branch);
        std::cout << "cubic-fit report: exponent=" << fit.exponent
                  << " coefficient=" << std::abs(fit.coefficient)
                  << " (parametric-elimination reference " << nilpotent_conjugate_coefficient()
                  << ")\n";
      } catch (const std::invalid_argument& e) {
        std::cout << "cubic fit skipped: " << e.what() << "\n";
      }
    }
    return 0;
  }

  throw CLI::ValidationError("kind", "expected front|sphere|cut|conjugate");
}

int run_perturb_constants(const RunConfig& cfg) {
  const Model m = (cfg.model == "nilpotent" || cfg.model == "grushin")
                      ? Model::order0(1.0, 0.0)
                      : resolve_model(cfg);
  const double K = quarter_period();
  const JZero jz = j_first_zero(std::min(cfg.tol, 1e-12));
  const GConstants g = g_constants(cfg.tol);
  const PerturbState s = PerturbState::from_vector(
      integrate_expansion(Model::order0(m.epsilon(), 0.0), 1, 1, 2.0 * K, cfg.tol)
          .back_state());
  nlohmann::json j;
  j["K"] = K;
  j["s0"] = jz.s0;
  j["j_prime_s0"] = jz.j_prime_s0;
  j["g1_2K"] = g.g1_2K;
  j["g2_2K"] = g.g2_2K;
  j["g3_2K"] = g.g3_2K;
  j["Y1_2K"] = s.Y1;
  j["Z1_2K"] = s.Z1;
  const std::string text = j.dump(2);
  std::cout << text << "\n";
  std::ofstream(out_path(cfg, "perturb_constants.json")) << text << "\n";
  return 0;
}

int run_verify(const RunConfig& cfg) {
  const auto results = run_acceptance(cfg.tol);
  bool all = true;
  for (const auto& r : results) {
    std::cout << "[" << (r.pass ? "PASS" : "FAIL") << "] criterion " << r.id << ": "
              << r.name << " — " << r.detail << "\n";
    all = all && r.pass;
  }
  std::ofstream(out_path(cfg, "verify_report.json")) << acceptance_report_json(results)
                                                     << "\n";
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ars2d: geodesics, spheres, conjugate and cut loci of 2-D "
               "almost-Riemannian structures at a tangency point"};
  app.require_subcommand(1);

  RunConfig cfg;
  apply_env(cfg);
  // pre-scan for --config so the file loads before flags overwrite it
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        apply_config_file(cfg, argv[i + 1]);
      } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
      }
      break;
    }
  }
  std::string config_path;

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "integrate one geodesic and write CSV");
  double py = 1.0, pz = 0.0, t_end = 1.0, px0 = 0.0;
  bool lifted = false;
  add_common(geo, cfg, config_path);
  geo->add_option("--py", py, "initial p_y (+-1 at the tangency point)")->required();
  geo->add_option("--pz", pz, "initial p_z")->required();
  geo->add_option("--t", t_end, "integration time (arc length)")->required();
  geo->add_flag("--lifted", lifted, "integrate the desingularized 3-D flow");
  geo->add_option("--px", px0, "initial p_x of the lifted flow");

  // locus
  auto* loc = app.add_subcommand("locus", "compute front|sphere|cut|conjugate");
  std::string kind, eta_range, pz_range, branch_sel = "both";
  double t_front = 1.0, radius = 0.3;
  int resolution = 200;
  add_common(loc, cfg, config_path);
  loc->add_option("kind", kind, "front|sphere|cut|conjugate")->required();
  loc->add_option("--t", t_front, "front time");
  loc->add_option("--r", radius, "sphere radius");
  loc->add_option("--eta0", eta_range, "eta0 sweep, start:step:count");
  loc->add_option("--eta", eta_range, "eta sweep, start:step:count");
  loc->add_option("--pz-grid", pz_range, "p_z0 grid, start:step:count (default log-spaced)");
  loc->add_option("--branch", branch_sel, "upper|lower|both");
  loc->add_option("--resolution", resolution, "points per sphere arc");

  // perturb-constants
  auto* pc = app.add_subcommand("perturb-constants", "report expansion constants as JSON");
  add_common(pc, cfg, config_path);

  // verify
  auto* vf = app.add_subcommand("verify", "run the acceptance suite");
  add_common(vf, cfg, config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    validate(cfg);
    if (geo->parsed()) return run_geodesic(cfg, py, pz, t_end, lifted, px0);
    if (loc->parsed())
      return run_locus(cfg, kind, t_front, radius, eta_range, pz_range, branch_sel,
                       resolution);
    if (pc->parsed()) return run_perturb_constants(cfg);
    if (vf->parsed()) return run_verify(cfg);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
