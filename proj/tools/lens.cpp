// lens: command line front end. Subcommands build meshes, run the corner-mode
// decomposition, evaluate reference states, exercise the frame maps, run the
// verification suites, and glue two surfaces. Every report is plain CSV with
// the seed in the header and %.17g values, so identical invocations produce
// identical bytes. Exit codes: 0 ok, 1 a check failed, 2 bad input.
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lens/calculus.hpp"
#include "lens/errors.hpp"
#include "lens/gluing.hpp"
#include "lens/hodge.hpp"
#include "lens/mesh.hpp"
#include "lens/phasespace.hpp"
#include "lens/relativize.hpp"
#include "lens/rng.hpp"
#include "lens/states.hpp"
#include "lens/verify.hpp"
#include "lens/weyl.hpp"

namespace {

using cplx = std::complex<double>;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw lens::ParseError("cannot read " + path);
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw lens::ValidationError("cannot write " + out_path);
  f << text;
}

// "builtin:annulus(1,2,12,60)", a bare generator spec, or a mesh file path
lens::Mesh resolve_mesh(const std::string& arg) {
  if (arg.rfind("builtin:", 0) == 0) return lens::builtin_mesh(arg.substr(8));
  std::ifstream probe(arg);
  if (probe.good()) return lens::load_mesh(arg);
  return lens::builtin_mesh(arg);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// flat key = value pairs; section headers are ignored, values may be quoted
std::map<std::string, std::string> parse_flat_toml(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw lens::ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 &&
        ((value.front() == '"' && value.back() == '"') ||
         (value.front() == '\'' && value.back() == '\'')))
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw lens::ParseError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::string text = slurp(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw lens::ParseError("config " + path + " is not a JSON object");
    std::map<std::string, std::string> kv;
    for (const auto& [key, value] : j.items())
      kv[key] = value.is_string() ? value.get<std::string>() : value.dump();
    return kv;
  }
  return parse_flat_toml(text);
}

uint64_t parse_u64(const std::string& s) {
  try {
    size_t used = 0;
    uint64_t v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw lens::ParseError("not an unsigned integer: " + s);
  }
}

double parse_f64(const std::string& s) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw lens::ParseError("not a number: " + s);
  }
}

bool parse_flag(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw lens::ParseError("not a boolean: " + s);
}

// config fills every option the command line left at its default
struct ConfigBinder {
  CLI::App* cmd;
  std::map<std::string, std::string> kv;
  std::set<std::string> known;

  ConfigBinder(CLI::App* c, const std::string& path) : cmd(c) {
    if (!path.empty()) kv = load_config(path);
  }
  template <typename Fn>
  void bind(const char* flag, const char* key, Fn&& apply) {
    known.insert(key);
    auto it = kv.find(key);
    if (it == kv.end()) return;
    if (cmd->count(flag) > 0) return;
    apply(it->second);
  }
  void finish() const {
    for (const auto& [key, value] : kv)
      if (!known.count(key)) throw lens::ParseError("unknown config key: " + key);
  }
};

lens::InitialData seeded_data(const lens::BoundaryCalculus& c, uint64_t seed) {
  lens::Rng rng(seed);
  lens::InitialData d = lens::InitialData::zero(c);
  d.a = rng.normal_vector(c.n_edges());
  d.e = lens::enforce_interior_gauss(c, rng.normal_vector(c.n_edges()), d.rho);
  return d;
}

// coefficient defect after pairing terms by label, with a nearest-label
// fallback so a label that rounds differently on the two sides still matches
double element_distance(const lens::WeylElement& a, const lens::WeylElement& b,
                        double label_tol = 1e-9) {
  constexpr double kUnmatched = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::set<std::string> used;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  for (const auto& [key, term] : ta) {
    auto hit = tb.find(key);
    if (hit != tb.end() && !used.count(key)) {
      used.insert(key);
      worst = std::max(worst, std::abs(term.c - hit->second.c));
      continue;
    }
    const double scale = label_tol * (1.0 + term.v.lpNorm<Eigen::Infinity>());
    double best = kUnmatched;
    std::string best_key;
    for (const auto& [key2, term2] : tb) {
      if (used.count(key2)) continue;
      if (term2.v.size() != term.v.size()) return kUnmatched;
      const double d = (term.v - term2.v).lpNorm<Eigen::Infinity>();
      if (d <= scale && d < best) {
        best = d;
        best_key = key2;
      }
    }
    if (best_key.empty()) {
      worst = std::max(worst, std::abs(term.c));
      continue;
    }
    used.insert(best_key);
    worst = std::max(worst, std::abs(term.c - tb.at(best_key).c));
  }
  for (const auto& [key, term] : tb)
    if (!used.count(key)) worst = std::max(worst, std::abs(term.c));
  return worst;
}

int run_mesh(const std::string& mesh_arg, const std::string& op, const std::string& out) {
  lens::BoundaryCalculus c(resolve_mesh(mesh_arg));
  if (!op.empty()) {
    if (out.empty()) throw lens::ValidationError("--operator needs --out for the matrix file");
    lens::write_matrix_market(c.named_operator(op), out);
    std::printf("wrote %s for %s\n", op.c_str(), mesh_arg.c_str());
    return 0;
  }
  int with_boundary = 0;
  for (char has : c.mesh.component_has_boundary)
    if (has) ++with_boundary;
  std::string text = "# lens mesh 0.1.0\n# mesh=" + mesh_arg + "\nkey,value\n";
  text += "vertices," + std::to_string(c.n_vertices()) + "\n";
  text += "edges," + std::to_string(c.n_edges()) + "\n";
  text += "cells," + std::to_string(c.n_cells()) + "\n";
  text += "boundary_vertices," + std::to_string(c.n_bvertices()) + "\n";
  text += "boundary_segments," + std::to_string(c.n_bsegments()) + "\n";
  text += "boundary_circles," + std::to_string(lens::n_boundary_circles(c)) + "\n";
  text += "components," + std::to_string(c.mesh.n_components) + "\n";
  text += "components_with_boundary," + std::to_string(with_boundary) + "\n";
  text += "euler_characteristic," + std::to_string(c.mesh.euler_characteristic()) + "\n";
  text += "total_area," + fmt17(c.mesh.total_area()) + "\n";
  text += "length_scale," + fmt17(c.mesh.length_scale()) + "\n";
  emit(text, out);
  return 0;
}

int run_decompose(const std::string& mesh_arg, uint64_t seed, const std::string& data_path,
                  bool enforce, double tol_solve, const std::string& out) {
  lens::BoundaryCalculus c(resolve_mesh(mesh_arg));
  lens::InitialData d = data_path.empty()
                            ? seeded_data(c, seed)
                            : lens::initial_data_from_json_text(c, slurp(data_path), enforce);
  double residual = lens::gauss_residual(c, d.e, d.rho);
  lens::CHHCoords x = lens::chh_decompose(c, d);
  lens::InitialData rep = lens::chh_reconstruct(c, x, d.rho);
  lens::CHHCoords x2 = lens::chh_decompose(c, rep);
  double roundtrip = std::max({(x.F - x2.F).lpNorm<Eigen::Infinity>(),
                               (x.H - x2.H).lpNorm<Eigen::Infinity>(),
                               (x.f - x2.f).lpNorm<Eigen::Infinity>(),
                               (x.h - x2.h).lpNorm<Eigen::Infinity>()});

  std::string text = "# lens decompose 0.1.0\n# seed=" + std::to_string(seed) +
                     "\n# mesh=" + mesh_arg + "\n# gauss_residual=" + fmt17(residual) +
                     "\n# roundtrip_defect=" + fmt17(roundtrip) + "\nslot,index,value\n";
  auto rows = [&text](const char* slot, const Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i)
      text += std::string(slot) + "," + std::to_string(i) + "," + fmt17(v[i]) + "\n";
  };
  rows("F", x.F);
  rows("H", x.H);
  rows("f", x.f);
  rows("h", x.h);
  emit(text, out);
  return (residual <= tol_solve && roundtrip <= tol_solve) ? 0 : 1;
}

int run_verify_cmd(const std::string& suite, uint64_t seed, const std::string& out) {
  std::vector<lens::CheckResult> rows = lens::run_verify(suite, seed);
  emit(lens::csv_report(rows, seed), out);
  return lens::all_passed(rows) ? 0 : 1;
}

int run_state(const std::string& mesh_arg, uint64_t seed, int n_labels, const std::string& out) {
  lens::BoundaryCalculus c(resolve_mesh(mesh_arg));
  lens::ChhSpace s = lens::make_chh_space(c);
  lens::QuasiFreeState w = lens::l2_state(s.space);
  lens::Rng rng(seed);
  std::vector<Eigen::VectorXd> labels;
  std::string text = "# lens state 0.1.0\n# seed=" + std::to_string(seed) +
                     "\n# mesh=" + mesh_arg + "\n# space_dim=" + std::to_string(s.space->dim);
  std::string body = "label,re,im\n";
  for (int k = 0; k < n_labels; ++k) {
    // small amplitudes keep the Gaussian away from underflow
    Eigen::VectorXd v = 0.3 * rng.vector(s.space->dim);
    labels.push_back(v);
    cplx value = lens::evaluate(w, lens::generator(s.space, v));
    body += std::to_string(k) + "," + fmt17(value.real()) + "," + fmt17(value.imag()) + "\n";
  }
  double gram = labels.empty() ? 0.0 : lens::gram_min_eigenvalue(w, labels);
  text += "\n# gram_min_eigenvalue=" + fmt17(gram) + "\n" + body;
  emit(text, out);
  return 0;
}

int run_relativize(const std::string& mesh_arg, uint64_t seed, double tol_sym,
                   const std::string& out) {
  lens::BoundaryCalculus c(resolve_mesh(mesh_arg));
  lens::ChhSpace s = lens::make_chh_space(c);
  lens::ExtendedSpace x = lens::make_extended_space(s);
  lens::Rng rng(seed);
  const int dim = s.space->dim;

  int hom_defects = 0;
  for (int k = 0; k < 10; ++k) {
    lens::WeylElement a = lens::generator(s.space, rng.vector(dim));
    lens::WeylElement b = lens::generator(s.space, rng.vector(dim));
    lens::WeylElement lhs = lens::relativise(x, lens::multiply(a, b));
    lens::WeylElement rhs = lens::multiply(lens::relativise(x, a), lens::relativise(x, b));
    if (element_distance(lhs, rhs) > 0.0) ++hom_defects;
  }

  lens::WeylElement bulk = lens::WeylElement::zero(s.space);
  for (int t = 0; t < 3; ++t)
    bulk.add_term(rng.vector(dim), cplx(rng.symmetric(), rng.symmetric()));
  lens::WeylElement ra = lens::relativise(x, bulk);
  double invariance = 0.0;
  for (int k = 0; k < 5; ++k)
    invariance = std::max(invariance, element_distance(
                                          lens::joint_large_gauge(x, ra, rng.vector(c.n_bvertices())), ra));

  double cond = element_distance(lens::gamma(x, ra), bulk);
  for (int k = 0; k < 5; ++k) {
    lens::WeylElement ug =
        lens::generator(x.total, lens::gauge_direction(x, rng.vector(s.ns)));
    cond = std::max(cond, element_distance(lens::gamma(x, ug), lens::WeylElement::unit(s.space)));
  }

  double factor = 0.0;
  for (int k = 0; k < 5; ++k) {
    Eigen::VectorXd u = rng.vector(dim);
    Eigen::VectorXd fu = u.segment(2 * s.nc, s.ns);
    Eigen::VectorXd hu = u.segment(2 * s.nc + s.ns, s.ns);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(x.total->dim);
    y.segment(dim, s.ns) = fu;
    lens::WeylElement lhs =
        lens::multiply(lens::relativise(x, lens::generator(s.space, u)), lens::generator(x.total, y));
    Eigen::VectorXd full = lens::embed_with_dressing(x, u);
    full.segment(dim, s.ns) = fu;
    lens::WeylElement rhs =
        lens::scale(std::exp(cplx(0.0, -0.5 * fu.dot(hu))), lens::generator(x.total, full));
    factor = std::max(factor, element_distance(lhs, rhs));
  }

  std::vector<lens::CheckResult> rows;
  auto push = [&rows](const char* name, const char* qty, double value, double tol) {
    lens::CheckResult r;
    r.suite = "relativize";
    r.name = name;
    r.quantity = qty;
    r.value = value;
    r.tolerance = tol;
    r.pass = value <= tol;
    rows.push_back(r);
  };
  push("frame", "homomorphism_defects", hom_defects, 0.0);
  push("frame", "max_invariance_defect", invariance, tol_sym);
  push("frame", "max_expectation_defect", cond, tol_sym);
  push("frame", "max_factorization_defect", factor, tol_sym);
  emit(lens::csv_report(rows, seed), out);
  return lens::all_passed(rows) ? 0 : 1;
}

int run_spectrum(const std::string& mesh_arg, double cut, const std::string& out) {
  lens::BoundaryCalculus c(resolve_mesh(mesh_arg));
  Eigen::VectorXd theta = lens::angular_spectrum(c);
  std::string text = "# lens spectrum 0.1.0\n# mesh=" + mesh_arg + "\n";
  if (cut >= 0.0) {
    Eigen::MatrixXd pi = lens::angular_projector(c, cut);
    text += "# cut=" + fmt17(cut) + "\n# projector_trace=" + fmt17(pi.trace()) + "\n";
  }
  text += "index,value\n";
  for (int i = 0; i < theta.size(); ++i)
    text += std::to_string(i) + "," + fmt17(theta[i]) + "\n";
  emit(text, out);
  return 0;
}

struct GlueArgs {
  std::string mesh_a, mesh_b, match_path, out, states_out, labels_out;
  uint64_t seed = 1;
  double tol_sym = 1e-8;
  bool with_global = false;
};

int run_glue(const GlueArgs& ga) {
  lens::BoundaryCalculus c1(resolve_mesh(ga.mesh_a));
  lens::BoundaryCalculus c2(resolve_mesh(ga.mesh_b));
  lens::ChhSpace s1 = lens::make_chh_space(c1, "side1");
  lens::ChhSpace s2 = lens::make_chh_space(c2, "side2");

  std::vector<int> match;
  bool reversed = false;
  if (ga.match_path.empty()) {
    auto derived = lens::match_boundaries(c1, c2);
    match = derived.first;
    reversed = derived.second;
  } else {
    nlohmann::json j = nlohmann::json::parse(slurp(ga.match_path), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("vertex_pairs"))
      throw lens::ParseError("match file needs a vertex_pairs array");
    match.assign(c1.n_bvertices(), -1);
    for (const auto& pair : j["vertex_pairs"]) {
      if (!pair.is_array() || pair.size() != 2)
        throw lens::ParseError("vertex_pairs entries must be [side1, side2] pairs");
      int i = pair[0].get<int>();
      int k = pair[1].get<int>();
      if (i < 0 || i >= static_cast<int>(match.size()))
        throw lens::ParseError("vertex pair index out of range: " + std::to_string(i));
      match[i] = k;
    }
    reversed = j.value("reverse_orientation", false);
  }

  lens::GluingSetup g = lens::make_gluing(s1, s2, match, reversed);
  lens::Rng rng(ga.seed);

  std::vector<lens::CheckResult> rows;
  auto push = [&rows](const char* name, const char* qty, double value, double tol) {
    lens::CheckResult r;
    r.suite = "glue";
    r.name = name;
    r.quantity = qty;
    r.value = value;
    r.tolerance = tol;
    r.pass = value <= tol;
    rows.push_back(r);
  };

  const int ns = s1.ns;
  push("setup", "transfer_orthogonality",
       (g.transfer.transpose() * g.transfer - Eigen::MatrixXd::Identity(ns, ns))
           .lpNorm<Eigen::Infinity>(),
       ga.tol_sym);
  push("setup", "invariant_count_defect",
       std::abs(static_cast<int>(g.invariants.basis.cols()) - (g.pair12->dim - ns)), 0.0);

  double diagram = 0.0;
  for (int k = 0; k < 10; ++k) {
    lens::WeylElement a = lens::generator(g.half12, rng.vector(g.half12->dim));
    diagram = std::max(diagram, element_distance(lens::psi_circle_bullet(g, lens::xi_21(g, a)),
                                                 lens::psi_bullet_circle(g, a)));
  }
  push("algebra", "max_diagram_defect", diagram, ga.tol_sym);

  double ideal = 0.0;
  for (int k = 0; k < 5; ++k) {
    lens::WeylElement ug = lens::diagonal_gauge_unitary(g, rng.vector(ns));
    ideal = std::max(ideal, element_distance(lens::won_normal_form(g, ug),
                                             lens::WeylElement::unit(g.glued)));
  }
  push("algebra", "max_ideal_defect", ideal, ga.tol_sym);

  lens::QuasiFreeState w1 = lens::l2_state(s1.space);
  lens::QuasiFreeState w2 = lens::l2_state(s2.space);
  lens::GluedState st12 = lens::glue_states(g, w1, w2, lens::GlueMode::one_two);
  lens::GluedState st21 = lens::glue_states(g, w1, w2, lens::GlueMode::two_one);
  lens::GluedState stmix = lens::glue_states(g, w1, w2, lens::GlueMode::mix);
  double mode_defect = 0.0;
  std::string state_report = "# lens glue states 0.1.0\n# seed=" + std::to_string(ga.seed) +
                             "\ndraw,mode,re,im\n";
  for (int k = 0; k < 5; ++k) {
    lens::WeylElement a = lens::generator(g.glued, 0.3 * rng.vector(g.glued->dim));
    cplx v12 = lens::evaluate(st12, a);
    cplx v21 = lens::evaluate(st21, a);
    cplx vmix = lens::evaluate(stmix, a);
    mode_defect = std::max(mode_defect, std::abs(v12 - v21));
    state_report += std::to_string(k) + ",one_two," + fmt17(v12.real()) + "," +
                    fmt17(v12.imag()) + "\n";
    state_report += std::to_string(k) + ",two_one," + fmt17(v21.real()) + "," +
                    fmt17(v21.imag()) + "\n";
    state_report += std::to_string(k) + ",mix," + fmt17(vmix.real()) + "," + fmt17(vmix.imag()) +
                    "\n";
  }
  push("states", "max_l2_mode_defect", mode_defect, ga.tol_sym);

  lens::CompatibilityReport rep = lens::compatibility_check(g, w1, w2);
  push("states", "compatibility_defect", rep.compatible ? rep.max_defect : 1.0, ga.tol_sym);

  std::string label_report;
  if (ga.with_global) {
    lens::attach_global(g);
    const lens::BoundaryCalculus& cu = *g.global->calc;
    push("global", "closed_union_defect", cu.n_bvertices(), 0.0);
    double additivity = 0.0;
    for (int k = 0; k < 10; ++k) {
      lens::InitialData dx = seeded_data(cu, rng.next_u64());
      lens::InitialData dy = seeded_data(cu, rng.next_u64());
      double s_global = lens::sigma(cu, dx, dy);
      Eigen::VectorXd lx = lens::glued_label(g, lens::reduce_global(g, dx));
      Eigen::VectorXd ly = lens::glued_label(g, lens::reduce_global(g, dy));
      additivity = std::max(additivity, std::abs(g.glued->pair(lx, ly) - s_global) /
                                            (1.0 + std::abs(s_global)));
    }
    push("global", "max_sigma_defect", additivity, ga.tol_sym);

    label_report = "# lens glue labels 0.1.0\n# seed=" + std::to_string(ga.seed) +
                   "\ndraw,index,value\n";
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd lx = lens::glued_label(g, lens::reduce_global(g, seeded_data(cu, rng.next_u64())));
      for (int i = 0; i < lx.size(); ++i)
        label_report += std::to_string(k) + "," + std::to_string(i) + "," + fmt17(lx[i]) + "\n";
    }
  } else if (!ga.labels_out.empty()) {
    throw lens::ValidationError("--report-labels needs --global");
  }

  emit(lens::csv_report(rows, ga.seed), ga.out);
  if (!ga.states_out.empty()) emit(state_report, ga.states_out);
  if (!ga.labels_out.empty()) emit(label_report, ga.labels_out);
  return lens::all_passed(rows) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 1;
  if (const char* env = std::getenv("LENS_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end && *end == '\0' && n > 0) threads = static_cast<int>(n);
  }
  Eigen::setNbThreads(threads);

  CLI::App app{"discrete field algebras on surfaces with corners"};
  app.set_version_flag("--version", "0.1.0");
  app.require_subcommand(1);

  std::string mesh_arg, out, config, op, data_path, suite = "all";
  uint64_t seed = 1;
  int n_labels = 12;
  double tol_solve = 1e-9, tol_sym = 1e-8, cut = -1.0;
  bool enforce = false;
  GlueArgs ga;

  CLI::App* cmd_mesh = app.add_subcommand("mesh", "mesh summary or operator export");
  cmd_mesh->add_option("--mesh", mesh_arg, "builtin spec or mesh file")->required();
  cmd_mesh->add_option("--operator", op, "export one named operator as matrix market");
  cmd_mesh->add_option("--out", out, "output path (default stdout)");
  cmd_mesh->add_option("--config", config, "TOML or JSON config file");

  CLI::App* cmd_dec = app.add_subcommand("decompose", "corner-mode decomposition report");
  cmd_dec->add_option("--mesh", mesh_arg, "builtin spec or mesh file")->required();
  cmd_dec->add_option("--seed", seed, "seed for generated data");
  cmd_dec->add_option("--data", data_path, "initial data JSON instead of seeded data");
  cmd_dec->add_flag("--enforce", enforce, "project file data onto the constraint");
  cmd_dec->add_option("--tol-solve", tol_solve, "solver residual tolerance");
  cmd_dec->add_option("--out", out, "output path (default stdout)");
  cmd_dec->add_option("--config", config, "TOML or JSON config file");

  CLI::App* cmd_ver = app.add_subcommand("verify", "run the verification suites");
  cmd_ver->add_option("--suite", suite, "suite name or all");
  cmd_ver->add_option("--seed", seed, "report seed");
  cmd_ver->add_option("--out", out, "output path (default stdout)");
  cmd_ver->add_option("--config", config, "TOML or JSON config file");

  CLI::App* cmd_state = app.add_subcommand("state", "reference state evaluation report");
  cmd_state->add_option("--mesh", mesh_arg, "builtin spec or mesh file")->required();
  cmd_state->add_option("--seed", seed, "label seed");
  cmd_state->add_option("--labels", n_labels, "number of evaluated labels");
  cmd_state->add_option("--out", out, "output path (default stdout)");
  cmd_state->add_option("--config", config, "TOML or JSON config file");

  CLI::App* cmd_rel = app.add_subcommand("relativize", "frame map checks on a mesh");
  cmd_rel->add_option("--mesh", mesh_arg, "builtin spec or mesh file")->required();
  cmd_rel->add_option("--seed", seed, "check seed");
  cmd_rel->add_option("--tol-sym", tol_sym, "algebraic defect tolerance");
  cmd_rel->add_option("--out", out, "output path (default stdout)");
  cmd_rel->add_option("--config", config, "TOML or JSON config file");

  CLI::App* cmd_spec = app.add_subcommand("spectrum", "boundary angular spectrum");
  cmd_spec->add_option("--mesh", mesh_arg, "builtin spec or mesh file")->required();
  cmd_spec->add_option("--cut", cut, "also report the projector trace at this cutoff");
  cmd_spec->add_option("--out", out, "output path (default stdout)");
  cmd_spec->add_option("--config", config, "TOML or JSON config file");

  CLI::App* cmd_glue = app.add_subcommand("glue", "glue two surfaces along their boundary");
  cmd_glue->add_option("--mesh-a", ga.mesh_a, "side 1 builtin spec or mesh file")->required();
  cmd_glue->add_option("--mesh-b", ga.mesh_b, "side 2 builtin spec or mesh file")->required();
  cmd_glue->add_option("--match", ga.match_path,
                       "boundary match JSON {vertex_pairs, reverse_orientation}");
  cmd_glue->add_flag("--global", ga.with_global, "attach the union surface and check additivity");
  cmd_glue->add_option("--seed", ga.seed, "check seed");
  cmd_glue->add_option("--tol-sym", ga.tol_sym, "algebraic defect tolerance");
  cmd_glue->add_option("--out", ga.out, "check report path (default stdout)");
  cmd_glue->add_option("--report-states", ga.states_out, "also write state evaluations here");
  cmd_glue->add_option("--report-labels", ga.labels_out,
                       "also write glued labels here (needs --global)");
  cmd_glue->add_option("--config", config, "TOML or JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    ConfigBinder cfg(active, config);
    auto bind_mesh = [&] { cfg.bind("--mesh", "mesh", [&](const std::string& v) { mesh_arg = v; }); };
    auto bind_seed = [&] { cfg.bind("--seed", "seed", [&](const std::string& v) { seed = parse_u64(v); }); };
    auto bind_out = [&] { cfg.bind("--out", "out", [&](const std::string& v) { out = v; }); };
    if (active == cmd_mesh) {
      bind_mesh();
      bind_out();
      cfg.bind("--operator", "operator", [&](const std::string& v) { op = v; });
    } else if (active == cmd_dec) {
      bind_mesh();
      bind_seed();
      bind_out();
      cfg.bind("--data", "data", [&](const std::string& v) { data_path = v; });
      cfg.bind("--enforce", "enforce", [&](const std::string& v) { enforce = parse_flag(v); });
      cfg.bind("--tol-solve", "tol_solve", [&](const std::string& v) { tol_solve = parse_f64(v); });
    } else if (active == cmd_ver) {
      bind_seed();
      bind_out();
      cfg.bind("--suite", "suite", [&](const std::string& v) { suite = v; });
    } else if (active == cmd_state) {
      bind_mesh();
      bind_seed();
      bind_out();
      cfg.bind("--labels", "labels",
               [&](const std::string& v) { n_labels = static_cast<int>(parse_u64(v)); });
    } else if (active == cmd_rel) {
      bind_mesh();
      bind_seed();
      bind_out();
      cfg.bind("--tol-sym", "tol_sym", [&](const std::string& v) { tol_sym = parse_f64(v); });
    } else if (active == cmd_spec) {
      bind_mesh();
      bind_out();
      cfg.bind("--cut", "cut", [&](const std::string& v) { cut = parse_f64(v); });
    } else if (active == cmd_glue) {
      cfg.bind("--mesh-a", "mesh_a", [&](const std::string& v) { ga.mesh_a = v; });
      cfg.bind("--mesh-b", "mesh_b", [&](const std::string& v) { ga.mesh_b = v; });
      cfg.bind("--match", "match", [&](const std::string& v) { ga.match_path = v; });
      cfg.bind("--global", "global", [&](const std::string& v) { ga.with_global = parse_flag(v); });
      cfg.bind("--seed", "seed", [&](const std::string& v) { ga.seed = parse_u64(v); });
      cfg.bind("--tol-sym", "tol_sym", [&](const std::string& v) { ga.tol_sym = parse_f64(v); });
      cfg.bind("--out", "out", [&](const std::string& v) { ga.out = v; });
    }
    cfg.finish();

    if (active == cmd_mesh) return run_mesh(mesh_arg, op, out);
    if (active == cmd_dec) return run_decompose(mesh_arg, seed, data_path, enforce, tol_solve, out);
    if (active == cmd_ver) return run_verify_cmd(suite, seed, out);
    if (active == cmd_state) return run_state(mesh_arg, seed, n_labels, out);
    if (active == cmd_rel) return run_relativize(mesh_arg, seed, tol_sym, out);
    if (active == cmd_spec) return run_spectrum(mesh_arg, cut, out);
    if (active == cmd_glue) return run_glue(ga);
    return 2;
  } catch (const lens::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
