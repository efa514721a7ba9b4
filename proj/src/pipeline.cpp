#include "bltk/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bltk/io.hpp"
#include "json.hpp"

namespace bltk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write file: " + path);
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void apply_override(json& j, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must be KEY=VALUE: " + kv);
  std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
  json* cur = &j;
  std::size_t pos = 0;
  while (true) {
    auto dot = key.find('.', pos);
    std::string part = key.substr(pos, dot - pos);
    if (dot == std::string::npos) {
      json parsed = json::parse(val, nullptr, false);
      (*cur)[part] = parsed.is_discarded() ? json(val) : parsed;
      return;
    }
    cur = &(*cur)[part];
    pos = dot + 1;
  }
}

std::string artifact_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

json require_artifact(const RunConfig& cfg, const std::string& name,
                      const std::string& stage) {
  std::string path = artifact_path(cfg, name);
  if (!fs::exists(path))
    throw PipelineOrderError("stage '" + stage + "' missing; run it before");
  json j = json::parse(read_file(path));
  if (j.value("tag", "") != cfg.tag)
    throw PipelineOrderError("stage '" + stage +
                             "' artifact is stale (tag mismatch); re-run it");
  return j;
}

}  // namespace

RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides,
                          const std::string& out_dir_override,
                          const std::string& eps_list) {
  json j = json::parse(read_file(path));
  for (const auto& ov : overrides) apply_override(j, ov);

  RunConfig cfg;
  cfg.spec_path = j.at("spec_path").get<std::string>();
  cfg.output_dir = out_dir_override.empty()
                       ? j.at("output_dir").get<std::string>()
                       : out_dir_override;
  cfg.params = scale_params_from_json(j.at("params").dump());
  if (j.contains("covering"))
    cfg.covering_count = j["covering"].value("count", cfg.covering_count);
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    cfg.tol = s.value("tol", cfg.tol);
    cfg.max_iter = s.value("max_iter", cfg.max_iter);
    cfg.n_r = s.value("n_r", cfg.n_r);
    cfg.n_m = s.value("n_m", cfg.n_m);
    cfg.zeta1 = s.value("zeta1", cfg.zeta1);
    cfg.x_abs = s.value("x_abs", cfg.x_abs);
  }
  if (j.contains("flatness")) {
    const auto& f = j["flatness"];
    cfg.arc_inner = f.value("arc_inner", cfg.arc_inner);
    cfg.arc_outer = f.value("arc_outer", cfg.arc_outer);
    cfg.delta1 = f.value("delta1", cfg.delta1);
    cfg.eps_points = f.value("eps_points", cfg.eps_points);
  }
  if (j.contains("outer_domain")) {
    const auto& o = j["outer_domain"];
    cfg.Delta_nu = o.value("Delta_nu", cfg.Delta_nu);
    cfg.t_probe_min = o.value("t_probe_min", cfg.t_probe_min);
    cfg.t_probe_max = o.value("t_probe_max", cfg.t_probe_max);
    cfg.R_out = o.value("R_out", cfg.R_out);
  }
  if (!eps_list.empty()) {
    std::istringstream is(eps_list);
    std::string tok;
    while (std::getline(is, tok, ','))
      if (!tok.empty()) cfg.eps_override.push_back(std::stod(tok));
    if (cfg.eps_override.empty())
      throw std::invalid_argument("empty --eps list");
  }

  cfg.spec = load_equation_spec(cfg.spec_path);
  check_structure(cfg.spec);
  finalize_params(cfg.params, cfg.spec);
  cfg.tag = fnv1a_hex(j.dump() + "|" + kCodeVersion);
  return cfg;
}

std::vector<cplx> solve_eps_values(const RunConfig& cfg) {
  std::vector<cplx> out;
  cplx phase = std::exp(cplx(0.0, 0.1));
  if (!cfg.eps_override.empty()) {
    for (double m : cfg.eps_override) out.push_back(m * phase);
    return out;
  }
  double top = cfg.params.eps0 / 4.0;
  for (int i = 0; i < 3; ++i)
    out.push_back(top * std::pow(std::sqrt(0.5), i) * phase);
  return out;
}

double inner_grid_rim(const RunConfig& cfg, cplx eps) {
  double damp = std::pow(40.0, 1.0 / cfg.params.kappa) * cfg.x_abs *
                std::pow(std::abs(eps), cfg.params.chi.value());
  return std::max(damp, 3.0 * cfg.arc_inner);
}

int cmd_validate(const RunConfig& cfg) {
  auto inner = validate_inner(cfg.spec, cfg.params);
  auto outer = validate_outer(cfg.spec, cfg.params);
  auto small = check_smallness(cfg.spec, cfg.params, cfg.zeta1);
  json j;
  j["tag"] = cfg.tag;
  j["inner"] = json::parse(inner.to_json());
  j["outer"] = json::parse(outer.to_json());
  j["smallness"] = json::parse(small.to_json());
  j["pass"] = inner.overall && outer.overall;
  write_file(artifact_path(cfg, "validate.json"), j.dump(2) + "\n");
  return (inner.overall && outer.overall) ? kExitOk : kExitConstraint;
}

int cmd_roots(const RunConfig& cfg) {
  require_artifact(cfg, "validate.json", "validate");
  std::vector<double> eps_seq;
  for (int i = 0; i < 8; ++i) eps_seq.push_back(1e-2 * std::pow(0.5, i));
  std::ostringstream csv;
  csv.precision(17);
  csv << "eps,root_index,re,im,modulus\n";
  for (double e : eps_seq) {
    auto roots = roots_P(cplx(e, 0.0), cfg.spec);
    for (std::size_t i = 0; i < roots.size(); ++i)
      csv << e << "," << i << "," << roots[i].real() << "," << roots[i].imag()
          << "," << std::abs(roots[i]) << "\n";
  }
  double expo = merging_exponent(cfg.spec, eps_seq);
  auto win = rouche_mu_window(cfg.spec);
  double mu = 0.5 * (win.first + win.second);
  int count = rouche_count(cplx(1e-3, 0.0), mu, cfg.spec);
  write_file(artifact_path(cfg, "roots.csv"), csv.str());
  json j;
  j["tag"] = cfg.tag;
  j["merging_exponent"] = expo;
  j["mu_window"] = {win.first, win.second};
  j["rouche_mu"] = mu;
  j["rouche_count"] = count;
  write_file(artifact_path(cfg, "roots.json"), j.dump(2) + "\n");
  return kExitOk;
}

int cmd_solve_inner(const RunConfig& cfg) {
  require_artifact(cfg, "validate.json", "validate");
  auto cov = build_covering(cfg.covering_count, 2.0 * M_PI / cfg.covering_count,
                            cfg.params.eps0);
  auto fam = associate_inner(cov, cfg.spec, cfg.params, cfg.x_abs, cfg.x_abs);
  AdmissibilityReport adm = sector_admissibility(
      fam.adm_direction, fam.adm_aperture, cfg.params.rho, cfg.spec,
      cfg.params, 1.0);
  json j;
  j["tag"] = cfg.tag;
  j["runs"] = json::array();
  int idx = 0;
  for (cplx eps : solve_eps_values(cfg)) {
    double dir = fam.select(0, eps, cplx(cfg.x_abs, 0.0));
    auto grid = geometric_grid(inner_grid_rim(cfg, eps), cfg.n_r);
    RayGrid2D shape =
        RayGrid2D::zeros(dir, grid, 20.0 / cfg.params.beta, cfg.n_m);
    auto fp = solve_inner(eps, cfg.spec, cfg.params, adm, shape, cfg.tol,
                          cfg.max_iter);
    std::string fp_name = "inner_fp_" + std::to_string(idx++) + ".json";
    save_fixed_point(fp, artifact_path(cfg, fp_name));
    json r;
    r["eps"] = {eps.real(), eps.imag()};
    r["direction"] = dir;
    r["iterations"] = fp.iterations;
    r["residual_norm"] = fp.residual_norm;
    r["solution_norm"] = fnorm(fp.solution, eps, cfg.params);
    r["contraction_ratios"] = fp.contraction_ratios;
    r["fixed_point"] = fp_name;
    j["runs"].push_back(r);
  }
  write_file(artifact_path(cfg, "solve_inner.json"), j.dump(2) + "\n");
  return kExitOk;
}

int cmd_solve_outer(const RunConfig& cfg) {
  require_artifact(cfg, "validate.json", "validate");
  auto cov = build_covering(cfg.covering_count, 2.0 * M_PI / cfg.covering_count,
                            cfg.params.eps0);
  auto fam = associate_outer(cov, cfg.spec, cfg.params, cfg.Delta_nu,
                             cfg.t_probe_min, cfg.t_probe_max, cfg.delta1);
  json j;
  j["tag"] = cfg.tag;
  j["runs"] = json::array();
  int idx = 0;
  for (cplx eps : solve_eps_values(cfg)) {
    double nu_out = cfg.params.nu_outer_effective();
    if (!(std::pow(std::abs(eps), cfg.params.Gamma.value()) <
          nu_out / cfg.spec.forcing.KF))
      throw std::domain_error(
          "cmd_solve_outer: |eps|^Gamma >= nu/KF (outer norm not finite)");
    double dir = fam.select(0, eps, cplx(cfg.t_probe_min, 0.0));
    auto grid = geometric_grid(cfg.R_out, cfg.n_r);
    OuterGrid2D shape =
        OuterGrid2D::zeros(dir, grid, 20.0 / cfg.params.beta, cfg.n_m);
    auto fp = solve_outer(eps, cfg.spec, cfg.params, shape, cfg.tol,
                          cfg.max_iter);
    std::string fp_name = "outer_fp_" + std::to_string(idx++) + ".json";
    save_fixed_point(fp, artifact_path(cfg, fp_name));
    json r;
    r["eps"] = {eps.real(), eps.imag()};
    r["direction"] = dir;
    r["iterations"] = fp.iterations;
    r["residual_norm"] = fp.residual_norm;
    r["solution_norm"] = enorm(fp.solution, eps, cfg.params);
    r["contraction_ratios"] = fp.contraction_ratios;
    r["fixed_point"] = fp_name;
    j["runs"].push_back(r);
  }
  write_file(artifact_path(cfg, "solve_outer.json"), j.dump(2) + "\n");
  return kExitOk;
}

namespace {

json fit_to_json(const FlatnessFit& f) {
  json j;
  j["order"] = f.order_tested;
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["r2"] = f.r2;
  j["eps"] = f.eps_points;
  j["log_theta"] = f.log_theta;
  return j;
}

FlatnessFit fit_from_json(const json& j) {
  FlatnessFit f;
  f.order_tested = j.at("order").get<double>();
  f.slope = j.at("slope").get<double>();
  f.intercept = j.at("intercept").get<double>();
  f.r2 = j.at("r2").get<double>();
  f.eps_points = j.at("eps").get<std::vector<double>>();
  f.log_theta = j.at("log_theta").get<std::vector<double>>();
  return f;
}

}  // namespace

int cmd_flatness(const RunConfig& cfg) {
  require_artifact(cfg, "validate.json", "validate");
  require_artifact(cfg, "solve_inner.json", "solve_inner");
  require_artifact(cfg, "solve_outer.json", "solve_outer");
  const ScaleParams& p = cfg.params;
  auto cov = build_covering(cfg.covering_count, 2.0 * M_PI / cfg.covering_count,
                            p.eps0);
  auto fam_in = associate_inner(cov, cfg.spec, p, cfg.x_abs, cfg.x_abs);
  auto fam_out = associate_outer(cov, cfg.spec, p, cfg.Delta_nu,
                                 cfg.t_probe_min, cfg.t_probe_max, cfg.delta1);
  AdmissibilityReport adm = sector_admissibility(
      fam_in.adm_direction, fam_in.adm_aperture, p.rho, cfg.spec, p, 1.0);
  double overlap_phase = M_PI / cfg.covering_count;  // bisector of Z_{0,1}

  // Probe meshes.
  std::vector<cplx> xs, zs, ts;
  for (int i = 0; i < 5; ++i) {
    xs.push_back(cfg.x_abs * std::exp(cplx(0.0, -0.08 + 0.04 * i)));
    zs.push_back(cplx(-0.5 + 0.25 * i, 0.0));
    ts.push_back(cplx(cfg.t_probe_min +
                          (cfg.t_probe_max - cfg.t_probe_min) * i / 4.0,
                      0.0));
  }

  std::ostringstream csv;
  csv.precision(17);
  csv << "family,eps,log_theta\n";

  double k_in = (p.chi * Rational(p.kappa)).value();
  double A_in = cfg.delta1 * std::pow(cfg.arc_inner, p.kappa) /
                std::pow(cfg.x_abs, p.kappa);
  auto ladder_in = flatness_ladder(A_in, k_in, p.eps0, cfg.eps_points);
  std::vector<double> logs_in;
  for (double ae : ladder_in) {
    cplx eps = ae * std::exp(cplx(0.0, overlap_phase));
    double da = fam_in.select(0, eps, cplx(cfg.x_abs, 0.0));
    double db = fam_in.select(1, eps, cplx(cfg.x_abs, 0.0));
    auto grid = geometric_grid(inner_grid_rim(cfg, eps), cfg.n_r);
    RayGrid2D shape = RayGrid2D::zeros(0.0, grid, 20.0 / p.beta, cfg.n_m);
    double lg = inner_cocycle_log(eps, cfg.spec, p, adm, shape, da, db,
                                  cfg.arc_inner, xs, zs, 9, cfg.tol);
    logs_in.push_back(lg);
    csv << "inner," << ae << "," << lg << "\n";
  }

  double k_out = p.gamma.value();
  double A_out = cfg.delta1 * cfg.arc_outer * cfg.t_probe_min;
  auto ladder_out = flatness_ladder(A_out, k_out, p.eps0, cfg.eps_points);
  std::vector<double> logs_out;
  for (double ae : ladder_out) {
    cplx eps = ae * std::exp(cplx(0.0, overlap_phase));
    double da = fam_out.select(0, eps, cplx(cfg.t_probe_min, 0.0));
    double db = fam_out.select(1, eps, cplx(cfg.t_probe_min, 0.0));
    auto grid = geometric_grid(cfg.R_out, cfg.n_r);
    OuterGrid2D shape = OuterGrid2D::zeros(0.0, grid, 20.0 / p.beta, cfg.n_m);
    double lg = outer_cocycle_log(eps, cfg.spec, p, shape, da, db,
                                  cfg.arc_outer, ts, zs, 9, cfg.tol);
    logs_out.push_back(lg);
    csv << "outer," << ae << "," << lg << "\n";
  }

  json j;
  j["tag"] = cfg.tag;
  j["inner_fits"] = json::array();
  j["outer_fits"] = json::array();
  for (double f : {0.5, 1.0, 2.0})
    j["inner_fits"].push_back(
        fit_to_json(fit_flatness(logs_in, ladder_in, f * k_in)));
  for (double f : {0.5, 1.0, 2.0})
    j["outer_fits"].push_back(
        fit_to_json(fit_flatness(logs_out, ladder_out, f * k_out)));
  write_file(artifact_path(cfg, "flatness.csv"), csv.str());
  write_file(artifact_path(cfg, "flatness.json"), j.dump(2) + "\n");
  return kExitOk;
}

int cmd_report(const RunConfig& cfg) {
  require_artifact(cfg, "validate.json", "validate");
  json roots = require_artifact(cfg, "roots.json", "roots");
  json flat = require_artifact(cfg, "flatness.json", "flatness");
  std::vector<FlatnessFit> fin, fout;
  for (const auto& f : flat.at("inner_fits")) fin.push_back(fit_from_json(f));
  for (const auto& f : flat.at("outer_fits")) fout.push_back(fit_from_json(f));
  json j = json::parse(gevrey_report(fin, fout, cfg.params));
  j["tag"] = cfg.tag;
  j["merging_exponent"] = roots.at("merging_exponent");
  j["rouche_count"] = roots.at("rouche_count");
  auto gap = scaling_gap(cfg.params, cfg.x_abs, cfg.Delta_nu);
  j["scaling_gap"] = {{"margin", gap.margin},
                      {"eps_threshold", gap.eps_threshold}};
  bool disjoint = true;
  for (int i = 1; i <= 20; ++i) {
    cplx eps = 0.95 * gap.eps_threshold * i / 20.0 *
               std::exp(cplx(0.0, 0.3 * i));
    if (std::abs(eps) > 0.0 &&
        !time_domains_disjoint(cfg.params, cfg.x_abs, cfg.Delta_nu, eps))
      disjoint = false;
  }
  j["time_domains_disjoint_below_threshold"] = disjoint;
  write_file(artifact_path(cfg, "report.json"), j.dump(2) + "\n");
  return kExitOk;
}

int run_stage(const RunConfig& cfg, const std::string& stage, std::string* err) {
  try {
    if (stage == "validate") return cmd_validate(cfg);
    if (stage == "roots") return cmd_roots(cfg);
    if (stage == "solve_inner") return cmd_solve_inner(cfg);
    if (stage == "solve_outer") return cmd_solve_outer(cfg);
    if (stage == "flatness") return cmd_flatness(cfg);
    if (stage == "report") return cmd_report(cfg);
    if (stage == "all") {
      for (const char* s : {"validate", "roots", "solve_inner", "solve_outer",
                            "flatness", "report"}) {
        int rc = run_stage(cfg, s, err);
        if (rc != kExitOk) return rc;
      }
      return kExitOk;
    }
  } catch (const PipelineOrderError& e) {
    if (err) *err = e.what();
    return kExitOrder;
  } catch (const std::invalid_argument& e) {
    if (err) *err = e.what();
    return kExitInput;
  } catch (const std::exception& e) {
    if (err) *err = e.what();
    return kExitNumeric;
  }
  if (err) *err = "unknown stage: " + stage;
  return kExitInput;
}

}  // namespace bltk
