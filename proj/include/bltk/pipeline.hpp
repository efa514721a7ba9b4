#pragma once
// Run configuration and the staged pipeline behind the CLI: validate, roots,
// solve (inner/outer), flatness, report.  Stage artifacts are JSON/CSV files
// tagged with a hash of the effective config + code version so stale outputs
// from an earlier config can never be mixed in.

#include <string>
#include <vector>

#include "bltk/asymptotics.hpp"
#include "bltk/geometry.hpp"

namespace bltk {

inline constexpr const char* kCodeVersion = "1.0.0";

// Exit codes shared by all stages.
enum : int {
  kExitOk = 0,
  kExitConstraint = 1,
  kExitInput = 2,
  kExitOrder = 3,
  kExitNumeric = 4,
};

struct PipelineOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string spec_path;
  std::string output_dir;
  ScaleParams params;
  EquationSpec spec;
  int covering_count = 4;
  double tol = 1e-9;
  int max_iter = 200;
  int n_r = 72;
  int n_m = 65;
  double zeta1 = 0.01;
  double x_abs = 0.25;
  double arc_inner = 0.0;
  double arc_outer = 0.0;
  double delta1 = 0.5;
  int eps_points = 6;
  double Delta_nu = 1.0;
  double t_probe_min = 0.5;
  double t_probe_max = 1.0;
  double R_out = 8.0;
  std::vector<double> eps_override;  // solve-stage |eps| values, from --eps
  std::string tag;  // content hash of (effective config, code version)
};

// Loads a config file, applies dot-path KEY=VALUE overrides, loads the
// referenced equation spec, finalizes the scale parameters, and computes the
// artifact tag.  Throws std::invalid_argument on parse/validation problems.
RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides = {},
                          const std::string& out_dir_override = "",
                          const std::string& eps_list = "");

int cmd_validate(const RunConfig& cfg);
int cmd_roots(const RunConfig& cfg);
int cmd_solve_inner(const RunConfig& cfg);
int cmd_solve_outer(const RunConfig& cfg);
int cmd_flatness(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

// Dispatch by stage name ("validate", "roots", "solve_inner", "solve_outer",
// "flatness", "report", "all"); unknown stage -> kExitInput.  Exceptions are
// mapped to exit codes; the message lands in *err when provided.
int run_stage(const RunConfig& cfg, const std::string& stage,
              std::string* err = nullptr);

// The eps values used by the solve stages (moduli <= eps0/4, fixed phase).
std::vector<cplx> solve_eps_values(const RunConfig& cfg);

// Inner radial grid rim for a given eps: covers the Laplace damping range and
// the flatness arc.
double inner_grid_rim(const RunConfig& cfg, cplx eps);

}  // namespace bltk
