// Command-line front end for the toolkit.  Talks to the core exclusively
// through the public C interface (bltk.h); all numerics live in the shared
// library.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bltk.h"

int main(int argc, char** argv) {
  CLI::App app{"Boundary-layer asymptotics toolkit"};
  app.set_version_flag("--version", std::string(bltk_version()));

  std::string stage;
  std::string config_path;
  std::string out_dir;
  std::string eps_list;
  std::vector<std::string> overrides;

  app.add_option("stage", stage,
                 "Pipeline stage: validate, roots, solve_inner, solve_outer, "
                 "flatness, report, or all")
      ->required();
  app.add_option("--config", config_path, "Run configuration JSON file")
      ->required();
  app.add_option("--override", overrides,
                 "Config override KEY=VALUE (dot paths; repeatable)");
  app.add_option("--eps", eps_list,
                 "Comma-separated |eps| values for the solve stages");
  app.add_option("--out", out_dir, "Output directory (overrides config)");

  CLI11_PARSE(app, argc, argv);

  std::vector<const char*> ov;
  ov.reserve(overrides.size());
  for (const auto& o : overrides) ov.push_back(o.c_str());

  bltk_run* run = nullptr;
  int rc = bltk_run_open(config_path.c_str(), ov.empty() ? nullptr : ov.data(),
                         static_cast<int>(ov.size()),
                         out_dir.empty() ? nullptr : out_dir.c_str(),
                         eps_list.empty() ? nullptr : eps_list.c_str(), &run);
  if (rc != BLTK_OK) {
    std::fprintf(stderr, "error: %s\n", bltk_last_error());
    return rc;
  }

  rc = bltk_run_stage(run, stage.c_str());
  if (rc != BLTK_OK) {
    const char* msg = bltk_last_error();
    std::fprintf(stderr, "error (exit %d): %s\n", rc,
                 msg && msg[0] ? msg : "stage failed");
  }
  bltk_run_close(run);
  return rc;
}
