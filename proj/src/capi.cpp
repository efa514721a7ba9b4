// C ABI over the pipeline: opaque run handles, exit codes, thread-local error
// strings.  The shared library builds with hidden visibility; BLTK_API marks
// the exported surface.

#include "bltk.h"

#include <new>
#include <string>
#include <vector>

#include "bltk/pipeline.hpp"
#include "bltk/transforms.hpp"

struct bltk_run {
  bltk::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

std::vector<std::string> collect(const char* const* items, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i)
    if (items && items[i]) out.emplace_back(items[i]);
  return out;
}

}  // namespace

extern "C" {

const char* bltk_version(void) { return bltk::kCodeVersion; }

const char* bltk_last_error(void) { return g_last_error.c_str(); }

int bltk_run_open(const char* config_path, const char* const* overrides,
                  int n_overrides, const char* out_dir, const char* eps_list,
                  bltk_run** out) {
  set_error("");
  if (!config_path || !out) {
    set_error("bltk_run_open: config_path and out must be non-null");
    return BLTK_ERR_INPUT;
  }
  *out = nullptr;
  try {
    auto run = new bltk_run{bltk::load_run_config(
        config_path, collect(overrides, n_overrides),
        out_dir ? out_dir : "", eps_list ? eps_list : "")};
    *out = run;
    return BLTK_OK;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return BLTK_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return BLTK_ERR_INPUT;
  }
}

int bltk_run_stage(bltk_run* run, const char* stage) {
  set_error("");
  if (!run || !stage) {
    set_error("bltk_run_stage: null handle or stage");
    return BLTK_ERR_INPUT;
  }
  std::string err;
  int rc = bltk::run_stage(run->cfg, stage, &err);
  if (rc != bltk::kExitOk && !err.empty()) set_error(err);
  return rc;
}

const char* bltk_run_tag(const bltk_run* run) {
  return run ? run->cfg.tag.c_str() : "";
}

void bltk_run_close(bltk_run* run) { delete run; }

int bltk_validate_file(const char* config_path) {
  bltk_run* run = nullptr;
  int rc = bltk_run_open(config_path, nullptr, 0, nullptr, nullptr, &run);
  if (rc != BLTK_OK) return rc;
  rc = bltk_run_stage(run, "validate");
  bltk_run_close(run);
  return rc;
}

double bltk_gamma(double x) { return bltk::gamma_fn(x); }

}  // extern "C"
