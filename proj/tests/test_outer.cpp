#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bltk/outer.hpp"
#include "json.hpp"

using namespace bltk;

namespace {

struct Setup {
  EquationSpec spec;
  ScaleParams params;
};

Setup load(const std::string& data, const std::string& cfg) {
  Setup S;
  S.spec = load_equation_spec(data);
  std::ifstream in(cfg);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  auto j = nlohmann::json::parse(ss.str());
  S.params = scale_params_from_json(j.at("params").dump());
  finalize_params(S.params, S.spec);
  return S;
}

OuterGrid2D small_grid(double direction, int n_r = 40, int n_m = 33) {
  return OuterGrid2D::zeros(direction, geometric_grid(8.0, n_r), 20.0, n_m);
}

double grid_diff(const OuterGrid2D& a, const OuterGrid2D& b, cplx eps,
                 const ScaleParams& p) {
  OuterGrid2D d = a;
  for (std::size_t i = 0; i < d.values.size(); ++i)
    for (int j = 0; j < d.n_m; ++j) d.values[i][j] -= b.values[i][j];
  return enorm(d, eps, p);
}

}  // namespace

TEST_CASE("enorm is a weighted sup norm including the origin") {
  auto S = load("data/example1.json", "configs/run_example1.json");
  cplx eps(0.05, 0.005);
  auto w = small_grid(0.4);
  CHECK(enorm(w, eps, S.params) == 0.0);
  w.values[0][16] = cplx(3.0, 0.0);  // r = 0 contributes with weight 1
  CHECK(enorm(w, eps, S.params) == doctest::Approx(3.0).epsilon(1e-12));
  w.values[0][16] = cplx(0.0);
  int i = 25, j = 16;
  w.values[i][j] = cplx(0.0, 1.0);
  double nu_out = S.params.nu_outer_effective();
  double sigma = w.r_grid[i] / std::pow(std::abs(eps), S.params.Gamma.value());
  double expect = (1.0 + sigma * sigma) * std::exp(-nu_out * sigma);
  CHECK(enorm(w, eps, S.params) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("enorm requires the exponential weight to win") {
  // |eps|^Gamma must stay below nu_out/KF for the forcing decay to dominate
  // the weight growth; the norm of omega_F must then be finite.
  auto S = load("data/example1.json", "configs/run_example1.json");
  auto w = omega_F_grid(S.spec, S.params, small_grid(0.0));
  cplx eps(0.1, 0.0);
  REQUIRE(std::pow(std::abs(eps), S.params.Gamma.value()) <
          S.params.nu_outer_effective() / S.spec.forcing.KF);
  CHECK(std::isfinite(enorm(w, eps, S.params)));
}

TEST_CASE("Upsilon vanishes at tau = 0 and is finite on the grid") {
  auto S = load("data/example1.json", "configs/run_example1.json");
  cplx eps = 0.05 * std::exp(cplx(0.0, 0.1));
  auto up = forcing_upsilon(eps, S.spec, S.params, small_grid(0.3));
  int mid = up.n_m / 2;
  // int_0^tau - tau^{dD-1} * (full ray) cancels the constant block at 0.
  CHECK(std::abs(up.values[0][mid]) == 0.0);
  CHECK(std::abs(up.values[30][mid]) > 0.0);
  CHECK(std::isfinite(enorm(up, eps, S.params)));
}

TEST_CASE("the outer map is affine when the nonlinear block vanishes") {
  auto S = load("data/example1.json", "configs/run_example1.json");
  for (auto& cc : S.spec.c) cc = cplx(0.0);
  cplx eps = 0.05 * std::exp(cplx(0.0, 0.1));
  auto z = small_grid(0.3);
  auto w1 = z, w2 = z;
  for (std::size_t i = 0; i < z.values.size(); ++i)
    for (int j = 0; j < z.n_m; ++j) {
      double m = z.m_at(j);
      w1.values[i][j] = 1e-6 * std::exp(-0.5 * m * m) / (1.0 + z.r_grid[i]);
      w2.values[i][j] = cplx(0.0, 2e-6) / ((1.0 + m * m) * (1.0 + z.r_grid[i]));
    }
  auto G0 = apply_G(z, eps, S.spec, S.params);
  auto G1 = apply_G(w1, eps, S.spec, S.params);
  auto G2 = apply_G(w2, eps, S.spec, S.params);
  auto w3 = z;
  for (std::size_t i = 0; i < z.values.size(); ++i)
    for (int j = 0; j < z.n_m; ++j)
      w3.values[i][j] = w1.values[i][j] + w2.values[i][j];
  auto G3 = apply_G(w3, eps, S.spec, S.params);
  auto lin = z;
  for (std::size_t i = 0; i < z.values.size(); ++i)
    for (int j = 0; j < z.n_m; ++j)
      lin.values[i][j] = G1.values[i][j] + G2.values[i][j] - G0.values[i][j];
  double rel = grid_diff(G3, lin, eps, S.params) /
               std::max(1e-300, enorm(G3, eps, S.params));
  CHECK(rel < 1e-9);
}

TEST_CASE("Picard contracts and solve_outer converges on both examples") {
  for (auto [data, cfg] :
       {std::pair{std::string("data/example1.json"),
                  std::string("configs/run_example1.json")},
        std::pair{std::string("data/example2.json"),
                  std::string("configs/run_example2.json")}}) {
    auto S = load(data, cfg);
    cplx eps = 0.25 * S.params.eps0 * std::exp(cplx(0.0, 0.1));
    auto shape = small_grid(0.3);
    auto w1 = apply_G(shape, eps, S.spec, S.params);
    auto w2 = apply_G(w1, eps, S.spec, S.params);
    double d1 = grid_diff(w1, shape, eps, S.params);
    double d2 = grid_diff(w2, w1, eps, S.params);
    REQUIRE(d1 > 0.0);
    CHECK(d2 / d1 < 0.75);

    auto fp = solve_outer(eps, S.spec, S.params, shape);
    double n = enorm(fp.solution, eps, S.params);
    CHECK(n > 0.0);
    CHECK(fp.residual_norm < 1e-6 * std::max(1.0, n));
    for (double r : fp.contraction_ratios) CHECK(r < 0.75);
  }
}

TEST_CASE("outer solution synthesis and domain gating") {
  auto S = load("data/example1.json", "configs/run_example1.json");
  cplx eps = 0.05 * std::exp(cplx(0.0, 0.05));
  auto fp = solve_outer(eps, S.spec, S.params, small_grid(0.0));
  cplx t(0.7, 0.05), z(0.1, 0.0);
  cplx v = outer_solution(t, z, eps, fp, S.params);
  CHECK(std::isfinite(std::abs(v)));
  // Points inside the excluded inner region are rejected when Delta_nu is on.
  double gamma_minus_Gamma = (S.params.gamma - S.params.Gamma).value();
  cplx t_small = 0.5 * 1.1 * std::pow(std::abs(eps), gamma_minus_Gamma);
  CHECK_THROWS_AS(outer_solution(t_small, z, eps, fp, S.params, 0.5, 1.1),
                  std::domain_error);
}

TEST_CASE("direct forcing integral satisfies its ODE") {
  auto S = load("data/example1.json", "configs/run_example1.json");
  cplx eps = 0.05 * std::exp(cplx(0.0, 0.05));
  cplx z(0.2, 0.0);
  for (double tr : {0.5, 0.75, 1.0}) {
    CHECK(ode_residual_F(cplx(tr, 0.05), z, eps, S.spec, S.params) < 1e-3);
  }
  // The integral vanishes at t = 0 by construction (kernel e^{-Tu} - 1).
  cplx F0 = forcing_F_direct(cplx(0.0), z, eps, S.spec, S.params);
  CHECK(std::abs(F0) < 1e-12);
}
