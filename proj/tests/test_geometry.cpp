#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bltk/geometry.hpp"
#include "json.hpp"

using namespace bltk;

namespace {

struct Loaded {
  EquationSpec spec;
  ScaleParams params;
};

Loaded load(const std::string& data, const std::string& cfg) {
  Loaded L;
  L.spec = load_equation_spec(data);
  std::ifstream in(cfg);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  auto j = nlohmann::json::parse(ss.str());
  L.params = scale_params_from_json(j.at("params").dump());
  finalize_params(L.params, L.spec);
  return L;
}

}  // namespace

TEST_CASE("coverings exist for feasible requests") {
  for (int count : {3, 4, 6}) {
    auto cov = build_covering(count, 2.0 * M_PI / count, 0.25);
    CHECK(cov.sectors.size() == std::size_t(count));
    // Aperture exceeds the spacing, so consecutive sectors overlap.
    CHECK(cov.sectors[0].aperture > 2.0 * M_PI / count);
    for (const auto& S : cov.sectors) CHECK(S.r_max == doctest::Approx(0.25));
  }
}

TEST_CASE("sector membership") {
  auto cov = build_covering(4, M_PI / 2.0, 0.2);
  const auto& S = cov.sectors[1];  // bisector pi/2
  CHECK(S.contains(0.1 * std::exp(cplx(0.0, M_PI / 2.0))));
  CHECK_FALSE(S.contains(0.1 * std::exp(cplx(0.0, -M_PI / 2.0))));
  CHECK_FALSE(S.contains(cplx(0.0, 0.5)));  // outside r_max
}

TEST_CASE("infeasible covering requests throw") {
  // Aperture target at 2x the spacing forces triple overlaps.
  CHECK_THROWS_AS(build_covering(4, M_PI, 0.2), std::domain_error);
  CHECK_THROWS_AS(build_covering(1, 1.0, 0.2), std::domain_error);
  CHECK_THROWS_AS(build_covering(4, -1.0, 0.2), std::domain_error);
}

TEST_CASE("inner association on example 1") {
  auto L = load("data/example1.json", "configs/run_example1.json");
  auto cov = build_covering(4, M_PI / 2.0, L.params.eps0);
  auto fam = associate_inner(cov, L.spec, L.params, 0.25, 0.25);
  CHECK(fam.directions.size() == 4);
  CHECK(fam.theta > M_PI / L.params.kappa);
  CHECK(fam.delta1 == doctest::Approx(0.5));
  // The selector keeps the Laplace cosine margin on the whole sector sweep.
  for (std::size_t p = 0; p < 4; ++p) {
    for (int i = 0; i <= 8; ++i) {
      double th = cov.sectors[p].bisector +
                  cov.sectors[p].aperture * (i / 8.0 - 0.5) * 0.999;
      cplx eps = 0.5 * L.params.eps0 * std::exp(cplx(0.0, th));
      cplx x(0.25, 0.0);
      double argT = std::arg(x) + L.params.chi.value() * th;
      double d = fam.select(p, eps, x);
      CHECK(std::cos(L.params.kappa * (d - argT)) > fam.delta1);
    }
  }
}

TEST_CASE("outer association avoids F2 roots and keeps the cosine bound") {
  auto L = load("data/example2.json", "configs/run_example2.json");
  auto cov = build_covering(4, M_PI / 2.0, L.params.eps0);
  auto fam = associate_outer(cov, L.spec, L.params, 1.0, 0.5, 1.0, 0.5);
  CHECK(fam.directions.size() == 4);
  for (std::size_t j = 0; j < 4; ++j) {
    cplx eps = 0.5 * L.params.eps0 *
               std::exp(cplx(0.0, cov.sectors[j].bisector));
    cplx t(0.7, 0.1);
    double u = fam.select(j, eps, t);
    double phase = u + std::arg(t / std::pow(eps, L.params.gamma.value()));
    CHECK(std::cos(phase) > fam.delta1);
  }
}

TEST_CASE("outer association rejects an undersized domain radius") {
  auto L = load("data/example1.json", "configs/run_example1.json");
  auto cov = build_covering(4, M_PI / 2.0, L.params.eps0);
  // Delta_nu must exceed nu_out / delta1.
  double too_small = 0.5 * L.params.nu_outer_effective() / 0.5;
  CHECK_THROWS_AS(
      associate_outer(cov, L.spec, L.params, too_small, 0.5, 1.0, 0.5),
      std::runtime_error);
}

TEST_CASE("scaling gap margins are 13/2 and 25/2") {
  auto L1 = load("data/example1.json", "configs/run_example1.json");
  auto g1 = scaling_gap(L1.params, 0.25, 1.1);
  CHECK(g1.margin == doctest::Approx(6.5));
  CHECK(g1.eps_threshold > 0.0);

  auto L2 = load("data/example2.json", "configs/run_example2.json");
  auto g2 = scaling_gap(L2.params, 0.25, 1.0);
  CHECK(g2.margin == doctest::Approx(12.5));

  // A degenerate parameter set (no gap) throws.
  auto bad = L1.params;
  bad.chi = Rational(1);
  bad.Gamma = Rational(0);
  bad.alpha = Rational(0);
  bad.gamma = Rational(2);
  CHECK_THROWS_AS(scaling_gap(bad, 0.25, 1.1), std::domain_error);
}

TEST_CASE("time domains separate below the threshold") {
  auto L = load("data/example1.json", "configs/run_example1.json");
  auto g = scaling_gap(L.params, 0.25, 1.1);
  double below = 0.9 * std::min(g.eps_threshold, L.params.eps0);
  for (int i = 0; i < 20; ++i) {
    cplx eps = below * (1.0 - 0.04 * i) * std::exp(cplx(0.0, 0.1));
    CHECK(time_domains_disjoint(L.params, 0.25, 1.1, eps));
  }
}
