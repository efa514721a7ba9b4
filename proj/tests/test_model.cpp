#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "bltk/model.hpp"
#include "json.hpp"

using namespace bltk;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScaleParams params_for(const std::string& cfg_path, const EquationSpec& spec) {
  auto j = nlohmann::json::parse(slurp(cfg_path));
  ScaleParams p = scale_params_from_json(j.at("params").dump());
  finalize_params(p, spec);
  return p;
}

}  // namespace

TEST_CASE("example 1 passes every inner and outer constraint") {
  auto spec = load_equation_spec("data/example1.json");
  check_structure(spec);
  auto p = params_for("configs/run_example1.json", spec);
  auto inner = validate_inner(spec, p);
  auto outer = validate_outer(spec, p);
  CHECK(inner.overall);
  CHECK(outer.overall);

  // The coefficient growth condition is binding: exact zero in rationals.
  auto* e = inner.find("constraint_chi_kappa_hl_mul_m0_alpha_deltaD_l0");
  REQUIRE(e != nullptr);
  CHECK(e->pass);
  CHECK(e->lhs == Rational(0));

  // Outer forcing exponent is binding as well.
  auto* u = outer.find("constraint_Upsilon_exp");
  REQUIRE(u != nullptr);
  CHECK(u->pass);
  CHECK(u->lhs == Rational(0));
}

TEST_CASE("example 2 passes and has two binding inner conditions") {
  auto spec = load_equation_spec("data/example2.json");
  check_structure(spec);
  auto p = params_for("configs/run_example2.json", spec);
  auto inner = validate_inner(spec, p);
  auto outer = validate_outer(spec, p);
  CHECK(inner.overall);
  CHECK(outer.overall);

  auto* e = inner.find("constraint_chi_kappa_hl_mul_m0_alpha_deltaD_l0");
  REQUIRE(e != nullptr);
  CHECK(e->lhs == Rational(0));
  // d_{1,kappa} condition is exactly at its boundary too.
  auto* d = inner.find("constraint_chi_dlkappa_deltal_l1");
  REQUIRE(d != nullptr);
  CHECK(d->pass);
}

TEST_CASE("lowering chi breaks the binding growth condition") {
  auto spec = load_equation_spec("data/example1.json");
  auto p = params_for("configs/run_example1.json", spec);
  p.chi = Rational(5);
  auto inner = validate_inner(spec, p);
  CHECK_FALSE(inner.overall);
  auto* e = inner.find("constraint_chi_kappa_hl_mul_m0_alpha_deltaD_l0");
  REQUIRE(e != nullptr);
  CHECK_FALSE(e->pass);
  CHECK(e->lhs < Rational(0));

  auto spec2 = load_equation_spec("data/example2.json");
  auto p2 = params_for("configs/run_example2.json", spec2);
  p2.chi = Rational(11);
  auto inner2 = validate_inner(spec2, p2);
  auto* e2 = inner2.find("constraint_chi_kappa_hl_mul_m0_alpha_deltaD_l0");
  REQUIRE(e2 != nullptr);
  CHECK_FALSE(e2->pass);
}

TEST_CASE("profile norm equals the amplitude") {
  // sup over m of the weight/profile product cancels exactly.
  ProfileSpec prof;
  prof.amp = 0.037;
  CHECK(profile_norm(prof) == doctest::Approx(0.037).epsilon(1e-12));
}

TEST_CASE("smallness check accepts the shipped data and rejects large data") {
  auto spec = load_equation_spec("data/example1.json");
  auto p = params_for("configs/run_example1.json", spec);
  CHECK(check_smallness(spec, p, 1e-2).overall);
  auto big = spec;
  big.a[0] = cplx(0.5, 0.0);
  CHECK_FALSE(check_smallness(big, p, 1e-2).overall);
}

TEST_CASE("finalize_params fills derived fields") {
  auto spec = load_equation_spec("data/example1.json");
  auto p = params_for("configs/run_example1.json", spec);
  CHECK(p.m0 == 5);
  REQUIRE(p.dlk.size() == 1);       // l = 1 < D = 2
  CHECK(p.dlk[0] == 3 - 1 * 2);     // d_1 - delta_1 (kappa+1) = 1
  CHECK(p.nu_outer_effective() > 0.0);
}

TEST_CASE("eval_P matches the explicit pencil") {
  auto spec = load_equation_spec("data/example1.json");
  cplx eps(1e-2, 0.0), t(0.3, 0.1);
  // P(t,eps) = a_0 eps^{m_0} + a_1 eps^{m_1} t^{k_1}
  cplx expect = spec.a[0] * std::pow(eps, 5) + spec.a[1] * std::pow(eps, 4) * std::pow(t, 2);
  CHECK(std::abs(eval_P(t, eps, spec) - expect) < 1e-15);
}

TEST_CASE("structural validation rejects malformed specs") {
  auto spec = load_equation_spec("data/example1.json");
  auto bad = spec;
  bad.k_exp = {2, 2};  // not strictly increasing (and wrong count)
  CHECK_THROWS_AS(check_structure(bad), std::invalid_argument);
  auto bad2 = spec;
  bad2.m_exp[0] = 3;  // m_0 must dominate some m_l
  CHECK_THROWS_AS(check_structure(bad2), std::invalid_argument);
}
