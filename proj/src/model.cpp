#include "bltk/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bltk {

using nlohmann::json;

void ConstraintReport::add(std::string id, bool pass, Rational lhs, Rational rhs,
                           std::string note) {
  entries.push_back({std::move(id), pass, lhs, rhs, std::move(note)});
  overall = overall && pass;
}

const ConstraintEntry* ConstraintReport::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

std::string ConstraintReport::to_json() const {
  json j;
  j["overall"] = overall;
  j["entries"] = json::array();
  for (const auto& e : entries) {
    j["entries"].push_back({{"id", e.id},
                            {"pass", e.pass},
                            {"lhs", e.lhs.str()},
                            {"rhs", e.rhs.str()},
                            {"note", e.citation}});
  }
  return j.dump(2);
}

void check_structure(const EquationSpec& s) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("EquationSpec: " + msg); };
  if (s.q < 1 || s.D < 1) fail("q and D must be positive");
  if ((int)s.a.size() != s.q + 1) fail("a must have q+1 entries");
  if ((int)s.m_exp.size() != s.q + 1) fail("m_exp must have q+1 entries");
  if ((int)s.k_exp.size() != s.q) fail("k_exp must have q entries");
  if ((int)s.c.size() != s.M + 1) fail("c must have M+1 entries");
  if ((int)s.mu_exp.size() != s.M + 1 || (int)s.h_exp.size() != s.M + 1)
    fail("mu_exp/h_exp must have M+1 entries");
  if ((int)s.Bj.size() != s.Qcount + 1) fail("profiles.B must have Qcount+1 entries");
  if ((int)s.n_exp.size() != s.Qcount + 1 || (int)s.b_exp.size() != s.Qcount + 1)
    fail("n_exp/b_exp must have Qcount+1 entries");
  if ((int)s.Delta.size() != s.D || (int)s.d_exp.size() != s.D ||
      (int)s.delta_exp.size() != s.D)
    fail("Delta/d_exp/delta_exp must have D entries");
  if ((int)s.Rpoly.size() != s.D) fail("Rpoly must have D entries");
  for (const auto& v : s.a)
    if (std::abs(v) == 0.0) fail("all a_l must be nonzero");
  for (std::size_t i = 1; i < s.k_exp.size(); ++i)
    if (s.k_exp[i] <= s.k_exp[i - 1]) fail("k_exp must be strictly increasing");
  for (std::size_t i = 1; i < s.h_exp.size(); ++i)
    if (s.h_exp[i] <= s.h_exp[i - 1]) fail("h_exp must be strictly increasing");
  for (std::size_t i = 1; i < s.b_exp.size(); ++i)
    if (s.b_exp[i] <= s.b_exp[i - 1]) fail("b_exp must be strictly increasing");
  for (int b : s.b_exp)
    if (b < 1) fail("b_exp must be >= 1");
  for (std::size_t i = 1; i < s.delta_exp.size(); ++i)
    if (s.delta_exp[i] <= s.delta_exp[i - 1]) fail("delta_exp must be strictly increasing");
  // Degree relations.
  int dQ = s.Qpoly.degree(), dRD = s.RD().degree();
  if (dQ != dRD) fail("deg(Q) must equal deg(R_D)");
  for (int l = 0; l + 1 < s.D; ++l)
    if (s.Rpoly[l].degree() > dRD) fail("deg(R_l) must not exceed deg(R_D)");
  if (s.Q1poly.degree() > dRD || s.Q2poly.degree() > dRD)
    fail("deg(R_D) must dominate deg(Q1), deg(Q2)");
  bool some_smaller = false;
  for (int l = 1; l <= s.q; ++l) some_smaller = some_smaller || s.m_exp[0] > s.m_exp[l];
  if (!some_smaller) fail("m_0 must exceed some m_l");
  if (s.forcing.F1.degree() > s.forcing.F2.degree())
    fail("deg(F1) must not exceed deg(F2)");
  if (!(s.forcing.gamma > Rational(1, 2))) fail("forcing gamma must exceed 1/2");
  if (!(std::abs(s.forcing.thetaF) < M_PI / 2)) fail("thetaF must lie in (-pi/2, pi/2)");
  // Symbol nonvanishing on the real frequency line: checked via leading
  // coefficient plus a sample sweep.
  auto check_symbol = [&](const Polynomial& P, const char* name) {
    if (P.is_zero()) fail(std::string(name) + " must be nonzero");
    for (int i = -200; i <= 200; ++i) {
      double m = 0.2 * i;
      if (std::abs(P(cplx(0.0, m))) < 1e-12)
        fail(std::string(name) + " vanishes near the sampled frequency line");
    }
  };
  check_symbol(s.Qpoly, "Q");
  check_symbol(s.RD(), "R_D");
}

namespace {

Rational rat_int(int v) { return Rational(v); }

}  // namespace

ConstraintReport validate_inner(const EquationSpec& s, const ScaleParams& p) {
  check_structure(s);
  ConstraintReport rep;
  const Rational chi = p.chi, alpha = p.alpha, gamma = p.gamma;
  const Rational kap = rat_int(p.kappa);
  const Rational chik = chi * kap;
  const Rational m0 = rat_int(s.m_exp[0]);
  const Rational dD = rat_int(s.dD()), deD = rat_int(s.deltaD());
  const Rational inv_k = Rational(1) / kap;

  rep.add("cond_chi_kappa_half", chik > Rational(1, 2), chik, Rational(1, 2),
          "chi*kappa > 1/2");
  rep.add("cond_gamma_alpha_chi", gamma + alpha <= chi, gamma + alpha, chi,
          "gamma + alpha <= chi");
  {
    Rational lhs = rat_int(s.DeltaD()) + alpha * (deD - dD) - m0;
    rep.add("cond_deltaD_alpha", lhs == Rational(0), lhs, Rational(0),
            "Delta_D + alpha*(delta_D - d_D) - m_0 = 0");
  }
  {
    Rational lhs = dD - deD * (kap + Rational(1));
    rep.add("cond_deltaD_dD_kappa", lhs == Rational(0), lhs, Rational(0),
            "d_D = delta_D*(kappa+1)");
  }
  for (int l = 0; l + 1 < s.D; ++l) {
    int dlk = s.d_exp[l] - s.delta_exp[l] * (p.kappa + 1);
    rep.add("cond_deltal_alpha_l" + std::to_string(l + 1), dlk >= 1, rat_int(dlk),
            Rational(1), "d_l - delta_l*(kappa+1) >= 1");
  }
  rep.add("cond_deltaD_inv_kappa", deD >= inv_k, deD, inv_k, "delta_D >= 1/kappa");
  for (int l = 1; l <= s.q; ++l) {
    Rational kl = rat_int(s.k_exp[l - 1]);
    Rational lhs = chi * kl + rat_int(s.m_exp[l]) - m0 - alpha * kl;
    rep.add("constraint_kl_ml_l" + std::to_string(l), lhs >= Rational(0), lhs,
            Rational(0), "chi*k_l + m_l - m_0 - alpha*k_l >= 0");
  }
  for (int j = 0; j <= s.Qcount; ++j) {
    Rational bj = rat_int(s.b_exp[j]);
    Rational lhs = chi * bj + rat_int(s.n_exp[j]) - alpha * bj;
    rep.add("constraint_chi_bj_ni_alpha_j" + std::to_string(j), lhs >= Rational(0),
            lhs, Rational(0), "chi*b_j + n_j - alpha*b_j >= 0");
  }
  for (int l = 0; l + 1 < s.D; ++l) {
    Rational dlk = rat_int(s.d_exp[l] - s.delta_exp[l] * (p.kappa + 1));
    Rational del = rat_int(s.delta_exp[l]);
    Rational lhs = chik * (dlk / kap + del) + rat_int(s.Delta[l]) +
                   alpha * (del - rat_int(s.d_exp[l])) - m0 - chik * (deD - inv_k);
    rep.add("constraint_chi_dlkappa_deltal_l" + std::to_string(l + 1),
            lhs >= Rational(0), lhs, Rational(0),
            "chi*kappa*(d_{l,kappa}/kappa + delta_l) + Delta_l + alpha*(delta_l-d_l)"
            " - m_0 - chi*kappa*(delta_D - 1/kappa) >= 0");
    rep.add("constraint_deltaD_deltal_l" + std::to_string(l + 1), deD - inv_k >= del,
            deD - inv_k, del, "delta_D - 1/kappa >= delta_l");
  }
  for (int l = 0; l <= s.M; ++l) {
    Rational hl = rat_int(s.h_exp[l]);
    Rational lhs = chik * (hl / kap + inv_k) + rat_int(s.mu_exp[l]) -
                   Rational(2) * m0 - alpha * hl - chik * (deD - inv_k) - chi;
    rep.add("constraint_chi_kappa_hl_mul_m0_alpha_deltaD_l" + std::to_string(l),
            lhs >= Rational(0), lhs, Rational(0),
            "chi*kappa*(h_l/kappa + 1/kappa) + mu_l - 2m_0 - alpha*h_l"
            " - chi*kappa*(delta_D - 1/kappa) - chi >= 0");
  }
  {
    int degmax = std::max(s.Q1poly.degree(), s.Q2poly.degree());
    rep.add("mu_gt_deg_Q1_Q2", p.mu > degmax + 1,
            Rational((long long)std::llround(p.mu * 1000), 1000), rat_int(degmax + 1),
            "mu > max(deg Q1, deg Q2) + 1");
  }
  return rep;
}

ConstraintReport validate_outer(const EquationSpec& s, const ScaleParams& p) {
  check_structure(s);
  ConstraintReport rep;
  const Rational gamma = p.gamma, gamma0 = p.gamma0, Gam = p.Gamma;
  const Rational m0 = rat_int(s.m_exp[0]);
  const Rational dD = rat_int(s.dD()), deD = rat_int(s.deltaD());

  rep.add("Gamma_range", Rational(0) <= Gam && Gam < gamma, Gam, gamma,
          "0 <= Gamma < gamma");
  {
    Rational lhs = rat_int(s.DeltaD()) - (gamma * deD - gamma0);
    rep.add("constraint_DeltaD_gamma", lhs == Rational(0), lhs, Rational(0),
            "Delta_D = gamma*delta_D - gamma_0");
  }
  {
    int dmax = 0;
    for (int v : s.d_exp) dmax = std::max(dmax, v);
    for (int v : s.k_exp) dmax = std::max(dmax, v);
    for (int v : s.b_exp) dmax = std::max(dmax, v);
    for (int v : s.h_exp) dmax = std::max(dmax, v);
    rep.add("constraints_d_D_di_kj_bk_hl", s.dD() >= dmax, rat_int(s.dD()),
            rat_int(dmax), "d_D >= all d_i, k_j, b_k, h_l");
  }
  {
    rep.add("constraint_Upsilon_dD", dD >= Rational(1) + deD, dD, Rational(1) + deD,
            "d_D >= 1 + delta_D");
    Rational lhs = rat_int(s.forcing.nF) + Gam * (dD - Rational(1) - deD) - gamma * dD;
    rep.add("constraint_Upsilon_exp", lhs >= Rational(0), lhs, Rational(0),
            "n_F + Gamma*(d_D - 1 - delta_D) - gamma*d_D >= 0");
  }
  for (int l = 1; l <= s.q; ++l) {
    Rational kl = rat_int(s.k_exp[l - 1]);
    rep.add("first_cond_dD_kl_l" + std::to_string(l), dD - kl - Rational(1) >= Rational(0),
            dD - kl - Rational(1), Rational(0), "d_D - k_l - 1 >= 0");
    rep.add("first_cond_deltaD_l" + std::to_string(l), deD <= dD - kl, deD, dD - kl,
            "delta_D <= d_D - k_l");
    Rational lhs = rat_int(s.m_exp[l]) + gamma0 + (Gam - gamma) * (dD - kl) - Gam * deD;
    rep.add("first_cond_exp_l" + std::to_string(l), lhs >= Rational(0), lhs, Rational(0),
            "m_l + gamma_0 + (Gamma-gamma)*(d_D-k_l) - Gamma*delta_D >= 0");
  }
  {
    rep.add("second_cond_dD", dD >= Rational(1), dD, Rational(1), "d_D >= 1");
    rep.add("second_cond_deltaD", deD <= dD, deD, dD, "delta_D <= d_D");
    Rational lhs = m0 + gamma0 + (Gam - gamma) * dD - Gam * deD;
    rep.add("second_cond_exp", lhs >= Rational(0), lhs, Rational(0),
            "m_0 + gamma_0 + (Gamma-gamma)*d_D - Gamma*delta_D >= 0");
  }
  for (int l = 0; l <= s.M; ++l) {
    Rational hl = rat_int(s.h_exp[l]);
    rep.add("third_cond_deltaD_l" + std::to_string(l), deD <= dD - hl, deD, dD - hl,
            "delta_D <= d_D - h_l");
    Rational lhs = rat_int(s.mu_exp[l]) + Rational(2) * gamma0 +
                   (Gam - gamma) * (dD - hl) - Gam * (deD - Rational(1));
    rep.add("third_cond_exp_l" + std::to_string(l), lhs >= Rational(0), lhs, Rational(0),
            "mu_l + 2gamma_0 + (Gamma-gamma)*(d_D-h_l) - Gamma*(delta_D-1) >= 0");
  }
  for (int j = 0; j <= s.Qcount; ++j) {
    Rational bj = rat_int(s.b_exp[j]);
    rep.add("fourth_cond_deltaD_j" + std::to_string(j), dD - bj - Rational(1) >= deD,
            dD - bj - Rational(1), deD, "d_D - b_j - 1 >= delta_D");
    Rational lhs = rat_int(s.n_exp[j]) - gamma * (dD - bj) +
                   Gam * (dD - bj - Rational(1) - deD);
    rep.add("fourth_cond_exp_j" + std::to_string(j), lhs >= Rational(0), lhs, Rational(0),
            "n_j - gamma*(d_D-b_j) + Gamma*(d_D-b_j-1-delta_D) >= 0");
  }
  for (int l = 1; l + 1 <= s.D; ++l) {
    Rational dl = rat_int(s.d_exp[l - 1]), del = rat_int(s.delta_exp[l - 1]);
    rep.add("fifth_cond_deltaD_a_l" + std::to_string(l), deD <= dD - dl + del, deD,
            dD - dl + del, "delta_D <= d_D - d_l + delta_l");
    rep.add("fifth_cond_deltaD_b_l" + std::to_string(l), deD >= del, deD, del,
            "delta_D >= delta_l");
    Rational lhs = rat_int(s.Delta[l - 1]) + gamma0 + (Gam - gamma) * (dD - dl + del) -
                   Gam * deD;
    rep.add("fifth_cond_exp_l" + std::to_string(l), lhs >= Rational(0), lhs, Rational(0),
            "Delta_l + gamma_0 + (Gamma-gamma)*(d_D-d_l+delta_l) - Gamma*delta_D >= 0");
  }
  return rep;
}

cplx eval_P(cplx t, cplx eps, const EquationSpec& s) {
  auto ipow = [](cplx b, int e) {
    cplx r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  cplx acc = s.a[0] * ipow(eps, s.m_exp[0]);
  for (int l = 1; l <= s.q; ++l)
    acc += s.a[l] * ipow(eps, s.m_exp[l]) * ipow(t, s.k_exp[l - 1]);
  return acc;
}

double profile_norm(const ProfileSpec& prof) { return std::abs(prof.amp); }

ConstraintReport check_smallness(const EquationSpec& s, const ScaleParams& p,
                                 double zeta1) {
  if (!(zeta1 > 0)) throw std::invalid_argument("zeta1 must be positive");
  ConstraintReport rep;
  auto radd = [&](const std::string& id, double lhs) {
    // Millirational rendering for the report only; the comparison is on doubles.
    rep.add(id, lhs <= zeta1, Rational((long long)std::llround(lhs * 1e6), 1000000),
            Rational((long long)std::llround(zeta1 * 1e6), 1000000), id + " <= zeta1");
  };
  for (std::size_t i = 0; i < s.a.size(); ++i)
    radd("abs_a_" + std::to_string(i), std::abs(s.a[i]));
  for (std::size_t i = 0; i < s.c.size(); ++i)
    radd("abs_c_" + std::to_string(i), std::abs(s.c[i]));
  for (std::size_t i = 0; i < s.Bj.size(); ++i)
    radd("norm_B_" + std::to_string(i), profile_norm(s.Bj[i]));
  radd("norm_CF", profile_norm(s.forcing.CF));
  double m_max = 20.0 / p.beta;
  for (std::size_t l = 0; l + 1 < s.Rpoly.size(); ++l) {
    double sup = 0.0;
    for (int i = -1024; i <= 1024; ++i) {
      double m = m_max * i / 1024.0;
      sup = std::max(sup, std::abs(s.Rpoly[l](cplx(0, m))) / std::abs(s.RD()(cplx(0, m))));
    }
    radd("sup_Rl_over_RD_" + std::to_string(l + 1), sup);
  }
  return rep;
}

namespace {

cplx json_cplx(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  return cplx(j.at(0).get<double>(), j.at(1).get<double>());
}

Polynomial json_poly(const json& j) {
  std::vector<cplx> c;
  for (const auto& e : j) c.push_back(json_cplx(e));
  return Polynomial(std::move(c));
}

Rational json_rat(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw std::invalid_argument("rationals must be integers or \"p/q\" strings");
}

}  // namespace

EquationSpec load_equation_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open equation spec: " + path);
  json j;
  in >> j;
  EquationSpec s;
  s.q = j.at("q");
  s.M = j.at("M");
  s.Qcount = j.at("Qcount");
  s.D = j.at("D");
  for (const auto& e : j.at("a")) s.a.push_back(json_cplx(e));
  s.m_exp = j.at("m_exp").get<std::vector<int>>();
  s.k_exp = j.at("k_exp").get<std::vector<int>>();
  for (const auto& e : j.at("c")) s.c.push_back(json_cplx(e));
  s.mu_exp = j.at("mu_exp").get<std::vector<int>>();
  s.h_exp = j.at("h_exp").get<std::vector<int>>();
  s.n_exp = j.at("n_exp").get<std::vector<int>>();
  s.b_exp = j.at("b_exp").get<std::vector<int>>();
  s.Delta = j.at("Delta").get<std::vector<int>>();
  s.d_exp = j.at("d_exp").get<std::vector<int>>();
  s.delta_exp = j.at("delta_exp").get<std::vector<int>>();
  s.Qpoly = json_poly(j.at("Qpoly"));
  s.Q1poly = json_poly(j.at("Q1poly"));
  s.Q2poly = json_poly(j.at("Q2poly"));
  for (const auto& e : j.at("Rpoly")) s.Rpoly.push_back(json_poly(e));
  const json& f = j.at("forcing");
  s.forcing.nF = f.at("nF");
  s.forcing.gamma = json_rat(f.at("gamma"));
  s.forcing.KF = f.at("KF");
  s.forcing.CF.amp = f.at("CF").at("amp");
  s.forcing.F1 = json_poly(f.at("F1"));
  s.forcing.F2 = json_poly(f.at("F2"));
  s.forcing.thetaF = f.at("thetaF");
  for (const auto& e : j.at("profiles").at("B")) {
    ProfileSpec prof;
    prof.amp = e.at("amp");
    s.Bj.push_back(prof);
  }
  check_structure(s);
  return s;
}

void finalize_params(ScaleParams& p, const EquationSpec& spec) {
  p.m0 = spec.m_exp[0];
  p.dlk.clear();
  for (int l = 0; l + 1 < spec.D; ++l)
    p.dlk.push_back(spec.d_exp[l] - spec.delta_exp[l] * (p.kappa + 1));
  if (p.nu_out == 0.0)
    p.nu_out = 2.0 * spec.forcing.KF * std::pow(p.eps0, p.Gamma.value());
}

ScaleParams scale_params_from_json(const std::string& text) {
  json j = json::parse(text);
  ScaleParams p;
  p.kappa = j.at("kappa");
  p.chi = json_rat(j.at("chi"));
  p.alpha = json_rat(j.at("alpha"));
  p.gamma = json_rat(j.at("gamma"));
  p.gamma0 = json_rat(j.at("gamma0"));
  p.Gamma = json_rat(j.at("Gamma"));
  if (j.contains("nu")) p.nu = j.at("nu");
  if (j.contains("nu_out")) p.nu_out = j.at("nu_out");
  p.beta = j.value("beta", 1.0);
  p.mu = j.value("mu", 3.0);
  p.rho = j.value("rho", 1e-2);
  p.eps0 = j.value("eps0", 0.2);
  return p;
}

}  // namespace bltk
