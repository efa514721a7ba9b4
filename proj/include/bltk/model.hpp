#pragma once
// Equation data: coefficients, exponent bundles, decay profiles, and the exact
// rational validation of every parameter constraint the inner and outer
// constructions rely on.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bltk/poly.hpp"
#include "bltk/rational.hpp"

namespace bltk {

// Decay profile c * (1+|m|)^(-mu-1) * exp(-beta*|m|); the default family for
// the m-dependent coefficient lines (shape fixed, amplitude configurable).
struct ProfileSpec {
  double amp = 0.0;
};

struct ForcingSpec {
  int nF = 0;                  // epsilon power of the forcing block
  Rational gamma{3, 2};        // time-rescaling exponent, > 1/2
  double KF = 1.0;             // exponential rate of the kernel
  ProfileSpec CF;              // C_F(m) profile
  Polynomial F1, F2;           // rational kernel F1/F2, deg F1 <= deg F2
  double thetaF = 0.0;         // integration direction in (-pi/2, pi/2)
};

struct EquationSpec {
  int q = 0, M = 0, Qcount = 0, D = 0;
  std::vector<cplx> a;         // a_0..a_q, all nonzero
  std::vector<int> m_exp;      // m_0..m_q
  std::vector<int> k_exp;      // k_1..k_q, strictly increasing
  std::vector<cplx> c;         // c_0..c_M
  std::vector<int> mu_exp;     // mu_0..mu_M
  std::vector<int> h_exp;      // h_0..h_M, strictly increasing
  std::vector<ProfileSpec> Bj; // B_0..B_Qcount profiles
  std::vector<int> n_exp;      // n_0..n_Qcount
  std::vector<int> b_exp;      // b_0..b_Qcount, strictly increasing, >= 1
  std::vector<int> Delta;      // Delta_1..Delta_D
  std::vector<int> d_exp;      // d_1..d_D
  std::vector<int> delta_exp;  // delta_1..delta_D, strictly increasing
  Polynomial Qpoly, Q1poly, Q2poly;
  std::vector<Polynomial> Rpoly;  // R_1..R_D
  ForcingSpec forcing;

  const Polynomial& RD() const { return Rpoly.back(); }
  int dD() const { return d_exp.back(); }
  int deltaD() const { return delta_exp.back(); }
  int DeltaD() const { return Delta.back(); }
};

struct ScaleParams {
  int kappa = 1;
  Rational chi{6}, alpha{-1};
  Rational gamma{3, 2}, gamma0{0}, Gamma{1};
  double nu = 1.0;     // inner exponential-growth rate
  double nu_out = 0.0; // outer rate; 0 -> default 2*KF*eps0^Gamma
  double beta = 1.0;
  double mu = 3.0;
  double rho = 1e-2;   // Borel-disc radius
  double eps0 = 0.2;
  int m0 = 0;          // copy of m_exp[0]
  std::vector<int> dlk;  // d_{l,kappa} = d_l - delta_l*(kappa+1), l < D

  double nu_outer_effective() const {
    return nu_out;  // filled by the loader when 0
  }
};

struct ConstraintEntry {
  std::string id;
  bool pass = false;
  Rational lhs, rhs;
  std::string citation;  // human-readable statement of the requirement
};

struct ConstraintReport {
  std::vector<ConstraintEntry> entries;
  bool overall = true;
  void add(std::string id, bool pass, Rational lhs, Rational rhs, std::string note);
  const ConstraintEntry* find(const std::string& id) const;
  std::string to_json() const;
};

// Structural check of EquationSpec invariants (index counts, degree relations,
// m0 > m_l for some l, strict monotonicity); throws std::invalid_argument.
void check_structure(const EquationSpec& spec);

ConstraintReport validate_inner(const EquationSpec& spec, const ScaleParams& p);
ConstraintReport validate_outer(const EquationSpec& spec, const ScaleParams& p);

cplx eval_P(cplx t, cplx eps, const EquationSpec& spec);

// Smallness of the coefficient data (|a_i|, |c_j|, profile norms, and the
// sup over the m-grid of |R_l(im)|/|R_D(im)|) against zeta1.
ConstraintReport check_smallness(const EquationSpec& spec, const ScaleParams& p,
                                 double zeta1);

// (beta,mu)-norm of the default profile family, computed by 1-D maximization:
// sup_m (1+|m|)^mu e^(beta|m|) * amp*(1+|m|)^(-mu-1) e^(-beta|m|) = amp.
double profile_norm(const ProfileSpec& prof);

// JSON I/O.  Equation specs use the declarative document format (complex
// numbers as [re, im], rationals as "p/q" strings).
EquationSpec load_equation_spec(const std::string& path);
ScaleParams scale_params_from_json(const std::string& json_text);

// Fills the derived fields of ScaleParams (m0, d_{l,kappa}, default outer nu).
void finalize_params(ScaleParams& p, const EquationSpec& spec);

}  // namespace bltk
