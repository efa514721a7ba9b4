#pragma once
// Turning-point analytics: roots of the time pencil P(t,eps), their merging
// rate, the Rouche/argument-principle count near the origin, the Borel-symbol
// roots q_l(m), and sector admissibility constants (M1, M2, C_P).

#include <vector>

#include "bltk/model.hpp"

namespace bltk {

struct AdmissibilityReport {
  double M1 = 0.0, M2 = 0.0;
  int l0 = 0;
  double CP = 0.0;
  double r_QRD = 1.0;
  bool pass = false;
  cplx worst_tau{0.0, 0.0};
  double worst_m = 0.0;
};

std::vector<cplx> roots_P(cplx eps, const EquationSpec& spec);

// Least-squares slope of log(min-modulus root of P) against log(eps) over a
// decreasing sequence of positive eps values.
double merging_exponent(const EquationSpec& spec, const std::vector<double>& eps_seq);

// Admissible window (mu_lo, mu_hi) for the Rouche radius exponent, from the
// proof recipe: mu < (m0 - m_j1)/k_j1 and mu > the exponents forcing the
// remainder below the dominant block on |t| = |eps|^mu.
std::pair<double, double> rouche_mu_window(const EquationSpec& spec);

int rouche_count(cplx eps, double mu, const EquationSpec& spec);

// P_m(tau) = Q(im) a_0 - R_D(im) kappa^{delta_D} tau^{delta_D kappa}.
cplx eval_P_m(cplx tau, double m, const EquationSpec& spec, const ScaleParams& p);

std::vector<cplx> q_roots(double m, const EquationSpec& spec, const ScaleParams& p);

// Samples tau over the closed disc of radius rho, the sector boundary rays and
// a radial/angular mesh (sector truncated at radius r_cap), and m over the
// frequency grid; reports the empirical constants of the lower bound for P_m.
AdmissibilityReport sector_admissibility(double direction, double aperture,
                                         double rho, const EquationSpec& spec,
                                         const ScaleParams& p, double r_QRD,
                                         double r_cap = 0.0);

}  // namespace bltk
