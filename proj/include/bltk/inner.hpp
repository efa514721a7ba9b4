#pragma once
// Borel-plane fixed-point machinery for the inner regime: the weighted grid
// norm, the forcing series, the contraction map H_eps, the Picard solver, and
// Laplace/Fourier synthesis of the inner solutions.

#include <vector>

#include "bltk/fourier.hpp"
#include "bltk/model.hpp"
#include "bltk/transforms.hpp"
#include "bltk/turning.hpp"

namespace bltk {

struct RayGrid2D {
  double direction = 0.0;
  std::vector<double> r_grid;   // r_grid[0] = 0
  double m_max = 20.0;
  int n_m = 65;                 // odd
  std::vector<std::vector<cplx>> values;  // [r][m], row 0 all zero

  double m_spacing() const { return 2.0 * m_max / (n_m - 1); }
  double m_at(int j) const { return -m_max + j * m_spacing(); }
  static RayGrid2D zeros(double direction, const std::vector<double>& r_grid,
                         double m_max, int n_m);
};

struct FixedPointResult {
  RayGrid2D solution;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> contraction_ratios;
  cplx eps{0.0, 0.0};
};

// Grid sup of (1+|m|)^mu e^{beta|m|} (1+|tau/eps^chi|^{2kappa})/|tau/eps^chi|
// e^{-nu|tau/eps^chi|^kappa} |w|; the r=0 node contributes the limiting slope
// |eps|^chi |w(r1)|/r1.
double fnorm(const RayGrid2D& w, cplx eps, const ScaleParams& p);

// Forcing block Psi_kappa(tau,m,eps) = sum_n psi_n(m,eps) tau^n / Gamma(n/kappa)
// with psi_n from ray quadrature of e^{-KF u} (F1/F2)(u) u^n/n!; the series is
// truncated once the next term is below 1e-12 of the partial sum.
RayGrid2D forcing_psi(cplx eps, const EquationSpec& spec, const ScaleParams& p,
                      const RayGrid2D& shape);

RayGrid2D apply_H(const RayGrid2D& w, cplx eps, const EquationSpec& spec,
                  const ScaleParams& p, const AdmissibilityReport& adm);

FixedPointResult solve_inner(cplx eps, const EquationSpec& spec,
                             const ScaleParams& p, const AdmissibilityReport& adm,
                             const RayGrid2D& shape, double tol = 1e-9,
                             int max_iter = 200);

// eps^{-m0} * F^{-1}_m( kappa-Laplace_tau of the solved grid at T = eps^alpha t ).
cplx inner_solution(cplx t, cplx z, cplx eps, const FixedPointResult& fp,
                    const ScaleParams& p, double delta1 = 0.5);

// Coefficients A_{delta,p} with T^{delta(kappa+1)} d_T^delta =
// (T^{kappa+1} d_T)^delta + sum_p A_{delta,p} T^{kappa(delta-p)}
// (T^{kappa+1} d_T)^p, from the triangular monomial system.
std::vector<double> a_coeffs(int delta, int kappa);

// Principal-branch complex power with rational exponent.
cplx cpow(cplx base, const Rational& e);

}  // namespace bltk
