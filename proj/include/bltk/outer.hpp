#pragma once
// Outer-regime fixed-point machinery: the exponentially weighted norm on the
// classical Laplace plane, the forcing Upsilon, the map G_eps, the Picard
// solver, outer solution synthesis, and the direct forcing integral with its
// ODE residual probe.

#include "bltk/inner.hpp"

namespace bltk {

// Same layout as the inner grid; values at r = 0 may be nonzero.
using OuterGrid2D = RayGrid2D;

// Grid sup of (1+|m|)^mu e^{beta|m|} (1+|tau/eps^Gamma|^2) e^{-nu|tau/eps^Gamma|} |w|.
double enorm(const OuterGrid2D& w, cplx eps, const ScaleParams& p);

// Upsilon(tau,m,eps) = eps^{nF-gamma dD}/(dD-1)! *
//   ( int_0^tau (tau-s)^{dD-1} omega_F(s,m) ds
//     - tau^{dD-1} int over the thetaF ray of omega_F(u,m) du )
// with omega_F(tau,m) = C_F(m) e^{-KF tau} F1(tau)/F2(tau).
OuterGrid2D forcing_upsilon(cplx eps, const EquationSpec& spec,
                            const ScaleParams& p, const OuterGrid2D& shape);

// omega_F sampled on the grid shape (radius along the grid direction).
OuterGrid2D omega_F_grid(const EquationSpec& spec, const ScaleParams& p,
                         const OuterGrid2D& shape);

OuterGrid2D apply_G(const OuterGrid2D& w, cplx eps, const EquationSpec& spec,
                    const ScaleParams& p);

FixedPointResult solve_outer(cplx eps, const EquationSpec& spec,
                             const ScaleParams& p, const OuterGrid2D& shape,
                             double tol = 1e-9, int max_iter = 200);

// eps^{gamma0}/sqrt(2pi) * double integral of W(u,m) e^{-(t/eps^gamma)u} e^{izm};
// if Delta_nu > 0 the outer-domain radius |t| > Delta_nu |eps|^{gamma-Gamma}
// is enforced.
cplx outer_solution(cplx t, cplx z, cplx eps, const FixedPointResult& fp,
                    const ScaleParams& p, double delta1 = 0.5,
                    double Delta_nu = 0.0);

// Direct forcing integral eps^{nF}/sqrt(2pi) * iint omega_F(u,m)
// (e^{-(t/eps^gamma)u} - 1) e^{izm} du dm, evaluated on the thetaF ray near
// t = 0 and through the deformed-ray decomposition on the unbounded regime.
// n_m_pts controls the frequency resolution of the final inversion so the
// residual probes can match the solver grid exactly.
cplx forcing_F_direct(cplx t, cplx z, cplx eps, const EquationSpec& spec,
                      const ScaleParams& p, double delta1_inf = 0.5,
                      int n_m_pts = 2049);

// Relative residual of F2(-eps^gamma d_t) F = eps^{nF} c_F(z) *
// ( sum_k F1_k k!/(KF + t/eps^gamma)^{k+1} - F2(0) * ray integral of
//   e^{-KF u} F1/F2 ), with t-derivatives by central finite differences.
double ode_residual_F(cplx t, cplx z, cplx eps, const EquationSpec& spec,
                      const ScaleParams& p);

}  // namespace bltk
