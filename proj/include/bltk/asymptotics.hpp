#pragma once
// Cocycle evaluation between consecutive sector solutions (three-path
// decomposition accumulated in log space), exponential-flatness regression,
// and the Gevrey-order report.

#include <string>
#include <vector>

#include "bltk/inner.hpp"
#include "bltk/outer.hpp"

namespace bltk {

struct FlatnessFit {
  double order_tested = 0.0;
  double slope = 0.0;      // must be negative for a flat cocycle
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> eps_points;  // strictly decreasing
  std::vector<double> log_theta;
};

// Least squares of log_theta against x = 1/eps^order; slope ~ -A, intercept
// ~ log C, r^2 goodness.  Throws on fewer than 5 points or degenerate design.
FlatnessFit fit_flatness(const std::vector<double>& logs,
                         const std::vector<double>& eps, double order);

// log of sup over the (x, z) probe of |eps^{m0} u^{d_b} - eps^{m0} u^{d_a}|,
// computed from the three-path decomposition: the two rays restarted at the
// arc radius plus the connecting arc, each accumulated as a LogComplex so the
// exponentially small pieces never underflow.  Requires solved fixed points
// along both directions at the same eps; the arc is sampled at n_arc
// directions, each re-solved.
double inner_cocycle_log(cplx eps, const EquationSpec& spec,
                         const ScaleParams& p, const AdmissibilityReport& adm,
                         const RayGrid2D& shape, double dir_a, double dir_b,
                         double arc_radius, const std::vector<cplx>& xs,
                         const std::vector<cplx>& zs, int n_arc = 9,
                         double solve_tol = 1e-9);

// Outer analogue: log of sup over (t, z) of |eps^{-gamma0} v^{u_b} -
// eps^{-gamma0} v^{u_a}| with the classical Laplace kernel e^{-(t/eps^gamma)u}.
double outer_cocycle_log(cplx eps, const EquationSpec& spec,
                         const ScaleParams& p, const OuterGrid2D& shape,
                         double dir_a, double dir_b, double arc_radius,
                         const std::vector<cplx>& ts, const std::vector<cplx>& zs,
                         int n_arc = 9, double solve_tol = 1e-9);

// Six-point geometric eps ladder for a flatness fit of order k: the bottom is
// chosen so the predicted |log Theta| ~ A_pred/eps^k stays within the log-space
// budget (~550), the top capped at 0.9*eps0 (one decade, compressed when the
// cap binds).  Returned strictly decreasing.
std::vector<double> flatness_ladder(double A_pred, double k, double eps0,
                                    int n_points = 6);

// JSON summary asserting that the best-r2 tested order matches chi*kappa for
// the inner family and gamma for the outer one.
std::string gevrey_report(const std::vector<FlatnessFit>& inner_fits,
                          const std::vector<FlatnessFit>& outer_fits,
                          const ScaleParams& p);

// ---------------------------------------------------------------------------
// Exact-solvency probe: relative residual of the full equation at (t, z).
// A synthesized solution enters through a symbol evaluator
//   u(t, z, S) = F^{-1}_m[ S(im) u_hat(t, m) ](z),
// so every d_z polynomial acts in frequency space before inversion;
// d_t^{delta} is taken by 5-point central differences with step 1e-3 |t|.
// All right-hand-side inversions use the same n_m-point frequency grid as the
// evaluator so that grid-level discretization cancels between the two sides.
using SymbolEval = std::function<cplx(cplx, cplx, const Polynomial&)>;

SymbolEval inner_symbol_eval(const FixedPointResult& fp, cplx eps,
                             const ScaleParams& p, double delta1 = 0.5);
SymbolEval outer_symbol_eval(const FixedPointResult& fp, cplx eps,
                             const ScaleParams& p, double delta1 = 0.5);

double pde_residual(const SymbolEval& u, cplx t, cplx z, cplx eps,
                    const EquationSpec& spec, const ScaleParams& p, int n_m);

}  // namespace bltk
