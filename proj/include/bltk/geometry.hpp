#pragma once
// Good coverings of the punctured epsilon-disc, the associated sector families
// with their direction selectors, and the time-domain scaling-gap check.

#include <functional>
#include <vector>

#include "bltk/model.hpp"
#include "bltk/turning.hpp"

namespace bltk {

struct Sector {
  double bisector = 0.0;
  double aperture = 0.0;       // < 2*pi
  double r_min = 0.0;
  double r_max = 1.0;

  bool contains(cplx z) const;
};

struct GoodCovering {
  std::vector<Sector> sectors;   // >= 2, cyclically overlapping
  double aperture_target = 0.0;
  double eps0 = 0.0;
};

// A covering together with the per-sector Borel directions.  The scalar
// directions are representative values (selector at the sector bisector); the
// selector closure supplies the epsilon-dependent ray actually used, since
// arg(eps^alpha t) sweeps by chi times the sector aperture as eps turns.
struct AssociatedFamily {
  GoodCovering covering;
  std::vector<double> directions;
  double theta = 0.0;            // inner ray aperture, > pi/kappa
  double delta1 = 0.5, delta2 = 0.25;
  double rho_X = 0.0;            // inner spatial radius
  double Delta_nu = 0.0;         // outer time-domain radius coefficient
  double alpha_inf = 0.0, beta_inf = 0.0;
  double adm_direction = 0.0;    // Borel-plane direction passing admissibility
  double adm_aperture = 0.0;     // aperture used by that admissibility check
  // select(p, eps, t) -> ray direction for covering sector p at (eps, t).
  std::function<double(std::size_t, cplx, cplx)> select;
};

// Equally spaced bisectors 2*pi*p/count; aperture = max(target, 2pi/count)+xi
// with xi = 10% of the target, clamped below the no-triple threshold.  All
// three covering invariants are verified on a 10^4-point angular mesh; an
// infeasible request throws std::domain_error.
GoodCovering build_covering(int count, double aperture_target, double eps0);

// Inner association: per-sector direction with passing sector admissibility,
// plus the selector gamma_p(eps, x) = arg(x) + chi*arg(eps) + parity*0.3/kappa
// validated on an angular mesh of the sector times a mesh of X
// (|arg(eps^alpha t) - gamma_p| <= theta/2 and |eps^alpha t| = |x||eps|^chi
// <= rho_X |eps|^chi).  Throws std::runtime_error on association failure.
AssociatedFamily associate_inner(const GoodCovering& cov, const EquationSpec& spec,
                                 const ScaleParams& p, double rho_X, double x_abs);

// Outer association: direction u_j in (-pi/2, pi/2) avoiding the roots of F2
// (0.5 degree first-feasible scan), selector u_j^Delta(eps, t) =
// -arg(t/eps^gamma) + parity*0.3, with cos(u_j^Delta + arg(t/eps^gamma)) >=
// delta1 validated on a mesh of the sector times a probe of the outer time
// domain.  Throws std::runtime_error listing the blocking roots if every
// candidate sector is blocked.
AssociatedFamily associate_outer(const GoodCovering& cov, const EquationSpec& spec,
                                 const ScaleParams& p, double Delta_nu,
                                 double t_probe_min, double t_probe_max,
                                 double delta1_inf);

struct ScalingGap {
  double margin = 0.0;         // (chi - alpha) - (gamma - Gamma)
  double eps_threshold = 0.0;  // (Delta_nu / rho_X)^(1/margin)
};

ScalingGap scaling_gap(const ScaleParams& p, double rho_X, double Delta_nu);

// Radius comparison: the inner time ball and the outer time exterior are
// disjoint at this eps iff rho_X|eps|^(chi-alpha) < Delta_nu|eps|^(gamma-Gamma).
bool time_domains_disjoint(const ScaleParams& p, double rho_X, double Delta_nu,
                           cplx eps);

}  // namespace bltk
