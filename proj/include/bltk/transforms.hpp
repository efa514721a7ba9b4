#pragma once
// Borel/Laplace calculus: the coefficientwise Borel transform, ray Laplace
// transforms (kernel exp(-(u/T)^kappa) and classical exp(-t*tau)), the
// operator-level Borel identities, and Gamma / Mittag-Leffler evaluation.

#include <functional>
#include <string>
#include <vector>

#include "bltk/poly.hpp"
#include "bltk/quad.hpp"

namespace bltk {

struct FormalSeries {
  // coeffs[i] is the coefficient of T^(i+1); series live in T*E[[T]].
  std::vector<cplx> coeffs;
  int truncation() const { return static_cast<int>(coeffs.size()); }
};

struct RayFunction {
  double direction = 0.0;
  std::vector<double> r_grid;   // strictly increasing, r_grid[0] = 0
  std::vector<cplx> values;     // value at r=0 must be 0 for Borel-plane data

  cplx tau_at(std::size_t i) const {
    return r_grid[i] * std::exp(cplx(0.0, direction));
  }
  std::string to_csv() const;
};

RayFunction sample_ray(double direction, const std::vector<double>& r_grid,
                       const std::function<cplx(cplx)>& f);

FormalSeries mk_borel(const FormalSeries& s, int kappa);

// kappa * Integral over the ray of w(u) exp(-(u/T)^kappa) du/u; Delta is the
// caller-supplied cosine margin for cos(kappa*(direction - arg T)).
cplx mk_laplace(const RayFunction& w, cplx T, int kappa, double Delta = 0.1);

// Borel image of t^(kappa+1) d/dt: multiplication by kappa*tau^kappa.
RayFunction borel_identity_irregular(const RayFunction& w, int kappa);

// Borel image of multiplication by t^m:
//   tau^kappa/Gamma(m/kappa) * int_0^{tau^kappa} (tau^kappa-s)^{m/kappa-1}
//     w(s^{1/kappa}) ds/s.
RayFunction borel_identity_monomial(const RayFunction& w, int m, int kappa);

// Classical Laplace along the ray: int w(tau) exp(-t*tau) dtau.
cplx classical_laplace(const RayFunction& w, cplx t, double delta1 = 0.1);

double gamma_fn(double x);
double log_gamma_fn(double x);
double mittag_leffler(double beta, double x, int N = 400);

// Power-kernel primitive shared with the solvers.  Given a line of values
// f(r) sampled on r_grid along a ray (f regarded as a function of s = tau^kappa
// through its kappa-th root radius r), returns for each grid radius r_t:
//   tau^{kappa a}/Gamma(a) * int_0^1 (1-sigma)^{a-1} sigma^{p}
//        f(r_t sigma^{1/kappa}) * (kappa tau^kappa)^p ... see implementation.
// Concretely: K(tau) = tau^kappa/Gamma(a) int_0^{tau^kappa}
//   (tau^kappa - s)^{a-1} (kappa s)^p f(s^{1/kappa}) ds/s,  tau = r_t e^{i dir}.
std::vector<cplx> power_kernel_line(const std::vector<double>& r_grid,
                                    const std::vector<cplx>& f_line,
                                    double direction, int kappa, double a, int p);

}  // namespace bltk
