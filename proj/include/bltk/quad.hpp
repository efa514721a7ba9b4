#pragma once
// Quadrature and interpolation primitives shared by the transform and solver
// layers: Gauss-Legendre panels, geometric radial grids, monotone-cubic
// interpolation per column, cubic integration of sampled lines, and a scaled
// complex type for log-space accumulation of exponentially small integrals.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bltk/poly.hpp"

namespace bltk {

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes/weights on [-1, 1] (computed once per order by Newton
// iteration on the Legendre polynomial; order <= 64).
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int order);

// Integrate f over [a, b] with `panels` composite GL panels of given order.
template <typename F>
auto gl_integrate(F&& f, double a, double b, int panels = 8, int order = 16)
    -> decltype(f(0.0)) {
  const GaussRule& g = gauss_legendre(order);
  decltype(f(0.0)) acc{};
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h, mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < g.x.size(); ++i)
      acc += f(mid + 0.5 * h * g.x[i]) * (0.5 * h * g.w[i]);
  }
  return acc;
}

// Geometric panels covering [a, b] (a > 0), finer near a; integrates f.
template <typename F>
auto gl_integrate_geom(F&& f, double a, double b, int panels = 12, int order = 12)
    -> decltype(f(0.0)) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("gl_integrate_geom range");
  const GaussRule& g = gauss_legendre(order);
  decltype(f(0.0)) acc{};
  double ratio = std::pow(b / a, 1.0 / panels);
  double lo = a;
  for (int p = 0; p < panels; ++p) {
    double hi = (p + 1 == panels) ? b : lo * ratio;
    double mid = 0.5 * (lo + hi), h = hi - lo;
    for (std::size_t i = 0; i < g.x.size(); ++i)
      acc += f(mid + 0.5 * h * g.x[i]) * (0.5 * h * g.w[i]);
    lo = hi;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Radial grids: r[0] = 0, then geometric from r1 to R.
std::vector<double> geometric_grid(double R, int n_nodes, double r1_frac = 1e-4);

// ---------------------------------------------------------------------------
// Monotone cubic (PCHIP-style slopes, complex values interpolated component-
// wise) on a strictly increasing abscissa.  Evaluation outside the range is an
// error unless clamp is set.
class CubicLine {
public:
  CubicLine() = default;
  CubicLine(std::vector<double> x, std::vector<cplx> y);
  cplx operator()(double xq) const;
  const std::vector<double>& x() const { return x_; }

private:
  std::vector<double> x_;
  std::vector<cplx> y_, d_;  // values and endpoint derivatives per node
};

// Integral of a sampled line over its whole abscissa using local cubic
// (4-point Newton-Cotes on nonuniform grids); order-4 accurate.
cplx integrate_samples(const std::vector<double>& x, const std::vector<cplx>& y);

// ---------------------------------------------------------------------------
// Scaled complex value m * exp(L): keeps |m| in [1, 2) (or zero) so that
// quantities with |log| far beyond double range stay representable.
struct LogComplex {
  cplx mant{0.0, 0.0};
  double lg = -std::numeric_limits<double>::infinity();  // natural log scale

  static LogComplex from(cplx v) {
    LogComplex r;
    double a = std::abs(v);
    if (a == 0.0 || !std::isfinite(a)) return r;
    r.lg = std::log(a);
    r.mant = v / a;
    return r;
  }
  static LogComplex from_log(cplx unit, double lg) {
    LogComplex r; r.mant = unit; r.lg = lg; return r;
  }
  bool zero() const { return !(lg > -std::numeric_limits<double>::infinity()); }
  double log_abs() const { return zero() ? -std::numeric_limits<double>::infinity()
                                         : lg + std::log(std::abs(mant)); }
  LogComplex operator*(const LogComplex& o) const {
    if (zero() || o.zero()) return LogComplex();
    return from_log(mant * o.mant / std::abs(mant * o.mant),
                    lg + o.lg + std::log(std::abs(mant * o.mant)));
  }
  LogComplex operator+(const LogComplex& o) const {
    if (zero()) return o;
    if (o.zero()) return *this;
    const LogComplex &big = (lg >= o.lg) ? *this : o;
    const LogComplex &sml = (lg >= o.lg) ? o : *this;
    double dl = sml.lg - big.lg;
    cplx v = big.mant + (dl < -700.0 ? cplx(0.0) : sml.mant * std::exp(dl));
    double a = std::abs(v);
    if (a == 0.0) return LogComplex();
    return from_log(v / a, big.lg + std::log(a));
  }
  LogComplex operator-(const LogComplex& o) const {
    LogComplex n = o;
    n.mant = -n.mant;
    return *this + n;
  }
};

}  // namespace bltk
