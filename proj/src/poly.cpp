#include "bltk/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bltk {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && std::abs(coeffs_.back()) == 0.0) coeffs_.pop_back();
}

int Polynomial::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

cplx Polynomial::operator()(cplx x) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

namespace {

double coeff_scale(const std::vector<cplx>& c) {
  double s = 0.0;
  for (const auto& v : c) s = std::max(s, std::abs(v));
  return s;
}

// One Newton step against p/p', guarded.
cplx newton_polish(const Polynomial& p, const Polynomial& dp, cplx z, int steps) {
  for (int i = 0; i < steps; ++i) {
    cplx d = dp(z);
    if (std::abs(d) == 0.0) break;
    cplx step = p(z) / d;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    z -= step;
  }
  return z;
}

}  // namespace

std::vector<cplx> Polynomial::roots(double tol, int max_iter) const {
  int n = degree();
  if (n < 1) return {};
  // Normalize to monic.
  std::vector<cplx> a(coeffs_);
  cplx lead = a.back();
  for (auto& v : a) v /= lead;

  // Cauchy bound for the root radius.
  double radius = 0.0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(a[i]));
  radius = 1.0 + radius;

  // Durand-Kerner from a spread of points on a circle (irrational angle offset
  // avoids symmetry stalls).
  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) {
    double th = 2.0 * M_PI * i / n + 0.4;
    z[i] = 0.5 * radius * cplx(std::cos(th), std::sin(th));
  }
  Polynomial monic(a);
  for (int it = 0; it < max_iter; ++it) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx num = monic(z[i]);
      cplx den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= (z[i] - z[j]);
      if (std::abs(den) == 0.0) { den = 1e-300; }
      cplx step = num / den;
      z[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < tol * std::max(1.0, radius)) break;
  }
  Polynomial dp = derivative();
  for (auto& r : z) r = newton_polish(*this, dp, r, 4);
  std::sort(z.begin(), z.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return z;
}

std::vector<cplx> aberth_roots(const Polynomial& p, double tol, int max_iter) {
  int n = p.degree();
  if (n < 1) return {};
  std::vector<cplx> a(p.coeffs());
  cplx lead = a.back();
  for (auto& v : a) v /= lead;
  double radius = 0.0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(a[i]));
  radius = 1.0 + radius;

  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) {
    double th = 2.0 * M_PI * i / n + 0.7;
    z[i] = 0.6 * radius * cplx(std::cos(th), std::sin(th));
  }
  Polynomial monic(a), dp = monic.derivative();
  for (int it = 0; it < max_iter; ++it) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx pv = monic(z[i]);
      cplx dv = dp(z[i]);
      if (std::abs(pv) == 0.0) continue;
      cplx ratio = (std::abs(dv) == 0.0) ? cplx(1e12, 0) : pv / dv;
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      cplx step = ratio / (1.0 - ratio * sum);
      z[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < tol * std::max(1.0, radius)) break;
  }
  std::sort(z.begin(), z.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return z;
}

}  // namespace bltk
