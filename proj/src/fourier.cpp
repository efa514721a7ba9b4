#include "bltk/fourier.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace bltk {

SampledLine SampledLine::zeros(double m_max, int n_pts) {
  if (n_pts < 3 || n_pts % 2 == 0) throw std::invalid_argument("n_pts must be odd >= 3");
  SampledLine s;
  s.m_max = m_max;
  s.n_pts = n_pts;
  s.values.assign(n_pts, cplx(0.0, 0.0));
  return s;
}

std::string SampledLine::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "m,re,im\n";
  for (int j = 0; j < n_pts; ++j)
    os << m_at(j) << "," << values[j].real() << "," << values[j].imag() << "\n";
  return os.str();
}

SampledLine sample_line(double m_max, int n_pts, const std::function<cplx(double)>& f) {
  SampledLine s = SampledLine::zeros(m_max, n_pts);
  for (int j = 0; j < n_pts; ++j) s.values[j] = f(s.m_at(j));
  return s;
}

SampledLine materialize_profile(const ProfileSpec& prof, double beta, double mu,
                                double m_max, int n_pts) {
  return sample_line(m_max, n_pts, [&](double m) {
    return cplx(prof.amp * std::pow(1.0 + std::abs(m), -mu - 1.0) *
                    std::exp(-beta * std::abs(m)),
                0.0);
  });
}

double ebeta_norm(const SampledLine& h, double beta, double mu) {
  if (h.values.empty()) throw std::invalid_argument("ebeta_norm: empty grid");
  if (!(beta > 0.0) || !(mu > 1.0)) throw std::invalid_argument("ebeta_norm: beta>0, mu>1");
  double best = 0.0;
  for (int j = 0; j < h.n_pts; ++j) {
    double m = std::abs(h.m_at(j));
    double w = std::pow(1.0 + m, mu) * std::exp(beta * m);
    best = std::max(best, w * std::abs(h.values[j]));
  }
  return best;
}

SampledLine star_product(const SampledLine& f, const SampledLine& g,
                         const Polynomial& Q1, const Polynomial& Q2,
                         const Polynomial& R) {
  if (f.n_pts != g.n_pts || f.m_max != g.m_max)
    throw std::invalid_argument("star_product: grids differ");
  const int n = f.n_pts;
  const double h = f.spacing();
  SampledLine out = SampledLine::zeros(f.m_max, n);
  for (int j = 0; j < n; ++j) {
    cplx Rj = R(cplx(0.0, f.m_at(j)));
    if (std::abs(Rj) < 1e-12)
      throw std::domain_error("star_product: symbol R nearly singular at m=" +
                              std::to_string(f.m_at(j)));
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
      int jk = j - k + (n - 1) / 2;     // index of m_j - m_k on the shared grid
      if (jk < 0 || jk >= n) continue;  // zero extension
      double wk = (k == 0 || k == n - 1) ? 0.5 : 1.0;
      double mk = g.m_at(k), mjk = f.m_at(jk);
      acc += Q1(cplx(0.0, mjk)) * f.values[jk] * Q2(cplx(0.0, mk)) * g.values[k] * wk;
    }
    out.values[j] = acc * h / Rj;
  }
  return out;
}

cplx inverse_fourier(const SampledLine& h, cplx z) {
  const int n = h.n_pts;
  const double hm = h.spacing();
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    double m = h.m_at(j);
    acc += h.values[j] * std::exp(cplx(0.0, 1.0) * z * m) * w;
  }
  return acc * hm / std::sqrt(2.0 * M_PI);
}

double product_identity_check(const SampledLine& f, const SampledLine& g, cplx z) {
  Polynomial one = Polynomial::constant(1.0);
  SampledLine conv = star_product(f, g, one, one, one);
  for (auto& v : conv.values) v /= std::sqrt(2.0 * M_PI);
  cplx lhs = inverse_fourier(f, z) * inverse_fourier(g, z);
  cplx rhs = inverse_fourier(conv, z);
  return std::abs(lhs - rhs);
}

}  // namespace bltk
