#pragma once
// Truncated-grid realization of the exponentially weighted frequency space:
// the (beta,mu)-norm, the symbol-weighted star product, classical
// convolution, and the inverse Fourier transform.

#include <functional>
#include <string>
#include <vector>

#include "bltk/model.hpp"
#include "bltk/poly.hpp"

namespace bltk {

struct SampledLine {
  double m_max = 20.0;
  int n_pts = 2049;             // odd, symmetric grid
  std::vector<cplx> values;

  double spacing() const { return 2.0 * m_max / (n_pts - 1); }
  double m_at(int j) const { return -m_max + j * spacing(); }
  static SampledLine zeros(double m_max, int n_pts);

  std::string to_csv() const;
};

// Builds a line by sampling f(m).
SampledLine sample_line(double m_max, int n_pts, const std::function<cplx(double)>& f);

// Materializes the default decay profile amp*(1+|m|)^(-mu-1)*exp(-beta|m|).
SampledLine materialize_profile(const ProfileSpec& prof, double beta, double mu,
                                double m_max, int n_pts);

double ebeta_norm(const SampledLine& h, double beta, double mu);

// (f star g)(m_j) = 1/R(i m_j) * sum_k Q1(i(m_j-m_k)) f(m_j-m_k) Q2(i m_k) g(m_k) h_m
// with zero extension off-grid and trapezoid endpoint halving.
SampledLine star_product(const SampledLine& f, const SampledLine& g,
                         const Polynomial& Q1, const Polynomial& Q2,
                         const Polynomial& R);

cplx inverse_fourier(const SampledLine& h, cplx z);

// |F^{-1}(f)(z) F^{-1}(g)(z) - F^{-1}((1/sqrt(2pi)) f*g)(z)|, the product-
// identity residual used as a property probe.
double product_identity_check(const SampledLine& f, const SampledLine& g, cplx z);

}  // namespace bltk
