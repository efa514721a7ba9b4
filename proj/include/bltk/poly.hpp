#pragma once
// Complex polynomials in one variable, ascending-degree coefficient storage.

#include <complex>
#include <vector>

namespace bltk {

using cplx = std::complex<double>;

class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  static Polynomial constant(cplx c) { return Polynomial({c}); }

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  int degree() const;          // -1 for the zero polynomial
  bool is_zero() const { return coeffs_.empty(); }

  cplx operator()(cplx x) const;   // Horner evaluation
  Polynomial derivative() const;

  // All roots with multiplicity (Durand-Kerner with Newton polishing).
  std::vector<cplx> roots(double tol = 1e-13, int max_iter = 500) const;

private:
  std::vector<cplx> coeffs_;  // trailing zeros trimmed
};

// Independent root-finder used as a test oracle (Aberth-Ehrlich iteration).
std::vector<cplx> aberth_roots(const Polynomial& p, double tol = 1e-13,
                               int max_iter = 500);

}  // namespace bltk
