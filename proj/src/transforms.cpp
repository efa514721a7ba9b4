#include "bltk/transforms.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bltk {

std::string RayFunction::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "r,re,im\n";
  for (std::size_t i = 0; i < r_grid.size(); ++i)
    os << r_grid[i] << "," << values[i].real() << "," << values[i].imag() << "\n";
  return os.str();
}

RayFunction sample_ray(double direction, const std::vector<double>& r_grid,
                       const std::function<cplx(cplx)>& f) {
  RayFunction w;
  w.direction = direction;
  w.r_grid = r_grid;
  w.values.resize(r_grid.size());
  cplx e = std::exp(cplx(0.0, direction));
  for (std::size_t i = 0; i < r_grid.size(); ++i) w.values[i] = f(r_grid[i] * e);
  return w;
}

FormalSeries mk_borel(const FormalSeries& s, int kappa) {
  if (kappa < 1) throw std::invalid_argument("mk_borel: kappa >= 1");
  FormalSeries out;
  out.coeffs.resize(s.coeffs.size());
  for (std::size_t i = 0; i < s.coeffs.size(); ++i)
    out.coeffs[i] = s.coeffs[i] / gamma_fn((i + 1) / double(kappa));
  return out;
}

namespace {

double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

cplx mk_laplace(const RayFunction& w, cplx T, int kappa, double Delta) {
  double phase = wrap_pi(kappa * (w.direction - std::arg(T)));
  if (std::cos(phase) < Delta)
    throw std::domain_error("mk_laplace: ray outside the admissible sector");
  const auto& r = w.r_grid;
  std::size_t n = r.size();
  if (n < 3 || r[0] != 0.0) throw std::invalid_argument("mk_laplace: bad r_grid");
  cplx e = std::exp(cplx(0.0, w.direction));
  std::vector<cplx> y(n);
  for (std::size_t i = 1; i < n; ++i) {
    cplx u = r[i] * e;
    cplx arg = std::pow(u / T, kappa);
    y[i] = double(kappa) * w.values[i] * std::exp(-arg) / r[i];
  }
  y[0] = double(kappa) * w.values[1] / r[1];  // limiting slope, damping -> 1
  // Growth guard: the damped integrand must decay at the tail.
  if (std::abs(y[n - 1]) > std::abs(y[n - 2]) &&
      std::abs(y[n - 1]) > 1e-14 * std::abs(y[n / 2]))
    throw std::domain_error("mk_laplace: integrand not decaying at grid tail");
  return integrate_samples(r, y);
}

RayFunction borel_identity_irregular(const RayFunction& w, int kappa) {
  RayFunction out = w;
  cplx ek = std::exp(cplx(0.0, kappa * w.direction));
  for (std::size_t i = 0; i < w.r_grid.size(); ++i)
    out.values[i] = double(kappa) * std::pow(w.r_grid[i], kappa) * ek * w.values[i];
  return out;
}

RayFunction borel_identity_monomial(const RayFunction& w, int m, int kappa) {
  RayFunction out = w;
  out.values = power_kernel_line(w.r_grid, w.values, w.direction, kappa,
                                 double(m) / kappa, 0);
  return out;
}

cplx classical_laplace(const RayFunction& w, cplx t, double delta1) {
  double phase = wrap_pi(w.direction + std::arg(t));
  if (!(std::abs(phase) < M_PI / 2) || std::cos(phase) < delta1)
    throw std::domain_error("classical_laplace: ray outside the admissible half-plane");
  const auto& r = w.r_grid;
  std::size_t n = r.size();
  cplx e = std::exp(cplx(0.0, w.direction));
  std::vector<cplx> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = w.values[i] * std::exp(-t * (r[i] * e)) * e;
  if (std::abs(y[n - 1]) > std::abs(y[n - 2]) &&
      std::abs(y[n - 1]) > 1e-14 * std::abs(y[n / 2]))
    throw std::domain_error("classical_laplace: integrand not decaying at grid tail");
  return integrate_samples(r, y);
}

double log_gamma_fn(double x) { return std::lgamma(x); }

double gamma_fn(double x) {
  // Lanczos approximation (g = 7, n = 9), real positive arguments.
  static const double coef[] = {0.99999999999980993,  676.5203681218851,
                                -1259.1392167224028,  771.32342877765313,
                                -176.61502916214059,  12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6,
                                1.5056327351493116e-7};
  if (x < 0.5) return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
  x -= 1.0;
  double a = coef[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
  return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double mittag_leffler(double beta, double x, int N) {
  if (!(beta > 0.0) || x < 0.0) throw std::invalid_argument("mittag_leffler domain");
  if (x > 0.0 && std::pow(x, 1.0 / beta) > 700.0)
    throw std::overflow_error("mittag_leffler: bound exponent x^(1/beta) = " +
                              std::to_string(std::pow(x, 1.0 / beta)) +
                              " exceeds the log-space budget");
  double sum = 1.0;  // n = 0 term
  double lx = x > 0.0 ? std::log(x) : 0.0;
  for (int n = 1; n <= N; ++n) {
    if (x == 0.0) break;
    double lt = n * lx - std::lgamma(1.0 + beta * n);
    double term = std::exp(lt);
    sum += term;
    if (term < 1e-15 * sum) return sum;
  }
  if (x == 0.0) return sum;
  throw std::runtime_error("mittag_leffler: truncation target not reached");
}

std::vector<cplx> power_kernel_line(const std::vector<double>& r_grid,
                                    const std::vector<cplx>& f_line,
                                    double direction, int kappa, double a, int p) {
  if (r_grid.size() != f_line.size() || r_grid.size() < 3)
    throw std::invalid_argument("power_kernel_line: bad line");
  if (!(a > 0.0)) throw std::invalid_argument("power_kernel_line: a must be positive");
  CubicLine interp(r_grid, f_line);
  std::vector<cplx> out(r_grid.size(), cplx(0.0, 0.0));
  const cplx ekd = std::exp(cplx(0.0, kappa * direction));
  const double slope_scale = std::abs(f_line[1]) > 0.0 ? 1.0 : 0.0;
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    double rt = r_grid[i];
    cplx tauk = std::pow(rt, kappa) * ekd;
    // sigma in (0, 1/2): substitute sigma = u^kappa.
    double u_hi = std::pow(0.5, 1.0 / kappa);
    cplx I1 = gl_integrate(
        [&](double u) -> cplx {
          double sig = std::pow(u, kappa);
          cplx fv;
          double ra = rt * u;
          if (ra < r_grid[1]) {
            fv = (slope_scale ? f_line[1] / r_grid[1] * ra : interp(ra));
          } else {
            fv = interp(ra);
          }
          // integrand: kappa * (1-sigma)^(a-1) sigma^p f(rt*u) / u
          return double(kappa) * std::pow(1.0 - sig, a - 1.0) *
                 std::pow(sig, p) * fv / u;
        },
        0.0, u_hi, 6, 10);
    // sigma in (1/2, 1): substitute w = (1-sigma)^a.
    double w_hi = std::pow(0.5, a);
    cplx I2 = gl_integrate(
        [&](double w) -> cplx {
          double sig = 1.0 - std::pow(w, 1.0 / a);
          cplx fv = interp(rt * std::pow(sig, 1.0 / kappa));
          return (1.0 / a) * std::pow(sig, p - 1.0) * fv;
        },
        0.0, w_hi, 4, 10);
    cplx pref = std::pow(tauk, a) / gamma_fn(a);
    cplx pw = (p == 0) ? cplx(1.0, 0.0) : std::pow(double(kappa) * tauk, p);
    out[i] = pref * pw * (I1 + I2);
  }
  return out;
}

}  // namespace bltk
