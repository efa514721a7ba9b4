#include "bltk/inner.hpp"

#include <cmath>
#include <stdexcept>

namespace bltk {

cplx cpow(cplx base, const Rational& e) {
  if (std::abs(base) == 0.0) throw std::domain_error("cpow: zero base");
  return std::exp(e.value() * std::log(base));
}

RayGrid2D RayGrid2D::zeros(double direction, const std::vector<double>& r_grid,
                           double m_max, int n_m) {
  RayGrid2D g;
  g.direction = direction;
  g.r_grid = r_grid;
  g.m_max = m_max;
  g.n_m = n_m;
  g.values.assign(r_grid.size(), std::vector<cplx>(n_m, cplx(0.0, 0.0)));
  return g;
}

namespace {

double profile_at(const ProfileSpec& prof, double beta, double mu, double m) {
  return prof.amp * std::pow(1.0 + std::abs(m), -mu - 1.0) *
         std::exp(-beta * std::abs(m));
}

}  // namespace

double fnorm(const RayGrid2D& w, cplx eps, const ScaleParams& p) {
  double echi = std::pow(std::abs(eps), p.chi.value());
  double best = 0.0;
  for (int j = 0; j < w.n_m; ++j) {
    double m = w.m_at(j);
    double wm = std::pow(1.0 + std::abs(m), p.mu) * std::exp(p.beta * std::abs(m));
    // r = 0 limiting slope: weight ~ 1/sigma, |w| ~ r * slope.
    if (w.r_grid.size() > 1 && w.r_grid[1] > 0.0)
      best = std::max(best, wm * echi * std::abs(w.values[1][j]) / w.r_grid[1]);
    for (std::size_t i = 1; i < w.r_grid.size(); ++i) {
      double sig = w.r_grid[i] / echi;
      double lw = -p.nu * std::pow(sig, p.kappa);
      double wt = lw < -700.0
                      ? 0.0
                      : (1.0 + std::pow(sig, 2 * p.kappa)) / sig * std::exp(lw);
      best = std::max(best, wm * wt * std::abs(w.values[i][j]));
    }
  }
  return best;
}

RayGrid2D forcing_psi(cplx eps, const EquationSpec& spec, const ScaleParams& p,
                      const RayGrid2D& shape) {
  RayGrid2D out = RayGrid2D::zeros(shape.direction, shape.r_grid, shape.m_max,
                                   shape.n_m);
  const ForcingSpec& F = spec.forcing;
  if (F.F1.degree() < 0) return out;  // F1 = 0
  double ct = std::cos(F.thetaF);
  if (!(ct > 0.0)) throw std::domain_error("forcing_psi: thetaF outside (-pi/2,pi/2)");

  const int N_CAP = 160;
  // J_n = int over the ray of e^{-KF u} (F1/F2)(u) u^n/n! du, u = r e^{i thetaF}.
  double RF = 40.0 / (F.KF * ct);
  auto grid = geometric_grid(RF, 400);
  cplx e = std::exp(cplx(0.0, F.thetaF));
  std::vector<cplx> J(N_CAP + 1, cplx(0.0, 0.0));
  for (int n = 1; n <= N_CAP; ++n) {
    std::vector<cplx> y(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      cplx u = grid[i] * e;
      cplx f2 = F.F2(u);
      if (std::abs(f2) < 1e-12)
        throw std::domain_error("forcing_psi: F2 vanishes on the ray");
      double lr = grid[i] > 0.0
                      ? -F.KF * grid[i] * ct + n * std::log(grid[i]) -
                            std::lgamma(n + 1.0)
                      : -1e308;
      y[i] = lr < -700.0 ? cplx(0.0, 0.0)
                         : std::exp(lr) * std::exp(cplx(0.0, (n + 1) * F.thetaF)) *
                               F.F1(u) / f2;
    }
    J[n] = integrate_samples(grid, y);
  }

  cplx scale = cpow(eps, Rational(F.nF));
  cplx zfac = -1.0 / cpow(eps, p.gamma + p.alpha);
  cplx edir = std::exp(cplx(0.0, shape.direction));
  std::vector<double> cf(shape.n_m);
  for (int j = 0; j < shape.n_m; ++j)
    cf[j] = profile_at(F.CF, p.beta, p.mu, shape.m_at(j));

  for (std::size_t i = 1; i < shape.r_grid.size(); ++i) {
    cplx tau = shape.r_grid[i] * edir;
    cplx sum(0.0, 0.0), pw = tau * zfac;
    double run = 0.0;
    bool done = false;
    for (int n = 1; n <= N_CAP; ++n) {
      cplx term = J[n] * pw / gamma_fn(double(n) / p.kappa);
      sum += term;
      run = std::max(run, std::abs(sum));
      if (std::abs(term) < 1e-12 * std::max(run, 1e-300)) {
        done = true;
        break;
      }
      pw *= tau * zfac;
    }
    if (!done)
      throw std::domain_error(
          "forcing_psi: series tail not below target; |tau/eps^(gamma+alpha)| "
          "too large for the grid");
    for (int j = 0; j < shape.n_m; ++j)
      out.values[i][j] = scale * cf[j] * sum;
  }
  return out;
}

RayGrid2D apply_H(const RayGrid2D& w, cplx eps, const EquationSpec& spec,
                  const ScaleParams& p, const AdmissibilityReport& adm) {
  (void)adm;
  const std::size_t nr = w.r_grid.size();
  const int nm = w.n_m;
  const int kap = p.kappa;
  const double dir = w.direction;
  RayGrid2D out = RayGrid2D::zeros(dir, w.r_grid, w.m_max, nm);

  // P_m(tau) on the grid, with the lower-bound check.
  std::vector<std::vector<cplx>> P(nr, std::vector<cplx>(nm));
  cplx edir = std::exp(cplx(0.0, dir));
  for (std::size_t i = 0; i < nr; ++i)
    for (int j = 0; j < nm; ++j) {
      P[i][j] = eval_P_m(w.r_grid[i] * edir, w.m_at(j), spec, p);
      if (std::abs(P[i][j]) < 1e-10)
        throw std::domain_error("apply_H: |P_m| below the admissibility floor");
    }

  std::vector<cplx> Qm(nm), RDm(nm);
  for (int j = 0; j < nm; ++j) {
    cplx im(0.0, w.m_at(j));
    Qm[j] = spec.Qpoly(im);
    RDm[j] = spec.RD()(im);
  }

  std::vector<cplx> col(nr);
  auto get_col = [&](const RayGrid2D& g, int j) {
    for (std::size_t i = 0; i < nr; ++i) col[i] = g.values[i][j];
    return col;
  };
  int m0 = spec.m_exp[0];

  // (i) linear fractional-kernel terms.
  for (int l = 1; l <= spec.q; ++l) {
    cplx coef = -spec.a[l] *
                cpow(eps, Rational(spec.m_exp[l] - m0) - p.alpha * Rational(spec.k_exp[l - 1]));
    for (int j = 0; j < nm; ++j) {
      auto k = power_kernel_line(w.r_grid, get_col(w, j), dir, kap,
                                 double(spec.k_exp[l - 1]) / kap, 0);
      for (std::size_t i = 0; i < nr; ++i)
        out.values[i][j] += coef * Qm[j] * k[i] / P[i][j];
    }
  }

  // (ii) nonlinear term: bracket B on the grid, then the h_l kernels.
  {
    // Per-column interpolants of w.
    std::vector<CubicLine> cols;
    cols.reserve(nm);
    for (int j = 0; j < nm; ++j) cols.emplace_back(w.r_grid, get_col(w, j));
    Polynomial one(std::vector<cplx>{cplx(1.0, 0.0)});
    const auto& rule = gauss_legendre(6);
    const double inv_s2pi = 1.0 / std::sqrt(2.0 * M_PI);
    const double u_hi = std::pow(0.5, 1.0 / kap);
    const int panels = 2;
    std::vector<std::vector<cplx>> B(nr, std::vector<cplx>(nm, cplx(0.0, 0.0)));
    SampledLine fa = SampledLine::zeros(w.m_max, nm), fb = fa;
    for (std::size_t i = 1; i < nr; ++i) {
      double r = w.r_grid[i];
      for (int half = 0; half < 2; ++half) {
        // sigma = u^kappa (half 0) or 1-sigma = u^kappa (half 1); both give
        // integrand kappa * conv(sigma) / (u (1-u^kappa) sqrt(2pi)).
        for (int pa = 0; pa < panels; ++pa) {
          double a = u_hi * pa / panels, b = u_hi * (pa + 1) / panels;
          for (std::size_t qn = 0; qn < rule.x.size(); ++qn) {
            double u = 0.5 * (a + b) + 0.5 * (b - a) * rule.x[qn];
            double wt = 0.5 * (b - a) * rule.w[qn];
            double sig = std::pow(u, kap);
            double r_small = r * u;                                // sigma side
            double r_big = r * std::pow(1.0 - sig, 1.0 / kap);     // 1-sigma side
            double ra = half == 0 ? r_big : r_small;   // argument of the first slot
            double rb = half == 0 ? r_small : r_big;
            for (int j = 0; j < nm; ++j) {
              fa.values[j] = cols[j](ra);
              fb.values[j] = cols[j](rb);
            }
            auto st = star_product(fa, fb, spec.Q1poly, spec.Q2poly, one);
            double fac = wt * kap / (u * (1.0 - sig)) * inv_s2pi;
            for (int j = 0; j < nm; ++j) B[i][j] += fac * st.values[j];
          }
        }
      }
    }
    for (int l = 0; l <= spec.M; ++l) {
      cplx coef = -spec.c[l] *
                  cpow(eps, Rational(spec.mu_exp[l] - 2 * m0) -
                                p.alpha * Rational(spec.h_exp[l]));
      std::vector<cplx> bc(nr);
      for (int j = 0; j < nm; ++j) {
        for (std::size_t i = 0; i < nr; ++i) bc[i] = B[i][j];
        auto k = power_kernel_line(w.r_grid, bc, dir, kap,
                                   double(spec.h_exp[l]) / kap, 0);
        for (std::size_t i = 0; i < nr; ++i)
          out.values[i][j] += coef * k[i] / P[i][j];
      }
    }
  }

  // (iii) inhomogeneous monomials.
  for (int j2 = 0; j2 <= spec.Qcount; ++j2) {
    cplx coef = cpow(eps, Rational(spec.n_exp[j2]) -
                              p.alpha * Rational(spec.b_exp[j2]));
    double g = gamma_fn(double(spec.b_exp[j2]) / kap);
    for (int j = 0; j < nm; ++j) {
      double Bj = profile_at(spec.Bj[j2], p.beta, p.mu, w.m_at(j));
      for (std::size_t i = 1; i < nr; ++i) {
        cplx taub = std::pow(w.r_grid[i], spec.b_exp[j2]) *
                    std::exp(cplx(0.0, spec.b_exp[j2] * dir));
        out.values[i][j] += coef * Bj * taub / (P[i][j] * g);
      }
    }
  }

  // (iv) forcing.
  {
    auto psi = forcing_psi(eps, spec, p, w);
    for (std::size_t i = 0; i < nr; ++i)
      for (int j = 0; j < nm; ++j) out.values[i][j] += psi.values[i][j] / P[i][j];
  }

  // (v) irregular-operator correction at level D.
  {
    int dD = spec.deltaD();
    auto A = a_coeffs(dD, kap);
    for (int pp = 1; pp <= dD - 1; ++pp) {
      for (int j = 0; j < nm; ++j) {
        auto k = power_kernel_line(w.r_grid, get_col(w, j), dir, kap,
                                   double(dD - pp), pp);
        for (std::size_t i = 0; i < nr; ++i)
          out.values[i][j] += A[pp - 1] * RDm[j] * k[i] / P[i][j];
      }
    }
  }

  // (vi) lower levels l < D.
  for (int l = 1; l <= spec.D - 1; ++l) {
    int dl = spec.delta_exp[l - 1];
    int dlk = p.dlk[l - 1];
    cplx coef = cpow(eps, Rational(spec.Delta[l - 1]) +
                              p.alpha * Rational(dl - spec.d_exp[l - 1]) -
                              Rational(m0));
    auto A = a_coeffs(dl, kap);
    for (int j = 0; j < nm; ++j) {
      cplx Rl = spec.Rpoly[l - 1](cplx(0.0, w.m_at(j)));
      auto k0 = power_kernel_line(w.r_grid, get_col(w, j), dir, kap,
                                  double(dlk) / kap, dl);
      for (std::size_t i = 0; i < nr; ++i)
        out.values[i][j] += coef * Rl * k0[i] / P[i][j];
      for (int pp = 1; pp <= dl - 1; ++pp) {
        auto k = power_kernel_line(w.r_grid, get_col(w, j), dir, kap,
                                   double(dlk + kap * (dl - pp)) / kap, pp);
        for (std::size_t i = 0; i < nr; ++i)
          out.values[i][j] += coef * Rl * A[pp - 1] * k[i] / P[i][j];
      }
    }
  }

  return out;
}

FixedPointResult solve_inner(cplx eps, const EquationSpec& spec,
                             const ScaleParams& p, const AdmissibilityReport& adm,
                             const RayGrid2D& shape, double tol, int max_iter) {
  FixedPointResult res;
  res.eps = eps;
  RayGrid2D w = RayGrid2D::zeros(shape.direction, shape.r_grid, shape.m_max,
                                 shape.n_m);
  double prev_delta = -1.0;
  int bad = 0;
  for (int it = 1; it <= max_iter; ++it) {
    RayGrid2D next = apply_H(w, eps, spec, p, adm);
    RayGrid2D diff = next;
    for (std::size_t i = 0; i < diff.values.size(); ++i)
      for (int j = 0; j < diff.n_m; ++j) diff.values[i][j] -= w.values[i][j];
    double delta = fnorm(diff, eps, p);
    if (prev_delta > 0.0) {
      double ratio = delta / prev_delta;
      res.contraction_ratios.push_back(ratio);
      bad = ratio >= 1.0 ? bad + 1 : 0;
      if (bad >= 3)
        throw std::runtime_error(
            "solve_inner: contraction ratio >= 1 three times (divergence)");
    }
    prev_delta = delta;
    w = std::move(next);
    res.iterations = it;
    if (delta < tol * std::max(1.0, fnorm(w, eps, p))) break;
    if (it == max_iter)
      throw std::runtime_error("solve_inner: max_iter exceeded");
  }
  RayGrid2D img = apply_H(w, eps, spec, p, adm);
  for (std::size_t i = 0; i < img.values.size(); ++i)
    for (int j = 0; j < img.n_m; ++j) img.values[i][j] -= w.values[i][j];
  res.residual_norm = fnorm(img, eps, p);
  res.solution = std::move(w);
  return res;
}

cplx inner_solution(cplx t, cplx z, cplx eps, const FixedPointResult& fp,
                    const ScaleParams& p, double delta1) {
  const RayGrid2D& w = fp.solution;
  cplx T = cpow(eps, p.alpha) * t;
  SampledLine line = SampledLine::zeros(w.m_max, w.n_m);
  RayFunction ray;
  ray.direction = w.direction;
  ray.r_grid = w.r_grid;
  ray.values.resize(w.r_grid.size());
  for (int j = 0; j < w.n_m; ++j) {
    for (std::size_t i = 0; i < w.r_grid.size(); ++i) ray.values[i] = w.values[i][j];
    line.values[j] = mk_laplace(ray, T, p.kappa, delta1);
  }
  cplx m0p = cpow(eps, Rational(-p.m0));
  return m0p * inverse_fourier(line, z);
}

std::vector<double> a_coeffs(int delta, int kappa) {
  if (delta < 1) throw std::invalid_argument("a_coeffs: delta >= 1");
  int n_unk = delta - 1;
  if (n_unk == 0) return {};
  // Row n (n = 1..delta-1): falling(n,delta) - prod_{j<delta}(n+j kappa)
  //   = sum_p A_p prod_{j<p}(n+j kappa).
  std::vector<std::vector<long double>> Msys(n_unk,
                                             std::vector<long double>(n_unk + 1));
  for (int row = 0; row < n_unk; ++row) {
    long double n = row + 1;
    long double fall = 1.0L, full = 1.0L;
    for (int j = 0; j < delta; ++j) {
      fall *= (n - j);
      full *= (n + j * kappa);
    }
    for (int pp = 1; pp <= n_unk; ++pp) {
      long double c = 1.0L;
      for (int j = 0; j < pp; ++j) c *= (n + j * kappa);
      Msys[row][pp - 1] = c;
    }
    Msys[row][n_unk] = fall - full;
  }
  // Gaussian elimination with partial pivoting.
  for (int c = 0; c < n_unk; ++c) {
    int piv = c;
    for (int r = c + 1; r < n_unk; ++r)
      if (std::abs((double)Msys[r][c]) > std::abs((double)Msys[piv][c])) piv = r;
    std::swap(Msys[c], Msys[piv]);
    for (int r = 0; r < n_unk; ++r) {
      if (r == c) continue;
      long double f = Msys[r][c] / Msys[c][c];
      for (int cc = c; cc <= n_unk; ++cc) Msys[r][cc] -= f * Msys[c][cc];
    }
  }
  std::vector<double> A(n_unk);
  for (int c = 0; c < n_unk; ++c) A[c] = (double)(Msys[c][n_unk] / Msys[c][c]);
  return A;
}

}  // namespace bltk
