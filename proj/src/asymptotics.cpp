#include "bltk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bltk {

namespace {

// LogComplex factor exp(-zk) for complex zk with arbitrarily large real part.
LogComplex log_exp_neg(cplx zk) {
  return LogComplex::from_log(std::exp(cplx(0.0, -zk.imag())), -zk.real());
}

// Trapezoid weights on the sub-grid x[i0..n-1].
std::vector<double> trap_weights(const std::vector<double>& x, std::size_t i0) {
  std::size_t n = x.size();
  std::vector<double> w(n - i0, 0.0);
  for (std::size_t i = i0; i + 1 < n; ++i) {
    double h = x[i + 1] - x[i];
    w[i - i0] += 0.5 * h;
    w[i + 1 - i0] += 0.5 * h;
  }
  return w;
}

std::size_t nearest_node(const std::vector<double>& r, double target) {
  if (r.size() < 3) throw std::invalid_argument("cocycle: grid too small");
  std::size_t best = 1;
  for (std::size_t i = 1; i < r.size(); ++i)
    if (std::abs(r[i] - target) < std::abs(r[best] - target)) best = i;
  if (best + 2 >= r.size())
    throw std::domain_error("cocycle: arc radius too close to the grid rim");
  return best;
}

double sup_line_log(const std::vector<LogComplex>& line, double m_max, int n_m,
                    const std::vector<cplx>& zs, double extra_log) {
  double h = 2.0 * m_max / (n_m - 1);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& z : zs) {
    LogComplex acc;
    for (int j = 0; j < n_m; ++j) {
      double m = -m_max + j * h;
      double wj = (j == 0 || j == n_m - 1) ? 0.5 : 1.0;
      acc = acc + line[j] * LogComplex::from(wj * std::exp(cplx(0.0, 1.0) * z *
                                                            m));
    }
    double lg = acc.log_abs() + std::log(h / std::sqrt(2.0 * M_PI)) + extra_log;
    best = std::max(best, lg);
  }
  return best;
}

}  // namespace

double inner_cocycle_log(cplx eps, const EquationSpec& spec,
                         const ScaleParams& p, const AdmissibilityReport& adm,
                         const RayGrid2D& shape, double dir_a, double dir_b,
                         double arc_radius, const std::vector<cplx>& xs,
                         const std::vector<cplx>& zs, int n_arc,
                         double solve_tol) {
  if (dir_a == dir_b) return -std::numeric_limits<double>::infinity();
  if (n_arc < 3) throw std::invalid_argument("inner_cocycle_log: n_arc >= 3");
  std::vector<double> dirs(n_arc);
  for (int i = 0; i < n_arc; ++i)
    dirs[i] = dir_a + (dir_b - dir_a) * i / (n_arc - 1);
  std::vector<FixedPointResult> sols;
  sols.reserve(n_arc);
  for (double d : dirs) {
    RayGrid2D sh = RayGrid2D::zeros(d, shape.r_grid, shape.m_max, shape.n_m);
    sols.push_back(solve_inner(eps, spec, p, adm, sh, solve_tol, 200));
  }
  const auto& r = shape.r_grid;
  std::size_t ia = nearest_node(r, arc_radius);
  auto tw = trap_weights(r, ia);
  cplx echi = cpow(eps, p.chi);
  const int kap = p.kappa;
  double best = -std::numeric_limits<double>::infinity();

  for (const auto& x : xs) {
    cplx T = x * echi;
    std::vector<LogComplex> line(shape.n_m);
    for (int j = 0; j < shape.n_m; ++j) {
      LogComplex L;
      // Outward ray pieces: + along dir_b, - along dir_a.
      for (int side = 0; side < 2; ++side) {
        const auto& g = side == 0 ? sols.back() : sols.front();
        double d = side == 0 ? dir_b : dir_a;
        double sgn = side == 0 ? 1.0 : -1.0;
        cplx ed = std::exp(cplx(0.0, d));
        for (std::size_t i = ia; i < r.size(); ++i) {
          cplx zk = std::pow(r[i] * ed / T, kap);
          LogComplex term =
              LogComplex::from(sgn * kap * tw[i - ia] *
                               g.solution.values[i][j] / r[i]) *
              log_exp_neg(zk);
          L = L + term;
        }
      }
      // Connecting arc at the snapped radius (trapezoid over the re-solves).
      double dth = (dir_b - dir_a) / (n_arc - 1);
      for (int i = 0; i < n_arc; ++i) {
        double wj = (i == 0 || i == n_arc - 1) ? 0.5 : 1.0;
        cplx u = r[ia] * std::exp(cplx(0.0, dirs[i]));
        cplx zk = std::pow(u / T, kap);
        LogComplex term = LogComplex::from(cplx(0.0, 1.0) * double(kap) * wj *
                                           dth * sols[i].solution.values[ia][j]) *
                          log_exp_neg(zk);
        L = L + term;
      }
      line[j] = L;
    }
    best = std::max(best, sup_line_log(line, shape.m_max, shape.n_m, zs, 0.0));
  }

  // Representable regime: cross-check against naive subtraction of the two
  // synthesized solutions.
  if (best > -30.0 && !xs.empty() && !zs.empty()) {
    cplx t = xs[0] * cpow(eps, p.chi - p.alpha);
    cplx scale_m0 = cpow(eps, Rational(p.m0));
    cplx ua = inner_solution(t, zs[0], eps, sols.front(), p);
    cplx ub = inner_solution(t, zs[0], eps, sols.back(), p);
    double naive = std::log(std::abs(scale_m0 * (ub - ua)) + 1e-300);
    // Sup vs point value: naive must not exceed the decomposition sup wildly.
    if (naive > best + 0.1 * std::max(1.0, std::abs(best)) + 1.0)
      throw std::runtime_error(
          "inner_cocycle_log: naive subtraction disagrees with decomposition");
  }
  return best;
}

double outer_cocycle_log(cplx eps, const EquationSpec& spec,
                         const ScaleParams& p, const OuterGrid2D& shape,
                         double dir_a, double dir_b, double arc_radius,
                         const std::vector<cplx>& ts, const std::vector<cplx>& zs,
                         int n_arc, double solve_tol) {
  if (dir_a == dir_b) return -std::numeric_limits<double>::infinity();
  if (n_arc < 3) throw std::invalid_argument("outer_cocycle_log: n_arc >= 3");
  std::vector<double> dirs(n_arc);
  for (int i = 0; i < n_arc; ++i)
    dirs[i] = dir_a + (dir_b - dir_a) * i / (n_arc - 1);
  std::vector<FixedPointResult> sols;
  sols.reserve(n_arc);
  for (double d : dirs) {
    OuterGrid2D sh = OuterGrid2D::zeros(d, shape.r_grid, shape.m_max, shape.n_m);
    sols.push_back(solve_outer(eps, spec, p, sh, solve_tol, 200));
  }
  const auto& r = shape.r_grid;
  std::size_t ia = nearest_node(r, arc_radius);
  auto tw = trap_weights(r, ia);
  cplx eg = cpow(eps, p.gamma);
  double best = -std::numeric_limits<double>::infinity();

  for (const auto& t : ts) {
    cplx T = t / eg;
    std::vector<LogComplex> line(shape.n_m);
    for (int j = 0; j < shape.n_m; ++j) {
      LogComplex L;
      for (int side = 0; side < 2; ++side) {
        const auto& g = side == 0 ? sols.back() : sols.front();
        double d = side == 0 ? dir_b : dir_a;
        double sgn = side == 0 ? 1.0 : -1.0;
        cplx ed = std::exp(cplx(0.0, d));
        for (std::size_t i = ia; i < r.size(); ++i) {
          LogComplex term =
              LogComplex::from(sgn * tw[i - ia] * g.solution.values[i][j] * ed) *
              log_exp_neg(T * (r[i] * ed));
          L = L + term;
        }
      }
      double dth = (dir_b - dir_a) / (n_arc - 1);
      for (int i = 0; i < n_arc; ++i) {
        double wj = (i == 0 || i == n_arc - 1) ? 0.5 : 1.0;
        cplx u = r[ia] * std::exp(cplx(0.0, dirs[i]));
        LogComplex term = LogComplex::from(cplx(0.0, 1.0) * wj * dth * u *
                                           sols[i].solution.values[ia][j]) *
                          log_exp_neg(T * u);
        L = L + term;
      }
      line[j] = L;
    }
    best = std::max(best, sup_line_log(line, shape.m_max, shape.n_m, zs, 0.0));
  }

  if (best > -30.0 && !ts.empty() && !zs.empty()) {
    cplx sg = cpow(eps, p.gamma0);
    cplx va = outer_solution(ts[0], zs[0], eps, sols.front(), p);
    cplx vb = outer_solution(ts[0], zs[0], eps, sols.back(), p);
    double naive = std::log(std::abs((vb - va) / sg) + 1e-300);
    if (naive > best + 0.1 * std::max(1.0, std::abs(best)) + 1.0)
      throw std::runtime_error(
          "outer_cocycle_log: naive subtraction disagrees with decomposition");
  }
  return best;
}

FlatnessFit fit_flatness(const std::vector<double>& logs,
                         const std::vector<double>& eps, double order) {
  if (logs.size() != eps.size() || logs.size() < 5)
    throw std::invalid_argument("fit_flatness: need at least 5 matched points");
  std::vector<std::size_t> idx(eps.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return eps[a] > eps[b]; });
  FlatnessFit fit;
  fit.order_tested = order;
  std::vector<double> x, y;
  for (std::size_t k : idx) {
    if (!(eps[k] > 0.0) || !std::isfinite(logs[k]))
      throw std::invalid_argument("fit_flatness: bad sample");
    fit.eps_points.push_back(eps[k]);
    fit.log_theta.push_back(logs[k]);
    x.push_back(std::exp(-order * std::log(eps[k])));  // 1/eps^order
    y.push_back(logs[k]);
  }
  double n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0))
    throw std::runtime_error("fit_flatness: degenerate design matrix");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssres = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ssres += e * e;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ssres / syy : 1.0;
  return fit;
}

std::vector<double> flatness_ladder(double A_pred, double k, double eps0,
                                    int n_points) {
  if (!(A_pred > 0.0) || !(k > 0.0) || !(eps0 > 0.0) || n_points < 5)
    throw std::invalid_argument("flatness_ladder: bad arguments");
  double bottom = std::pow(A_pred / 550.0, 1.0 / k);
  double top = std::min(10.0 * bottom, 0.9 * eps0);
  if (!(bottom < top)) bottom = top / 2.0;
  std::vector<double> out(n_points);
  double ratio = std::pow(bottom / top, 1.0 / (n_points - 1));
  double v = top;
  for (int i = 0; i < n_points; ++i) {
    out[i] = v;
    v *= ratio;
  }
  return out;
}

std::string gevrey_report(const std::vector<FlatnessFit>& inner_fits,
                          const std::vector<FlatnessFit>& outer_fits,
                          const ScaleParams& p) {
  using nlohmann::json;
  auto summarize = [](const std::vector<FlatnessFit>& fits, double expected) {
    json j;
    j["orders"] = json::array();
    j["r2"] = json::array();
    double best_r2 = -1.0, best_order = 0.0;
    for (const auto& f : fits) {
      j["orders"].push_back(f.order_tested);
      j["r2"].push_back(f.r2);
      if (f.r2 > best_r2) {
        best_r2 = f.r2;
        best_order = f.order_tested;
      }
    }
    j["best_order"] = best_order;
    j["best_r2"] = best_r2;
    j["expected_order"] = expected;
    j["match"] = std::abs(best_order - expected) < 1e-9;
    return j;
  };
  nlohmann::json j;
  j["inner"] = summarize(inner_fits, (p.chi * Rational(p.kappa)).value());
  j["outer"] = summarize(outer_fits, p.gamma.value());
  j["orders_distinct"] =
      std::abs((p.chi * Rational(p.kappa)).value() - p.gamma.value()) > 1e-12;
  j["asymptotic_class"] = "C * M^n * Gamma(1 + n/order) * |eps|^n";
  return j.dump(2);
}

SymbolEval inner_symbol_eval(const FixedPointResult& fp, cplx eps,
                             const ScaleParams& p, double delta1) {
  return [fp, eps, p, delta1](cplx t, cplx z, const Polynomial& S) -> cplx {
    const RayGrid2D& w = fp.solution;
    cplx T = cpow(eps, p.alpha) * t;
    SampledLine line = SampledLine::zeros(w.m_max, w.n_m);
    RayFunction ray;
    ray.direction = w.direction;
    ray.r_grid = w.r_grid;
    ray.values.resize(w.r_grid.size());
    for (int j = 0; j < w.n_m; ++j) {
      for (std::size_t i = 0; i < w.r_grid.size(); ++i)
        ray.values[i] = w.values[i][j];
      line.values[j] =
          S(cplx(0.0, w.m_at(j))) * mk_laplace(ray, T, p.kappa, delta1);
    }
    return cpow(eps, Rational(-p.m0)) * inverse_fourier(line, z);
  };
}

SymbolEval outer_symbol_eval(const FixedPointResult& fp, cplx eps,
                             const ScaleParams& p, double delta1) {
  return [fp, eps, p, delta1](cplx t, cplx z, const Polynomial& S) -> cplx {
    const OuterGrid2D& w = fp.solution;
    cplx T = t / cpow(eps, p.gamma);
    SampledLine line = SampledLine::zeros(w.m_max, w.n_m);
    RayFunction ray;
    ray.direction = w.direction;
    ray.r_grid = w.r_grid;
    ray.values.resize(w.r_grid.size());
    for (int j = 0; j < w.n_m; ++j) {
      for (std::size_t i = 0; i < w.r_grid.size(); ++i)
        ray.values[i] = w.values[i][j];
      line.values[j] =
          S(cplx(0.0, w.m_at(j))) * classical_laplace(ray, T, delta1);
    }
    return cpow(eps, p.gamma0) * inverse_fourier(line, z);
  };
}

double pde_residual(const SymbolEval& u, cplx t, cplx z, cplx eps,
                    const EquationSpec& spec, const ScaleParams& p, int n_m) {
  // Central 5-point stencils for d^0..d^4; derivatives divide by h^order.
  static const double st[5][5] = {
      {0.0, 0.0, 1.0, 0.0, 0.0},
      {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12},
      {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12},
      {-0.5, 1.0, 0.0, -1.0, 0.5},
      {1.0, -4.0, 6.0, -4.0, 1.0}};

  cplx lin = eval_P(t, eps, spec) * u(t, z, spec.Qpoly);

  cplx ct(0.0);
  for (int l = 0; l <= spec.M; ++l)
    ct += spec.c[l] * cpow(eps, Rational(spec.mu_exp[l])) *
          std::pow(t, spec.h_exp[l]);
  cplx nl = ct * u(t, z, spec.Q1poly) * u(t, z, spec.Q2poly);

  cplx rb(0.0);
  double m_max = 20.0 / p.beta;
  for (int j = 0; j <= spec.Qcount; ++j) {
    SampledLine bj = materialize_profile(spec.Bj[j], p.beta, p.mu, m_max, n_m);
    rb += cpow(eps, Rational(spec.n_exp[j])) * std::pow(t, spec.b_exp[j]) *
          inverse_fourier(bj, z);
  }

  cplx rF = forcing_F_direct(t, z, eps, spec, p, 0.5, n_m);

  cplx rR(0.0);
  // Step proportional to |t| so the shifted points stay inside the Laplace
  // cone even in the inner regime where |t| is itself a high power of |eps|.
  double h = 1e-3 * std::abs(t);
  if (h == 0.0) h = 1e-9;
  for (int l = 0; l < spec.D; ++l) {
    int delta = spec.delta_exp[l];
    if (delta > 4) throw std::invalid_argument("pde_residual: delta > 4");
    cplx der(0.0);
    for (int k = 0; k < 5; ++k) {
      if (st[delta][k] == 0.0) continue;
      der += st[delta][k] * u(t + double(k - 2) * h, z, spec.Rpoly[l]);
    }
    der /= std::pow(h, delta);
    rR += cpow(eps, Rational(spec.Delta[l])) * std::pow(t, spec.d_exp[l]) * der;
  }

  cplx lhs = lin + nl, rhs = rb + rF + rR;
  double scale = std::max({std::abs(lin), std::abs(nl), std::abs(rb),
                           std::abs(rF), std::abs(rR), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace bltk

