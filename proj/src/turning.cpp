#include "bltk/turning.hpp"

#include <cmath>
#include <stdexcept>

namespace bltk {

namespace {

cplx ipow(cplx b, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

std::vector<cplx> roots_P(cplx eps, const EquationSpec& s) {
  if (std::abs(eps) == 0.0) throw std::invalid_argument("roots_P: eps must be nonzero");
  int deg = s.k_exp.back();
  std::vector<cplx> c(deg + 1, cplx(0.0, 0.0));
  c[0] = s.a[0] * ipow(eps, s.m_exp[0]);
  for (int l = 1; l <= s.q; ++l) c[s.k_exp[l - 1]] += s.a[l] * ipow(eps, s.m_exp[l]);
  if (std::abs(c[deg]) == 0.0)
    throw std::domain_error("roots_P: degenerate pencil (leading coefficient vanished)");
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  Polynomial P(c);
  auto roots = P.roots();
  for (const auto& r : roots)
    if (std::abs(P(r)) > 1e-10 * scale * std::max(1.0, std::pow(std::abs(r), deg)))
      throw std::runtime_error("roots_P: residual too large after polishing");
  return roots;
}

double merging_exponent(const EquationSpec& s, const std::vector<double>& eps_seq) {
  if (eps_seq.size() < 4)
    throw std::invalid_argument("merging_exponent: need at least 4 eps values");
  for (std::size_t i = 1; i < eps_seq.size(); ++i)
    if (!(eps_seq[i] < eps_seq[i - 1]))
      throw std::invalid_argument("merging_exponent: eps_seq must decrease");
  std::vector<double> xs, ys;
  for (double e : eps_seq) {
    auto roots = roots_P(cplx(e, 0.0), s);
    double mn = std::abs(roots[0]);
    for (const auto& r : roots) mn = std::min(mn, std::abs(r));
    xs.push_back(std::log(e));
    ys.push_back(std::log(mn));
  }
  double n = xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::pair<double, double> rouche_mu_window(const EquationSpec& s) {
  for (int j1 = 1; j1 <= s.q; ++j1) {
    double lo = 0.0, hi = double(s.m_exp[0] - s.m_exp[j1]) / s.k_exp[j1 - 1];
    for (int l = 1; l <= s.q; ++l) {
      if (l == j1) continue;
      int dk = s.k_exp[l - 1] - s.k_exp[j1 - 1];
      double bound = double(s.m_exp[j1] - s.m_exp[l]) / dk;
      if (dk > 0)
        lo = std::max(lo, bound);
      else
        hi = std::min(hi, -bound);
    }
    if (lo < hi) return {lo, hi};
  }
  throw std::domain_error("rouche_mu_window: no admissible exponent window");
}

int rouche_count(cplx eps, double mu, const EquationSpec& s) {
  auto win = rouche_mu_window(s);
  if (!(mu > win.first && mu < win.second))
    throw std::domain_error("rouche_count: mu outside the admissible window");
  double R = std::pow(std::abs(eps), mu);
  const int N = 4096;
  double winding = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= N; ++i) {
    double th = 2.0 * M_PI * i / N;
    cplx t = R * std::exp(cplx(0.0, th));
    cplx v = eval_P(t, eps, s);
    double ph = std::arg(v);
    if (have_prev) {
      double d = ph - prev;
      while (d > M_PI) d -= 2.0 * M_PI;
      while (d < -M_PI) d += 2.0 * M_PI;
      winding += d;
    }
    prev = ph;
    have_prev = true;
  }
  double count = winding / (2.0 * M_PI);
  int rounded = (int)std::lround(count);
  if (std::abs(count - rounded) > 0.2)
    throw std::runtime_error("rouche_count: winding integral too far from an integer");
  return rounded;
}

cplx eval_P_m(cplx tau, double m, const EquationSpec& s, const ScaleParams& p) {
  cplx im(0.0, m);
  double kd = std::pow(double(p.kappa), s.deltaD());
  return s.Qpoly(im) * s.a[0] - s.RD()(im) * kd * ipow(tau, s.deltaD() * p.kappa);
}

std::vector<cplx> q_roots(double m, const EquationSpec& s, const ScaleParams& p) {
  cplx im(0.0, m);
  cplx Q = s.Qpoly(im), RD = s.RD()(im);
  if (std::abs(Q) < 1e-14 || std::abs(RD) < 1e-14)
    throw std::domain_error("q_roots: singular symbol at this frequency");
  int n = s.deltaD() * p.kappa;
  double kd = std::pow(double(p.kappa), s.deltaD());
  cplx ratio = s.a[0] * Q / (RD * kd);
  double rad = std::pow(std::abs(ratio), 1.0 / n);
  double base = std::arg(ratio) / n;
  std::vector<cplx> out(n);
  for (int l = 0; l < n; ++l)
    out[l] = rad * std::exp(cplx(0.0, base + 2.0 * M_PI * l / n));
  double scale = std::abs(s.a[0] * Q) + std::abs(RD) * kd * std::pow(rad, n);
  for (const auto& r : out)
    if (std::abs(eval_P_m(r, m, s, p)) > 1e-8 * scale)
      throw std::runtime_error("q_roots: factorization residual too large");
  return out;
}

AdmissibilityReport sector_admissibility(double direction, double aperture,
                                         double rho, const EquationSpec& s,
                                         const ScaleParams& p, double r_QRD,
                                         double r_cap) {
  if (!(aperture > 0.0)) throw std::invalid_argument("sector_admissibility: aperture");
  AdmissibilityReport rep;
  rep.r_QRD = r_QRD;
  const int deltaDk = s.deltaD() * p.kappa;

  // Frequency samples and their symbol roots.
  double m_max = 20.0 / p.beta;
  std::vector<double> ms;
  for (int i = -64; i <= 64; ++i) ms.push_back(m_max * i / 64.0);
  double q_max = 0.0;
  std::vector<std::vector<cplx>> roots;
  for (double m : ms) {
    roots.push_back(q_roots(m, s, p));
    for (const auto& r : roots.back()) q_max = std::max(q_max, std::abs(r));
  }
  if (r_cap <= 0.0) r_cap = 4.0 * q_max;

  // Tau samples: disc mesh plus sector mesh (boundary rays included).
  std::vector<cplx> taus;
  for (int ia = 0; ia < 64; ++ia) {
    double th = 2.0 * M_PI * ia / 64.0;
    for (int ir = 1; ir <= 8; ++ir)
      taus.push_back(rho * ir / 8.0 * std::exp(cplx(0.0, th)));
  }
  for (int ia = 0; ia <= 16; ++ia) {
    double th = direction - aperture / 2.0 + aperture * ia / 16.0;
    for (int ir = 0; ir < 64; ++ir) {
      double r = rho + (r_cap - rho) * std::pow(double(ir) / 63.0, 2.0);
      taus.push_back(r * std::exp(cplx(0.0, th)));
    }
  }

  // Hard fail if any symbol root lies inside the sampled sector or disc.
  auto in_sector = [&](cplx v) {
    double d = std::arg(v) - direction;
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    return (std::abs(v) <= rho) ||
           (std::abs(d) <= aperture / 2.0 && std::abs(v) <= r_cap);
  };
  for (std::size_t im = 0; im < ms.size(); ++im)
    for (const auto& r : roots[im])
      if (in_sector(r)) {
        rep.pass = false;
        rep.worst_tau = r;
        rep.worst_m = ms[im];
        return rep;
      }

  double M1 = 1e300;
  std::vector<double> M2_per_l(deltaDk, 1e300);
  for (std::size_t im = 0; im < ms.size(); ++im) {
    for (const auto& tau : taus) {
      for (int l = 0; l < deltaDk; ++l) {
        double d = std::abs(tau - roots[im][l]);
        double v1 = d / (1.0 + std::abs(tau));
        if (v1 < M1) {
          M1 = v1;
          rep.worst_tau = tau;
          rep.worst_m = ms[im];
        }
        M2_per_l[l] = std::min(M2_per_l[l], d / std::abs(roots[im][l]));
      }
    }
  }
  rep.M1 = M1;
  rep.M2 = 0.0;
  for (int l = 0; l < deltaDk; ++l)
    if (M2_per_l[l] > rep.M2) {
      rep.M2 = M2_per_l[l];
      rep.l0 = l;
    }

  // 1-D minimization of (1+x)^(deltaD*kappa-1) / (1+x^kappa)^(deltaD-1/kappa).
  double mn = 1e300;
  for (int i = 0; i <= 4000; ++i) {
    double x = std::pow(10.0, -3.0 + 6.0 * i / 4000.0);
    double v = std::pow(1.0 + x, deltaDk - 1) /
               std::pow(1.0 + std::pow(x, p.kappa), s.deltaD() - 1.0 / p.kappa);
    mn = std::min(mn, v);
  }
  mn = std::min(mn, 1.0);  // x = 0 endpoint
  double kd = std::pow(double(p.kappa), s.deltaD());
  rep.CP = std::pow(rep.M1, deltaDk - 1) * rep.M2 * kd *
           std::pow(std::abs(s.a[0]) / kd, 1.0 / deltaDk) * mn;
  rep.pass = rep.M1 > 1e-3 && rep.M2 > 1e-3 && rep.CP > 0.0;
  return rep;
}

}  // namespace bltk
