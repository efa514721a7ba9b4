#include "bltk/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bltk {

namespace {

double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

int parity(std::size_t p) { return (p % 2 == 0) ? 1 : -1; }

}  // namespace

bool Sector::contains(cplx z) const {
  double r = std::abs(z);
  if (!(r > r_min && r < r_max)) return false;
  return std::abs(wrap_pi(std::arg(z) - bisector)) < aperture / 2.0;
}

GoodCovering build_covering(int count, double aperture_target, double eps0) {
  if (count < 2) throw std::domain_error("build_covering: count must be >= 2");
  if (!(eps0 > 0.0) || !(aperture_target > 0.0))
    throw std::domain_error("build_covering: positive eps0 and aperture required");
  double step = 2.0 * M_PI / count;
  double base = std::max(aperture_target, step);
  if (base >= 2.0 * step)
    throw std::domain_error(
        "build_covering: aperture target forces triple intersections");
  double xi = std::min(0.1 * aperture_target, 0.5 * (2.0 * step - base));
  double aperture = base + xi;

  GoodCovering cov;
  cov.aperture_target = aperture_target;
  cov.eps0 = eps0;
  for (int p = 0; p < count; ++p)
    cov.sectors.push_back({step * p, aperture, 0.0, eps0});

  // Mesh verification of the covering invariants.
  const int N = 10000;
  std::vector<bool> pair_overlap(count, false);
  for (int i = 0; i < N; ++i) {
    double th = 2.0 * M_PI * i / N;
    int hits = 0;
    int first = -1, second = -1;
    for (int p = 0; p < count; ++p) {
      if (std::abs(wrap_pi(th - cov.sectors[p].bisector)) < aperture / 2.0) {
        ++hits;
        (first < 0 ? first : second) = p;
      }
    }
    if (hits == 0)
      throw std::domain_error("build_covering: union gap on the angular mesh");
    if (hits > 2)
      throw std::domain_error("build_covering: triple intersection on the mesh");
    if (hits == 2) {
      int lo = std::min(first, second), hi = std::max(first, second);
      if (hi - lo == 1) pair_overlap[lo] = true;
      if (lo == 0 && hi == count - 1) pair_overlap[count - 1] = true;
    }
  }
  for (int p = 0; p < count; ++p)
    if (!pair_overlap[p])
      throw std::domain_error("build_covering: a consecutive overlap is empty");
  return cov;
}

AssociatedFamily associate_inner(const GoodCovering& cov, const EquationSpec& spec,
                                 const ScaleParams& p, double rho_X, double x_abs) {
  if (!(p.alpha < p.chi))
    throw std::runtime_error("associate_inner: requires alpha < chi");
  AssociatedFamily fam;
  fam.covering = cov;
  fam.theta = M_PI / p.kappa + 0.2;
  fam.delta1 = 0.5;
  fam.delta2 = fam.delta1 / 2.0;
  fam.rho_X = rho_X;
  const double chi = p.chi.value();
  const int kappa = p.kappa;
  fam.select = [chi, kappa](std::size_t pp, cplx eps, cplx x) -> double {
    return std::arg(x) + chi * std::arg(eps) + parity(pp) * 0.3 / kappa;
  };

  // Admissibility: 0.5 degree scan, first passing direction wins.  The scan is
  // shared across sectors since the symbol roots do not depend on p.  The
  // Borel-plane sector only needs to cover the selector's parity spread
  // (+-0.3/kappa) around the ray, not the T-plane opening fam.theta.
  const double adm_ap = 0.7 / p.kappa + 0.1;
  double adm_dir = 0.0;
  bool found = false;
  for (int step = 0; step < 720 && !found; ++step) {
    double cand = step * (M_PI / 360.0);
    auto rep = sector_admissibility(cand, adm_ap, p.rho, spec, p,
                                    1.0, 4.0 * rho_X);
    if (rep.pass) {
      adm_dir = cand;
      found = true;
    }
  }
  if (!found)
    throw std::runtime_error(
        "associate_inner: no admissible direction in 720 candidates");
  fam.adm_direction = adm_dir;
  fam.adm_aperture = adm_ap;

  // Item-3 mesh validation: over each sector's angular mesh and a mesh of X,
  // the selected ray stays within theta/2 of arg(eps^alpha t) and the radius
  // identity |eps^alpha t| = |x| |eps|^chi <= rho_X |eps|^chi holds.
  const double x_ap = 0.2;  // aperture of X about the positive axis
  for (std::size_t pp = 0; pp < cov.sectors.size(); ++pp) {
    const Sector& S = cov.sectors[pp];
    for (int ie = 0; ie <= 8; ++ie) {
      double th = S.bisector + S.aperture * (ie / 8.0 - 0.5) * 0.999;
      cplx eps = 0.5 * cov.eps0 * std::exp(cplx(0.0, th));
      for (int ix = 0; ix <= 4; ++ix) {
        double xa = x_ap * (ix / 4.0 - 0.5);
        cplx x = x_abs * std::exp(cplx(0.0, xa));
        double argT = std::arg(x) + chi * th;
        double d = fam.select(pp, eps, x);
        if (std::abs(wrap_pi(d - argT)) > fam.theta / 2.0)
          throw std::runtime_error("associate_inner: selector left the sector");
        if (!(std::abs(x) <= rho_X))
          throw std::runtime_error("associate_inner: spatial radius exceeded");
      }
    }
    cplx eps_b = 0.5 * cov.eps0 * std::exp(cplx(0.0, S.bisector));
    fam.directions.push_back(fam.select(pp, eps_b, cplx(x_abs, 0.0)));
  }
  return fam;
}

AssociatedFamily associate_outer(const GoodCovering& cov, const EquationSpec& spec,
                                 const ScaleParams& p, double Delta_nu,
                                 double t_probe_min, double t_probe_max,
                                 double delta1_inf) {
  double nu_out = p.nu_outer_effective();
  if (!(Delta_nu > nu_out / delta1_inf))
    throw std::runtime_error(
        "associate_outer: Delta_nu must exceed nu/delta1_inf");
  if (!(delta1_inf < std::cos(0.3)))
    throw std::runtime_error(
        "associate_outer: delta1_inf unreachable by the selector margin");
  AssociatedFamily fam;
  fam.covering = cov;
  fam.delta1 = delta1_inf;
  fam.delta2 = delta1_inf / 2.0;
  fam.Delta_nu = Delta_nu;
  fam.alpha_inf = -0.4;
  fam.beta_inf = 0.4;
  const double gamma = p.gamma.value();
  fam.select = [gamma](std::size_t j, cplx eps, cplx t) -> double {
    return -std::arg(t / std::pow(eps, gamma)) + parity(j) * 0.3;
  };

  auto f2_roots = spec.forcing.F2.degree() > 0 ? spec.forcing.F2.roots()
                                               : std::vector<cplx>{};
  const double u_ap = 0.6;  // candidate sector aperture
  for (std::size_t j = 0; j < cov.sectors.size(); ++j) {
    const Sector& S = cov.sectors[j];
    bool ok = false;
    std::ostringstream blockers;
    for (int step = 0; step < 720 && !ok; ++step) {
      // 0.5 degree scan of (-pi/2, pi/2), alternating around 0.
      double cand = ((step + 1) / 2) * (M_PI / 360.0) * (step % 2 ? -1.0 : 1.0);
      if (std::abs(cand) >= M_PI / 2.0) continue;
      bool blocked = false;
      for (const auto& r : f2_roots) {
        if (std::abs(wrap_pi(std::arg(r) - cand)) < u_ap / 2.0) {
          blocked = true;
          blockers << " " << r;
          break;
        }
      }
      if (blocked) continue;
      // Cosine validation on a sector x probe mesh.
      bool valid = true;
      for (int ie = 0; ie <= 8 && valid; ++ie) {
        double th = S.bisector + S.aperture * (ie / 8.0 - 0.5) * 0.999;
        cplx eps = 0.5 * cov.eps0 * std::exp(cplx(0.0, th));
        for (int it = 0; it <= 4 && valid; ++it) {
          double ta = fam.alpha_inf + (fam.beta_inf - fam.alpha_inf) * it / 4.0;
          double tr = t_probe_min + (t_probe_max - t_probe_min) * it / 4.0;
          cplx t = tr * std::exp(cplx(0.0, ta));
          double u = fam.select(j, eps, t);
          if (std::cos(u + std::arg(t / std::pow(eps, gamma))) < delta1_inf)
            valid = false;
        }
      }
      if (valid) {
        fam.directions.push_back(cand);
        ok = true;
      }
    }
    if (!ok)
      throw std::runtime_error("associate_outer: every candidate blocked;" +
                               (blockers.str().empty() ? std::string(" cosine bound unreachable")
                                                       : " roots:" + blockers.str()));
  }
  return fam;
}

ScalingGap scaling_gap(const ScaleParams& p, double rho_X, double Delta_nu) {
  Rational m = (p.chi - p.alpha) - (p.gamma - p.Gamma);
  ScalingGap g;
  g.margin = m.value();
  if (!(g.margin > 0.0))
    throw std::domain_error(
        "scaling_gap: (chi-alpha)-(gamma-Gamma) must be positive");
  g.eps_threshold = std::pow(Delta_nu / rho_X, 1.0 / g.margin);
  return g;
}

bool time_domains_disjoint(const ScaleParams& p, double rho_X, double Delta_nu,
                           cplx eps) {
  double ae = std::abs(eps);
  return rho_X * std::pow(ae, (p.chi - p.alpha).value()) <
         Delta_nu * std::pow(ae, (p.gamma - p.Gamma).value());
}

}  // namespace bltk
