#include "bltk/quad.hpp"

#include <map>

namespace bltk {

namespace {

GaussRule make_rule(int order) {
  GaussRule g;
  g.x.resize(order);
  g.w.resize(order);
  for (int i = 0; i < order; ++i) {
    // Initial guess (Chebyshev-like), then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = order * (x * p1 - p0) / (x * x - 1.0);
    g.x[i] = x;
    g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::map<int, GaussRule> cache;
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
  return it->second;
}

std::vector<double> geometric_grid(double R, int n_nodes, double r1_frac) {
  if (!(R > 0.0) || n_nodes < 3) throw std::invalid_argument("geometric_grid");
  std::vector<double> r;
  r.reserve(n_nodes + 1);
  r.push_back(0.0);
  double r1 = r1_frac * R;
  double ratio = std::pow(R / r1, 1.0 / (n_nodes - 1));
  double v = r1;
  for (int i = 0; i < n_nodes; ++i) {
    r.push_back(i + 1 == n_nodes ? R : v);
    v *= ratio;
  }
  return r;
}

CubicLine::CubicLine(std::vector<double> x, std::vector<cplx> y)
    : x_(std::move(x)), y_(std::move(y)) {
  std::size_t n = x_.size();
  if (n != y_.size() || n < 2) throw std::invalid_argument("CubicLine size");
  d_.resize(n);
  auto slopes = [&](std::size_t i) { return (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]); };
  auto pchip_axis = [&](auto get) {
    // Classic PCHIP slope limiting, applied per real component.
    std::vector<double> m(n - 1), d(n);
    for (std::size_t i = 0; i + 1 < n; ++i) m[i] = get(slopes(i));
    d[0] = m[0];
    d[n - 1] = m[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (m[i - 1] * m[i] <= 0.0) {
        d[i] = 0.0;
      } else {
        double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
        d[i] = (w0 + w1) / (w0 / m[i - 1] + w1 / m[i]);
      }
    }
    // Endpoint slope guards (Fritsch-Carlson style).
    if (n >= 3) {
      double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
      double d0 = ((2.0 * h0 + h1) * m[0] - h0 * m[1]) / (h0 + h1);
      if (d0 * m[0] <= 0.0) d0 = 0.0;
      else if (m[0] * m[1] <= 0.0 && std::abs(d0) > 3.0 * std::abs(m[0])) d0 = 3.0 * m[0];
      d[0] = d0;
      double hk = x_[n - 1] - x_[n - 2], hk1 = x_[n - 2] - x_[n - 3];
      double dn = ((2.0 * hk + hk1) * m[n - 2] - hk * m[n - 3]) / (hk + hk1);
      if (dn * m[n - 2] <= 0.0) dn = 0.0;
      else if (m[n - 2] * m[n - 3] <= 0.0 && std::abs(dn) > 3.0 * std::abs(m[n - 2]))
        dn = 3.0 * m[n - 2];
      d[n - 1] = dn;
    }
    return d;
  };
  auto dre = pchip_axis([](cplx s) { return s.real(); });
  auto dim = pchip_axis([](cplx s) { return s.imag(); });
  for (std::size_t i = 0; i < n; ++i) d_[i] = cplx(dre[i], dim[i]);
}

cplx CubicLine::operator()(double xq) const {
  const double lo = x_.front(), hi = x_.back();
  if (xq < lo - 1e-12 * (hi - lo) || xq > hi + 1e-12 * (hi - lo))
    throw std::out_of_range("CubicLine evaluation outside sampled range");
  xq = std::min(std::max(xq, lo), hi);
  std::size_t i = std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin();
  if (i == 0) i = 1;
  if (i >= x_.size()) i = x_.size() - 1;
  --i;
  double h = x_[i + 1] - x_[i];
  double t = (xq - x_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

cplx integrate_samples(const std::vector<double>& x, const std::vector<cplx>& y) {
  std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("integrate_samples size");
  if (n == 2) return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
  if (n == 3) {
    // Quadratic through all three points.
    cplx acc = 0.0;
    for (int seg = 0; seg < 2; ++seg) {
      double a = x[seg], b = x[seg + 1];
      auto lag = [&](int j, double t) {
        double prod = 1.0;
        for (int k = 0; k < 3; ++k)
          if (k != j) prod *= (t - x[k]) / (x[j] - x[k]);
        return prod;
      };
      for (int j = 0; j < 3; ++j)
        acc += y[j] * gl_integrate([&](double t) { return lag(j, t); }, a, b, 1, 8);
    }
    return acc;
  }
  // Cubic through the 4 points bracketing each interval, integrated exactly
  // with a 4-node GL rule on that interval.
  cplx acc = 0.0;
  const GaussRule& g = gauss_legendre(4);
  for (std::size_t seg = 0; seg + 1 < n; ++seg) {
    std::size_t base = seg == 0 ? 0 : (seg + 2 >= n ? n - 4 : seg - 1);
    double a = x[seg], b = x[seg + 1], h = b - a, mid = 0.5 * (a + b);
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      double t = mid + 0.5 * h * g.x[q];
      cplx val = 0.0;
      for (std::size_t j = base; j < base + 4; ++j) {
        double prod = 1.0;
        for (std::size_t k = base; k < base + 4; ++k)
          if (k != j) prod *= (t - x[k]) / (x[j] - x[k]);
        val += y[j] * prod;
      }
      acc += val * (0.5 * h * g.w[q]);
    }
  }
  return acc;
}

}  // namespace bltk
