#include "lmfmm/contour.hpp"

#include <algorithm>

namespace lmfmm {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  // Newton iteration from the Chebyshev initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    double ww = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = ww;
    w[n - 1 - i] = ww;
  }
}

ContourQuadrature build_contour(double b, double t_max, int panels, int quad_order) {
  if (!(b > 0.0)) throw std::invalid_argument("build_contour: b must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("build_contour: t_max must be positive");
  if (panels < 1 || quad_order < 2)
    throw std::invalid_argument("build_contour: need panels >= 1, quad_order >= 2");
  std::vector<double> xg, wg;
  gauss_legendre(quad_order, xg, wg);

  ContourQuadrature q;
  q.b = b;
  q.t_max = t_max;
  q.panels = panels;
  q.points_per_panel = quad_order;
  q.nodes.reserve(std::size_t(quad_order) * (panels + 1));
  q.weights.reserve(q.nodes.capacity());

  // vertical segment: k_rho = -i s, s from 0 to b; dk_rho = -i ds
  {
    double mid = 0.5 * b, half = 0.5 * b;
    for (int i = 0; i < quad_order; ++i) {
      q.nodes.push_back(-iu * (mid + half * xg[i]));
      q.weights.push_back(-iu * (half * wg[i]));
    }
  }
  // horizontal segment: k_rho = t - i b, t from 0 to t_max
  double dt = t_max / panels;
  for (int pnl = 0; pnl < panels; ++pnl) {
    double mid = (pnl + 0.5) * dt, half = 0.5 * dt;
    for (int i = 0; i < quad_order; ++i) {
      q.nodes.push_back(cplx(mid + half * xg[i], -b));
      q.weights.push_back(cplx(half * wg[i], 0.0));
    }
  }
  return q;
}

std::size_t ContourQuadrature::cutoff_index(double t) const {
  if (t >= t_max) return nodes.size();
  std::size_t lo = points_per_panel;  // vertical segment is always kept
  auto it = std::lower_bound(nodes.begin() + lo, nodes.end(), t,
                             [](const cplx& n, double v) { return n.real() <= v; });
  return std::size_t(it - nodes.begin());
}

ContourQuadrature default_contour(double min_wavenumber, double t_max, int panels,
                                  int quad_order) {
  return build_contour(0.4 * min_wavenumber, t_max, panels, quad_order);
}

}  // namespace lmfmm
