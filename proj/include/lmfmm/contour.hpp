// Deformed-contour quadrature in the complex k_rho plane. The path starts at
// the origin, descends to -i b and continues to t_max - i b, staying below the
// real axis where the surface-wave poles sit.
#pragma once

#include "lmfmm/core.hpp"

namespace lmfmm {

struct ContourQuadrature {
  double b = 0.0;       // descent depth
  double t_max = 0.0;   // truncation of the horizontal segment
  int panels = 0;       // horizontal panels
  int points_per_panel = 0;
  std::vector<cplx> nodes;    // k_rho values; vertical segment first, then
                              // horizontal in increasing Re k_rho
  std::vector<cplx> weights;  // include the complex path derivative

  std::size_t size() const { return nodes.size(); }

  // Index of the first node with Re k_rho > t (nodes are Re-sorted on the
  // horizontal segment); used for per-evaluation tail truncation.
  std::size_t cutoff_index(double t) const;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

ContourQuadrature build_contour(double b, double t_max, int panels, int quad_order);

// Contour parameters tied to a layer configuration: descent depth 0.4 times
// the smallest wavenumber keeps clear of the surface-wave poles while
// limiting Bessel growth along the horizontal segment.
ContourQuadrature default_contour(double min_wavenumber, double t_max = 100.0, int panels = 51,
                                  int quad_order = 30);

}  // namespace lmfmm
