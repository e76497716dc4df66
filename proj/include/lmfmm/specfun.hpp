// Special functions: spherical Bessel/Hankel, cylindrical Bessel of complex
// argument, normalized associated Legendre functions extended to the complex
// plane with a cut on [-1, 1], spherical harmonics and Gaunt coefficients.
#pragma once

#include <span>

#include "lmfmm/core.hpp"

namespace lmfmm {

// j_0..j_{n_max}(x), x >= 0. j_n(0) = delta_{n0}.
std::vector<double> spherical_bessel_j(int n_max, double x);

// y_0..y_{n_max}(x), x > 0.
std::vector<double> spherical_bessel_y(int n_max, double x);

// h^(1)_0..h^(1)_{n_max}(x) = j_n + i y_n, x > 0, upward recurrence.
std::vector<cplx> spherical_hankel1(int n_max, double x);

// J_0..J_{n_max}(z) for complex z with Re z >= 0 (contour arguments).
void cyl_bessel_j_seq(int n_max, cplx z, cplx* out);
cplx cyl_bessel_j(int order, cplx z);

// The single branch of sqrt(1 - z^2) defined by cutting [-1, 1]:
// -i sqrt(r1 r2) e^{i(th1+th2)/2} with z+1 = r1 e^{i th1}, z-1 = r2 e^{i th2}
// (principal arguments). For real x in (-1, 1) this is +sqrt(1-x^2).
cplx sqrt_one_minus_z2(cplx z);

// Normalized associated Legendre triangle on the branch above.
// Base value 1/sqrt(4 pi); negative m filled via (-1)^m symmetry.
ComplexTriangle legendre_normalized_complex(int n_max, cplx z);

// Y_n^m(theta, phi) = Phat_n^m(cos theta) e^{i m phi}.
ComplexTriangle spherical_harmonics(int n_max, double theta, double phi);

// Real normalized Legendre values Phat_n^m(x) for x in [-1, 1], m >= 0,
// plus negative m; used on its own for harmonics of many points.
TriangularArray<double> legendre_normalized_real(int n_max, double x);

// Wigner 3j symbol (integer angular momenta).
double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);

// Gaunt coefficient G(n,m; nu,mu; q); zero outside the selection rules.
double gaunt(int n, int m, int nu, int mu, int q);

// Precomputed Gaunt values G(n,m; nu,-mu; q) as used by the separation
// matrices, for all n,nu <= p and admissible q <= 2p.
class GauntTable {
 public:
  GauntTable() = default;
  explicit GauntTable(int p);
  int order_max() const { return p_; }
  // q must satisfy the selection rules (parity included); returns 0 otherwise.
  double coupling(int n, int m, int nu, int mu, int q) const;

 private:
  int p_ = -1;
  std::vector<double> v_;
  std::size_t idx(int n, int m, int nu, int mu, int q) const;
};

}  // namespace lmfmm
