// Contour-deformed evaluation of Sommerfeld-type integrals: the free-space
// identity self-test, reference evaluation of reaction components, and the
// shared quadrature pass that produces every tabulated integral value at one
// (rho, z, z') point.
#pragma once

#include "lmfmm/contour.hpp"
#include "lmfmm/layers.hpp"

namespace lmfmm {

// h_0^(1)(k |r - r'|) reconstructed from its spectral representation,
// folding the angular integral into J_0. Treats z >= z' by |z - z'|.
cplx free_green_via_sommerfeld(double k, const Vec3& r, const Vec3& rp,
                               const ContourQuadrature& quad);

// Identity h_n^(1)(k|r|) Y_n^m = spectral integral; reference for tests.
cplx wave_function_via_sommerfeld(double k, int n, int m, const Vec3& r,
                                  const ContourQuadrature& quad);

// One (component, target layer, source layer) task with per-node contour data
// precomputed. All evaluations below share these arrays.
class SommerfeldTask {
 public:
  SommerfeldTask(const LayerStack& stack, Component comp, int target_layer, int source_layer,
                 const ContourQuadrature& quad);

  const LayerStack& stack() const { return *stack_; }
  Component component() const { return comp_; }
  int target_layer() const { return l_; }
  int source_layer() const { return lp_; }
  double k_target() const { return kt_; }
  double k_source() const { return ks_; }
  double separating_interface() const { return d_sep_; }
  bool up() const { return up_; }
  const ContourQuadrature& quad() const { return quad_; }

  // Vertical offsets into the decaying exponents; both must be >= 0 for a
  // convergent integral and their sum sets the tail truncation.
  double target_offset(double z) const { return up_ ? z - d_sep_ : d_sep_ - z; }
  double source_offset(double zeta) const { return up_ ? d_sep_ - zeta : zeta - d_sep_; }

  // Node subrange that matters for total decay h = a + b (0 disables tails).
  std::size_t effective_nodes(double h) const;
  void set_tail_coefficient(double c) { tail_coeff_ = c; }

  // Reaction kernel in polarization coordinates:
  //   u~(r, r_s) = (i/4pi) Int k J0(k_rho |rho - rho_s|) Zt Zs sigma / k_{lz}.
  cplx kernel(double rho, double z, double zeta, bool truncate = true) const;

  // Arbitrary-order expansion-function triangle F_nm(r, c) and local
  // coefficient triangle L_nm(c_t, r_s) by direct quadrature (the normalized
  // Legendre factors evaluated on the contour). Reference paths; n_max may
  // exceed the table truncation.
  ComplexTriangle me_basis_direct(int n_max, const Vec3& r, const Vec3& center) const;
  ComplexTriangle le_coeffs_direct(int n_max, const Vec3& target_center, const Vec3& src) const;

  // Pointwise integrand of the tabulated integrals at one contour node.
  cplx table_integrand(int n_bessel, int m_power, int mu, int nu, double rho, double z,
                       double zeta, cplx k_rho) const;

  // One shared pass evaluating the tabulated integral for every requested
  // (n_bessel, m_power, mu, nu) at a single geometry point.
  struct IndexQuad {
    int n_bessel, m_power, mu, nu;
  };
  void s_values(const std::vector<IndexQuad>& idx, double rho, double z, double zeta, cplx* out,
                bool truncate = true) const;

  // Azimuthal prefactors fixed by the end-to-end identities (see tests):
  // source-side plane-wave factor for the ME and the parity flip applied to
  // down-going targets in LE / M2L assembly.
  cplx me_prefactor(int n, int m) const;
  cplx le_prefactor(int n, int m) const;
  cplx m2l_prefactor(int tn, int tm, int sn, int sm) const;
  double down_flip(int n, int m) const { return up_ ? 1.0 : parity(n + m); }

 private:
  const LayerStack* stack_;
  Component comp_;
  int l_, lp_;
  double kt_, ks_;
  double d_sep_;
  bool up_;
  ContourQuadrature quad_;
  std::vector<cplx> sigma_, kz_t_, kz_s_, base_;
  double tail_coeff_ = 45.0;
};

// Reaction component u**(r, r') by direct quadrature with the original
// source coordinate (the polarization-mapped evaluation is algebraically
// identical; both paths exist for the equivalence test).
cplx reaction_component_direct(const SommerfeldTask& task, const Vec3& r, const Vec3& rp,
                               bool truncate = true);

// Equivalent polarization source location for (comp, l, lp).
Vec3 polarization_map(const LayerStack& stack, Component comp, int l, int lp, const Vec3& rp);

}  // namespace lmfmm
