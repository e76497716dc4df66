// Precomputation, persistence and interpolation of the tabulated Sommerfeld
// integrals S_{n,m,mu nu}(rho, z, z'), plus the associated-Legendre product
// coefficients that assemble the translation integrals I from them.
#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

#include "lmfmm/sommerfeld.hpp"

namespace lmfmm {

// Coefficients of Phat_n^m(kz/k) Phat_n'^m'(kz'/k') as a polynomial in k_rho
// times (k/kz)^mu (k'/kz')^nu.
class LegendreProductCoeffs {
 public:
  LegendreProductCoeffs() = default;
  LegendreProductCoeffs(int p, double k_target, double k_source);

  int order_max() const { return p_; }
  double k_target() const { return kt_; }
  double k_source() const { return ks_; }

  // Phat_n^m(kz/k) = (k/kz)^mu * sum_s b(n,|m|,s) (k_rho/k)^{|m|+2s}, m >= 0 row
  double b_coeff(int n, int m, int s) const { return b_[bidx(n, m, s)]; }
  static int r_of(int n, int am) { return (n + am) / 2; }
  static int mu_of(int n, int am) { return (n + am) & 1; }

  // A^s including tau sign factors and the 1/k powers; s up to s_max().
  double A(int tn, int tm, int sn, int sm, int s) const;
  int s_max(int tn, int tm, int sn, int sm) const {
    return (tn - r_of(tn, std::abs(tm))) + (sn - r_of(sn, std::abs(sm)));
  }

 private:
  int p_ = -1;
  double kt_ = 0.0, ks_ = 0.0;
  std::vector<double> b_;        // b(n, m, s), m >= 0, s <= n - r
  std::vector<double> kt_pow_, ks_pow_;
  std::size_t bidx(int n, int m, int s) const;
};

// The exact set of (n_bessel, m_power, mu, nu) quadruples referenced when
// assembling I(tn,tm,sn,sm) for all tn,sn <= p.
class STableIndexSet {
 public:
  STableIndexSet() = default;
  explicit STableIndexSet(int p);

  int order_max() const { return p_; }
  const std::vector<SommerfeldTask::IndexQuad>& entries() const { return list_; }
  std::size_t count() const { return list_.size(); }
  int position(int n_bessel, int m_power, int mu, int nu) const;  // -1 if absent

 private:
  int p_ = -1;
  int nb_max_ = 0, mp_max_ = 0;
  std::vector<SommerfeldTask::IndexQuad> list_;
  std::vector<int> pos_;
  std::size_t key(int nb, int mp, int mu, int nu) const;
};

// I(tn,tm,sn,sm) from an S-value vector laid out per STableIndexSet.
cplx assemble_I(const LegendreProductCoeffs& coeffs, const STableIndexSet& idx,
                const cplx* s_values, int tn, int tm, int sn, int sm);

struct GridAxis {
  double lo = 0.0, hi = 0.0;
  int cells = 0;               // order-3 cells; points = 3*cells + 1
  int points() const { return 3 * cells + 1; }
  double step() const { return (hi - lo) / (points() - 1); }
};

// Dense 3-D complex grid for one tabulated index, cubic cell interpolation.
class Table3D {
 public:
  Table3D() = default;
  Table3D(SommerfeldTask::IndexQuad id, GridAxis rho, GridAxis z, GridAxis zp);

  const SommerfeldTask::IndexQuad& id() const { return id_; }
  const GridAxis& rho_axis() const { return rho_; }
  const GridAxis& z_axis() const { return z_; }
  const GridAxis& zp_axis() const { return zp_; }

  cplx& node(int i, int j, int k);
  cplx node(int i, int j, int k) const;
  bool contains(double rho, double z, double zp) const;
  cplx interpolate(double rho, double z, double zp) const;

  std::vector<cplx>& values() { return vals_; }
  const std::vector<cplx>& values() const { return vals_; }

 private:
  SommerfeldTask::IndexQuad id_{};
  GridAxis rho_, z_, zp_;
  std::vector<cplx> vals_;
};

// All tables of one task: the full index set for order p over one grid.
class TableSet {
 public:
  TableSet() = default;

  int order_max() const { return p_; }
  Component component() const { return comp_; }
  int target_layer() const { return l_; }
  int source_layer() const { return lp_; }
  std::uint64_t stack_digest() const { return digest_; }
  const STableIndexSet& index_set() const { return idx_; }
  const std::vector<Table3D>& tables() const { return tabs_; }

  bool contains(double rho, double z, double zp) const;
  // All S values at one point into out (size = index count).
  void interpolate_all(double rho, double z, double zp, cplx* out) const;
  cplx interpolate(int n_bessel, int m_power, int mu, int nu, double rho, double z,
                   double zp) const;

  void save(const std::string& path) const;
  static TableSet load(const std::string& path);

  friend TableSet build_tables(const SommerfeldTask& task, int p, const GridAxis& rho,
                               const GridAxis& z, const GridAxis& zp);

 private:
  int p_ = -1;
  Component comp_ = Component::UU;
  int l_ = 0, lp_ = 0;
  std::uint64_t digest_ = 0;
  STableIndexSet idx_;
  std::vector<Table3D> tabs_;
};

// Quadrature of every tabulated integral on the grid (parallel over nodes);
// a grid node is produced by the same code path as a pointwise S evaluation.
TableSet build_tables(const SommerfeldTask& task, int p, const GridAxis& rho, const GridAxis& z,
                      const GridAxis& zp);

// Provider of S-value vectors: interpolated tables where the query is
// covered, direct contour quadrature otherwise (counted).
class SValueProvider {
 public:
  SValueProvider(const SommerfeldTask& task, const STableIndexSet& idx, const TableSet* tables);

  const STableIndexSet& index_set() const { return *idx_; }
  const SommerfeldTask& task() const { return *task_; }
  void eval(double rho, double z, double zp, cplx* out) const;

  std::uint64_t fallback_count() const { return fallbacks_; }
  std::uint64_t table_count() const { return hits_; }

 private:
  const SommerfeldTask* task_;
  const STableIndexSet* idx_;
  const TableSet* tables_;  // may be null: always quadrature
  mutable std::atomic<std::uint64_t> fallbacks_{0}, hits_{0};
};

}  // namespace lmfmm
