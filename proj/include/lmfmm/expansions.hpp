// Expansion machinery: free-space multipole/local expansions with their
// center shifts and multipole-to-local translation, and the reaction-field
// counterparts built on polarization sources and tabulated integrals.
#pragma once

#include "lmfmm/specfun.hpp"
#include "lmfmm/tables.hpp"

namespace lmfmm {

enum class ExpansionKind { Multipole, Local };

struct CoeffSet {
  ExpansionKind kind = ExpansionKind::Multipole;
  Vec3 center;
  double wavenumber = 0.0;
  int p = -1;
  double radius = 0.0;  // enclosing source radius (ME) / validity radius (LE)
  ComplexTriangle coeffs;
};

struct ChargedPoint {
  Vec3 r;
  cplx q;
};

// ---- free space ----

CoeffSet p2m_free(std::span<const ChargedPoint> sources, const Vec3& center, double k, int p);
cplx eval_me_free(const CoeffSet& me, const Vec3& r);

CoeffSet p2l_free(std::span<const ChargedPoint> sources, const Vec3& center, double k, int p);
cplx eval_le_free(const CoeffSet& le, const Vec3& r);

// Separation-matrix application; the translation operators contract the
// Gaunt-coupled q-sums on the fly.
class Translator {
 public:
  Translator(int p, double k);

  CoeffSet m2m(const CoeffSet& me, const Vec3& new_center) const;
  CoeffSet l2l(const CoeffSet& le, const Vec3& new_center) const;
  CoeffSet m2l(const CoeffSet& me, const Vec3& target_center, double target_radius) const;

  // Raw matrices for tests: regular (j-based) and singular (h-based)
  // S_{n nu}^{m mu}(b) with rows (n,m), columns (nu,mu).
  std::vector<cplx> regular_matrix(const Vec3& b) const;
  std::vector<cplx> singular_matrix(const Vec3& b) const;

  int order_max() const { return p_; }
  double wavenumber() const { return k_; }

 private:
  int p_;
  double k_;
  GauntTable gaunt_;
  std::vector<cplx> matrix(const Vec3& b, bool singular) const;
};

// ---- reaction components ----

struct PolarizationSource {
  Vec3 original;
  Vec3 mapped;
  cplx q;
};

std::vector<PolarizationSource> map_sources(const LayerStack& stack, Component comp, int l,
                                            int lp, std::span<const ChargedPoint> sources);

// ME about an image-side center: the free-space coefficient formula with the
// source-layer wavenumber and polarization coordinates. The center must lie
// strictly on the image side of the separating interface.
CoeffSet p2m_reaction(const SommerfeldTask& task, std::span<const PolarizationSource> sources,
                      const Vec3& center, int p);

// Sum of M_nm F_nm(r, c); coefficients from tables when a provider is given,
// by direct quadrature otherwise (arbitrary order).
cplx reaction_me_eval(const SommerfeldTask& task, const CoeffSet& me, const Vec3& r,
                      const SValueProvider* provider, const LegendreProductCoeffs* coeffs);

// Local coefficients around a target-side center from polarization sources.
CoeffSet reaction_le_coeffs(const SommerfeldTask& task,
                            std::span<const PolarizationSource> sources,
                            const Vec3& target_center, int p, const SValueProvider* provider,
                            const LegendreProductCoeffs* coeffs);

cplx eval_le_reaction(const CoeffSet& le, const Vec3& r);  // j-expansion evaluation

// Dense translation matrix L = T M between image-side ME and target-side LE,
// rows (n,m), columns (n',m'); the down-going parity flip is folded in.
std::vector<cplx> m2l_reaction_matrix(const SommerfeldTask& task,
                                      const LegendreProductCoeffs& coeffs,
                                      const STableIndexSet& idx, const cplx* s_values, int p,
                                      const Vec3& target_center, const Vec3& source_center);

CoeffSet m2l_reaction(const SommerfeldTask& task, const CoeffSet& me,
                      const LegendreProductCoeffs& coeffs, const SValueProvider& provider,
                      const Vec3& target_center);

// Near-field kernel value u~(r, r_s) from an S-value provider.
cplx reaction_kernel(const SommerfeldTask& task, const SValueProvider& provider,
                     const STableIndexSet& idx, const Vec3& r, const Vec3& rs);

}  // namespace lmfmm
