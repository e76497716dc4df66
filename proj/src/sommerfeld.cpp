#include "lmfmm/sommerfeld.hpp"

#include <algorithm>

#include "lmfmm/specfun.hpp"

namespace lmfmm {

cplx free_green_via_sommerfeld(double k, const Vec3& r, const Vec3& rp,
                               const ContourQuadrature& quad) {
  const double rho = std::hypot(r.x - rp.x, r.y - rp.y);
  const double dz = std::abs(r.z - rp.z);
  if (rho == 0.0 && dz == 0.0)
    throw std::invalid_argument("free_green_via_sommerfeld: coincident points");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const cplx krho = quad.nodes[i];
    const cplx kz = vertical_wavenumber(k, krho);
    acc += quad.weights[i] * krho * cyl_bessel_j(0, krho * rho) * std::exp(iu * kz * dz) / kz;
  }
  return acc / k;
}

cplx wave_function_via_sommerfeld(double k, int n, int m, const Vec3& r,
                                  const ContourQuadrature& quad) {
  const double rho = std::hypot(r.x, r.y);
  const double phi = std::atan2(r.y, r.x);
  const int am = std::abs(m);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const cplx krho = quad.nodes[i];
    const cplx kz = vertical_wavenumber(k, krho);
    ComplexTriangle P = legendre_normalized_complex(n, kz / k);
    cplx Jm = cyl_bessel_j(am, krho * rho) * (m < 0 ? parity(am) : 1.0);
    acc += quad.weights[i] * krho * Jm * std::exp(iu * kz * r.z) * P(n, m) / kz;
  }
  return ipow(-n) * ipow(m) / k * std::exp(iu * double(m) * phi) * acc;
}

SommerfeldTask::SommerfeldTask(const LayerStack& stack, Component comp, int target_layer,
                               int source_layer, const ContourQuadrature& quad)
    : stack_(&stack), comp_(comp), l_(target_layer), lp_(source_layer), quad_(quad) {
  up_ = target_up(comp);
  kt_ = stack.wavenumber(l_);
  ks_ = stack.wavenumber(lp_);
  d_sep_ = up_ ? stack.interface(l_) : stack.interface(l_ - 1);
  ReactionDensitySet dens(stack, comp, l_, lp_);
  const std::size_t n = quad_.size();
  sigma_.resize(n);
  kz_t_.resize(n);
  kz_s_.resize(n);
  base_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx krho = quad_.nodes[i];
    sigma_[i] = dens(krho);
    kz_t_[i] = vertical_wavenumber(kt_, krho);
    kz_s_[i] = vertical_wavenumber(ks_, krho);
    base_[i] = quad_.weights[i] * krho * sigma_[i] / kz_t_[i];
  }
}

std::size_t SommerfeldTask::effective_nodes(double h) const {
  if (h <= 0.0) return quad_.size();
  double t = 3.0 * stack_->max_wavenumber() + 4.0 * quad_.b + tail_coeff_ / h;
  return quad_.cutoff_index(t);
}

cplx SommerfeldTask::kernel(double rho, double z, double zeta, bool truncate) const {
  const double a = target_offset(z), b = source_offset(zeta);
  const std::size_t n = truncate ? effective_nodes(a + b) : quad_.size();
  cplx acc = 0.0;
  cplx J[2];
  for (std::size_t i = 0; i < n; ++i) {
    const cplx krho = quad_.nodes[i];
    cyl_bessel_j_seq(0, krho * rho, J);
    acc += base_[i] * J[0] * std::exp(iu * (kz_t_[i] * a + kz_s_[i] * b));
  }
  return iu / (4.0 * pi) * acc;
}

cplx SommerfeldTask::me_prefactor(int n, int m) const {
  // up-going kernels carry (-i)^n from the source-side plane-wave expansion;
  // down-going ones i^n (-1)^m (fixed by the expansion/direct identity).
  cplx src = up_ ? ipow(-n) : ipow(n) * parity(m);
  return src * ipow(m + 1) / (4.0 * pi);
}

cplx SommerfeldTask::le_prefactor(int n, int m) const {
  return down_flip(n, m) * ipow(n + m + 1);
}

cplx SommerfeldTask::m2l_prefactor(int tn, int tm, int sn, int sm) const {
  double src = up_ ? parity(sn) : parity(sm);
  return src * ipow(tn + sn + 1) * ipow(sm - tm);
}

ComplexTriangle SommerfeldTask::me_basis_direct(int n_max, const Vec3& r,
                                                const Vec3& center) const {
  if (target_offset(center.z) >= 0.0)
    throw std::invalid_argument("me_basis_direct: center violates the image-side condition");
  const double rho = std::hypot(r.x - center.x, r.y - center.y);
  const double phi = std::atan2(r.y - center.y, r.x - center.x);
  const double a = target_offset(r.z), b = source_offset(center.z);
  ComplexTriangle F(n_max);
  std::vector<cplx> J(n_max + 1);
  const std::size_t nq = quad_.size();
  for (std::size_t i = 0; i < nq; ++i) {
    const cplx krho = quad_.nodes[i];
    cyl_bessel_j_seq(n_max, krho * rho, J.data());
    ComplexTriangle P = legendre_normalized_complex(n_max, kz_s_[i] / ks_);
    const cplx common = base_[i] * std::exp(iu * (kz_t_[i] * a + kz_s_[i] * b));
    // for m < 0, J_m and Phat_n^m pick up matching (-1)^|m| factors
    for (int n = 0; n <= n_max; ++n)
      for (int m = -n; m <= n; ++m) {
        const int am = std::abs(m);
        F(n, m) += common * J[am] * P(n, am);
      }
  }
  for (int n = 0; n <= n_max; ++n)
    for (int m = -n; m <= n; ++m)
      F(n, m) *= me_prefactor(n, m) * std::exp(iu * double(m) * phi);
  return F;
}

ComplexTriangle SommerfeldTask::le_coeffs_direct(int n_max, const Vec3& target_center,
                                                 const Vec3& src) const {
  if (target_offset(target_center.z) <= 0.0)
    throw std::invalid_argument("le_coeffs_direct: center violates the target-side condition");
  const double rho = std::hypot(target_center.x - src.x, target_center.y - src.y);
  const double phi = std::atan2(target_center.y - src.y, target_center.x - src.x);
  const double a = target_offset(target_center.z), b = source_offset(src.z);
  ComplexTriangle L(n_max);
  std::vector<cplx> J(n_max + 1);
  const std::size_t nq = quad_.size();
  for (std::size_t i = 0; i < nq; ++i) {
    const cplx krho = quad_.nodes[i];
    cyl_bessel_j_seq(n_max, krho * rho, J.data());
    ComplexTriangle P = legendre_normalized_complex(n_max, kz_t_[i] / kt_);
    const cplx common = base_[i] * std::exp(iu * (kz_t_[i] * a + kz_s_[i] * b));
    for (int n = 0; n <= n_max; ++n)
      for (int m = -n; m <= n; ++m) {
        const int am = std::abs(m);
        L(n, m) += common * J[am] * P(n, am);
      }
  }
  for (int n = 0; n <= n_max; ++n)
    for (int m = -n; m <= n; ++m)
      L(n, m) *= le_prefactor(n, m) * std::exp(-iu * double(m) * phi);
  return L;
}

cplx SommerfeldTask::table_integrand(int n_bessel, int m_power, int mu, int nu, double rho,
                                     double z, double zeta, cplx k_rho) const {
  const cplx kzt = vertical_wavenumber(kt_, k_rho);
  const cplx kzs = vertical_wavenumber(ks_, k_rho);
  ReactionDensitySet dens(*stack_, comp_, l_, lp_);
  const double a = target_offset(z), b = source_offset(zeta);
  cplx val = std::pow(k_rho, m_power + 1) * cyl_bessel_j(n_bessel, k_rho * rho) *
             std::exp(iu * (kzt * a + kzs * b)) * dens(k_rho) / kzt;
  if (mu) val *= kt_ / kzt;
  if (nu) val *= ks_ / kzs;
  return val;
}

void SommerfeldTask::s_values(const std::vector<IndexQuad>& idx, double rho, double z,
                              double zeta, cplx* out, bool truncate) const {
  int nb_max = 0, mp_max = 0;
  for (const auto& q : idx) {
    nb_max = std::max(nb_max, q.n_bessel);
    mp_max = std::max(mp_max, q.m_power);
  }
  const double a = target_offset(z), b = source_offset(zeta);
  const std::size_t n = truncate ? effective_nodes(a + b) : quad_.size();
  std::fill(out, out + idx.size(), cplx(0.0));
  std::vector<cplx> J(nb_max + 1), pw(mp_max + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx krho = quad_.nodes[i];
    cyl_bessel_j_seq(nb_max, krho * rho, J.data());
    pw[0] = 1.0;
    for (int p = 1; p <= mp_max; ++p) pw[p] = pw[p - 1] * krho;
    const cplx common = base_[i] * std::exp(iu * (kz_t_[i] * a + kz_s_[i] * b));
    const cplx tfac = kt_ / kz_t_[i], sfac = ks_ / kz_s_[i];
    for (std::size_t t = 0; t < idx.size(); ++t) {
      cplx v = common * J[idx[t].n_bessel] * pw[idx[t].m_power];
      if (idx[t].mu) v *= tfac;
      if (idx[t].nu) v *= sfac;
      out[t] += v;
    }
  }
}

cplx reaction_component_direct(const SommerfeldTask& task, const Vec3& r, const Vec3& rp,
                               bool truncate) {
  const LayerStack& st = task.stack();
  if (!st.inside_layer(task.target_layer(), r.z))
    throw std::invalid_argument("reaction_component_direct: target not in its layer");
  if (!st.inside_layer(task.source_layer(), rp.z))
    throw std::invalid_argument("reaction_component_direct: source not in its layer");
  // original-coordinate phases: the source-side exponent references d_{lp}
  // (up-going source) or d_{lp-1} (down-going source)
  const bool sup = source_up(task.component());
  const double ds = sup ? st.interface(task.source_layer())
                        : st.interface(task.source_layer() - 1);
  const double rho = std::hypot(r.x - rp.x, r.y - rp.y);
  const double a = task.target_offset(r.z);
  const double bsrc = sup ? rp.z - ds : ds - rp.z;
  const auto& quad = task.quad();
  const std::size_t n = truncate ? task.effective_nodes(a + bsrc) : quad.size();
  ReactionDensitySet dens(st, task.component(), task.target_layer(), task.source_layer());
  const double kt = task.k_target(), ks = task.k_source();
  cplx acc = 0.0;
  cplx J0[1];
  for (std::size_t i = 0; i < n; ++i) {
    const cplx krho = quad.nodes[i];
    const cplx kzt = vertical_wavenumber(kt, krho);
    const cplx kzs = vertical_wavenumber(ks, krho);
    cyl_bessel_j_seq(0, krho * rho, J0);
    acc += quad.weights[i] * krho * dens(krho) / kzt * J0[0] *
           std::exp(iu * (kzt * a + kzs * bsrc));
  }
  return iu / (4.0 * pi) * acc;
}

Vec3 polarization_map(const LayerStack& stack, Component comp, int l, int lp, const Vec3& rp) {
  if (!stack.inside_layer(lp, rp.z))
    throw std::invalid_argument("polarization_map: source not inside its layer");
  const double d_sep = target_up(comp) ? stack.interface(l) : stack.interface(l - 1);
  const double ds = source_up(comp) ? stack.interface(lp) : stack.interface(lp - 1);
  const double off = source_up(comp) ? rp.z - ds : ds - rp.z;  // > 0 inside the layer
  const double zi = target_up(comp) ? d_sep - off : d_sep + off;
  return {rp.x, rp.y, zi};
}

}  // namespace lmfmm
