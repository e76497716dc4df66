#include "lmfmm/layers.hpp"

#include <algorithm>
#include <cstring>

namespace lmfmm {

const char* component_name(Component c) {
  switch (c) {
    case Component::UU: return "uu";
    case Component::UD: return "ud";
    case Component::DU: return "du";
    default: return "dd";
  }
}

LayerStack::LayerStack(std::vector<double> interfaces, std::vector<double> wavenumbers)
    : interfaces_(std::move(interfaces)), wavenumbers_(std::move(wavenumbers)) {
  if (interfaces_.empty()) throw std::invalid_argument("LayerStack: no interfaces");
  if (wavenumbers_.size() != interfaces_.size() + 1)
    throw std::invalid_argument("LayerStack: need one wavenumber per layer (interfaces + 1)");
  for (std::size_t i = 1; i < interfaces_.size(); ++i)
    if (!(interfaces_[i] < interfaces_[i - 1]))
      throw std::invalid_argument("LayerStack: interfaces must be strictly decreasing");
  for (double k : wavenumbers_)
    if (!(k > 0.0)) throw std::invalid_argument("LayerStack: wavenumbers must be positive");
}

double LayerStack::min_wavenumber() const {
  return *std::min_element(wavenumbers_.begin(), wavenumbers_.end());
}

double LayerStack::max_wavenumber() const {
  return *std::max_element(wavenumbers_.begin(), wavenumbers_.end());
}

int LayerStack::layer_of(double z) const {
  for (std::size_t i = 0; i < interfaces_.size(); ++i) {
    if (z == interfaces_[i]) throw std::invalid_argument("layer_of: point lies on an interface");
    if (z > interfaces_[i]) return int(i);
  }
  return int(interfaces_.size());
}

bool LayerStack::inside_layer(int layer, double z) const {
  double lo = (layer < interface_count()) ? interfaces_[layer]
                                          : -std::numeric_limits<double>::infinity();
  double hi = (layer > 0) ? interfaces_[layer - 1] : std::numeric_limits<double>::infinity();
  return z > lo && z < hi;
}

std::uint64_t LayerStack::digest() const {
  // FNV-1a over the raw doubles
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (double d : interfaces_) mix(d);
  for (double k : wavenumbers_) mix(k);
  return h;
}

cplx vertical_wavenumber(double k, cplx k_rho) {
  cplx s = std::sqrt(cplx(k * k) - k_rho * k_rho);
  if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
  return s;
}

cplx vertical_wavenumber(const LayerStack& stack, int layer, cplx k_rho) {
  return vertical_wavenumber(stack.wavenumber(layer), k_rho);
}

ThreeLayerDensities three_layer_densities(const LayerStack& stack, cplx k_rho) {
  if (stack.layer_count() != 3)
    throw std::invalid_argument("three_layer_densities: stack must have exactly three layers");
  const double k0 = stack.wavenumber(0), k1 = stack.wavenumber(1), k2 = stack.wavenumber(2);
  const double d0 = stack.interface(0), d1 = stack.interface(1);
  const cplx k0z = vertical_wavenumber(k0, k_rho);
  const cplx k1z = vertical_wavenumber(k1, k_rho);
  const cplx k2z = vertical_wavenumber(k2, k_rho);
  // printed forms assume d0 = 0; the general slab phase is exp(i k1z (d0-d1))
  const cplx E = std::exp(iu * k1z * (d0 - d1));
  const cplx ka = k0 * k0z, kb = k1 * k1z, kc = k2 * k2z;
  const cplx kap11 = 0.5 * (kb - kc) * E * E + 0.5 * (kb + kc);
  const cplx kap12 = iu * (0.5 * (kc - kb) * E * E + 0.5 * (kb + kc));
  const cplx den = ka * kap11 - iu * kb * kap12;
  const double scale = std::max({std::abs(ka), std::abs(kb), std::abs(kc)});
  if (std::abs(den) < 1e-12 * std::max(1.0, scale * scale))
    throw PoleProximityError("three_layer_densities: near-singular layer denominator");
  ThreeLayerDensities s;
  s.s01_uu = k1 * k0z * (kb - kc) * E / den;
  s.s01_ud = k1 * k0z * (kb + kc) / den;
  s.s11_uu = (kb - kc) * (kb + ka) / (2.0 * den);
  s.s11_dd = (kb - ka) * (kb + kc) / (2.0 * den);
  s.s11_ud = (kb - kc) * (kb - ka) * E / (2.0 * den);
  s.s11_du = (kb - ka) * (kb - kc) * E / (2.0 * den);
  s.s21_du = k1 * k2z * (kb + ka) / den;
  s.s21_dd = k1 * k2z * (kb - ka) * E / den;
  return s;
}

SpectralAmplitudes solve_interface_system(const LayerStack& stack, int source_layer,
                                          bool basis_down, cplx k_rho) {
  const int L = stack.interface_count();
  const int nl = stack.layer_count();
  if (source_layer < 0 || source_layer >= nl)
    throw std::invalid_argument("solve_interface_system: bad source layer");
  if (basis_down && source_layer == nl - 1)
    throw std::invalid_argument("solve_interface_system: bottom-layer source has no down basis");
  if (!basis_down && source_layer == 0)
    throw std::invalid_argument("solve_interface_system: top-layer source has no up basis");

  std::vector<cplx> kz(nl);
  for (int l = 0; l < nl; ++l) kz[l] = vertical_wavenumber(stack, l, k_rho);

  // Field in layer l: (i / 2 kz_l) [ delta_{l,lp} prim
  //   + e^{i kz_l (z - d_l)} psiU_l + e^{i kz_l (d_{l-1} - z)} psiD_l ].
  // Unknowns psiU_0..psiU_{L-1}, psiD_1..psiD_L; two conditions per interface.
  const int nu = 2 * L;
  auto ucol = [&](int l) { return l == 0 ? 0 : 2 * l - 1; };  // valid l = 0..L-1
  auto dcol = [&](int l) { return 2 * l; };                   // valid l = 1..L

  std::vector<cplx> A(std::size_t(nu) * nu, 0.0), b(nu, 0.0);
  auto at = [&](int r, int c) -> cplx& { return A[std::size_t(r) * nu + c]; };

  const int lp = source_layer;
  for (int i = 0; i < L; ++i) {  // interface d_i between layers i (above) and i+1 (below)
    const double d = stack.interface(i);
    const int la = i, lb = i + 1;
    const double ka = stack.wavenumber(la), kb_ = stack.wavenumber(lb);
    const cplx za = kz[la], zb = kz[lb];
    const int rv = 2 * i, rd = 2 * i + 1;

    // rv row: u_a(d) - u_b(d) = rhs; rd row: k_a u'_a(d) - k_b u'_b(d) = rhs.
    // Up term of layer a references d_a = d (phase 1); its down term
    // references d_{a-1}. Layer b's down term references d_{b-1} = d
    // (phase 1); its up term references d_b. (i/2kz)(+-i kz) = -+ 1/2.
    at(rv, ucol(la)) += 1.0 / (2.0 * za);
    at(rd, ucol(la)) += -ka * 0.5;
    if (la > 0) {
      cplx ph = std::exp(iu * za * (stack.interface(la - 1) - d));
      at(rv, dcol(la)) += ph / (2.0 * za);
      at(rd, dcol(la)) += ka * 0.5 * ph;
    }
    if (lb < L) {
      cplx ph = std::exp(iu * zb * (d - stack.interface(lb)));
      at(rv, ucol(lb)) -= ph / (2.0 * zb);
      at(rd, ucol(lb)) -= -kb_ * 0.5 * ph;
    }
    at(rv, dcol(lb)) -= 1.0 / (2.0 * zb);
    at(rd, dcol(lb)) -= kb_ * 0.5;

    // Primary basis traces: the down-going unit exists only at d_{lp} (seen
    // from above, layer a = lp), the up-going unit only at d_{lp-1} (from
    // below, layer b = lp).
    if (basis_down && i == lp) {
      b[rv] = -1.0 / (2.0 * kz[lp]);
      b[rd] = -ka * 0.5;
    }
    if (!basis_down && i == lp - 1) {
      b[rv] = 1.0 / (2.0 * kz[lp]);
      b[rd] = -kb_ * 0.5;
    }
  }

  // Gaussian elimination with partial pivoting (tiny dense system).
  std::vector<int> piv(nu);
  for (int c = 0; c < nu; ++c) piv[c] = c;
  for (int c = 0; c < nu; ++c) {
    int best = c;
    double mag = std::abs(at(c, c));
    for (int r = c + 1; r < nu; ++r)
      if (std::abs(at(r, c)) > mag) {
        mag = std::abs(at(r, c));
        best = r;
      }
    if (mag < 1e-300) throw PoleProximityError("solve_interface_system: singular system");
    if (best != c)
      for (int cc = 0; cc < nu; ++cc) {
        std::swap(at(best, cc), at(c, cc));
        if (cc == 0) std::swap(b[best], b[c]);
      }
    for (int r = c + 1; r < nu; ++r) {
      cplx f = at(r, c) / at(c, c);
      if (f == cplx(0.0)) continue;
      for (int cc = c; cc < nu; ++cc) at(r, cc) -= f * at(c, cc);
      b[r] -= f * b[c];
    }
  }
  for (int c = nu - 1; c >= 0; --c) {
    cplx acc = b[c];
    for (int cc = c + 1; cc < nu; ++cc) acc -= at(c, cc) * b[cc];
    b[c] = acc / at(c, c);
  }

  SpectralAmplitudes out;
  out.psi_up.assign(nl, cplx(0.0));
  out.psi_down.assign(nl, cplx(0.0));
  for (int l = 0; l < L; ++l) out.psi_up[l] = b[ucol(l)];
  for (int l = 1; l <= L; ++l) out.psi_down[l] = b[dcol(l)];
  return out;
}

ReactionDensitySet::ReactionDensitySet(const LayerStack& stack, Component comp, int target_layer,
                                       int source_layer)
    : stack_(&stack), comp_(comp), l_(target_layer), lp_(source_layer) {
  if (!valid(stack, comp, target_layer, source_layer))
    throw std::invalid_argument("ReactionDensitySet: invalid (component, layers) combination");
  closed_form_ = stack.layer_count() == 3 && source_layer == 1;
}

bool ReactionDensitySet::valid(const LayerStack& stack, Component comp, int l, int lp) {
  const int L = stack.interface_count();
  if (l < 0 || l > L || lp < 0 || lp > L) return false;
  if (target_up(comp) && l == L) return false;    // no up-going field in the bottom layer
  if (!target_up(comp) && l == 0) return false;   // no down-going field in the top layer
  if (source_up(comp) && lp == L) return false;   // source phase needs d_{lp}
  if (!source_up(comp) && lp == 0) return false;  // source phase needs d_{lp-1}
  return true;
}

cplx ReactionDensitySet::operator()(cplx k_rho) const {
  if (closed_form_) {
    ThreeLayerDensities s = three_layer_densities(*stack_, k_rho);
    switch (comp_) {
      case Component::UU: return l_ == 0 ? s.s01_uu : s.s11_uu;
      case Component::UD: return l_ == 0 ? s.s01_ud : s.s11_ud;
      case Component::DU: return l_ == 2 ? s.s21_du : s.s11_du;
      default: return l_ == 2 ? s.s21_dd : s.s11_dd;
    }
  }
  SpectralAmplitudes amp = solve_interface_system(*stack_, lp_, source_up(comp_), k_rho);
  return target_up(comp_) ? amp.psi_up[l_] : amp.psi_down[l_];
}

cplx psi_profile(const LayerStack& stack, bool up_target, int l, int lp, double z_src,
                 cplx k_rho) {
  if (!stack.inside_layer(lp, z_src))
    throw std::invalid_argument("psi_profile: source not inside its layer");
  const cplx kspz = vertical_wavenumber(stack, lp, k_rho);
  const int L = stack.interface_count();
  cplx acc = 0.0;
  if (lp < L) {  // sigma^{*up} paired with e^{i k_{lp z}(z' - d_lp)}
    Component c = up_target ? Component::UU : Component::DU;
    ReactionDensitySet s(stack, c, l, lp);
    acc += std::exp(iu * kspz * (z_src - stack.interface(lp))) * s(k_rho);
  }
  if (lp > 0) {  // sigma^{*down} paired with e^{i k_{lp z}(d_{lp-1} - z')}
    Component c = up_target ? Component::UD : Component::DD;
    ReactionDensitySet s(stack, c, l, lp);
    acc += std::exp(iu * kspz * (stack.interface(lp - 1) - z_src)) * s(k_rho);
  }
  return acc;
}

}  // namespace lmfmm
