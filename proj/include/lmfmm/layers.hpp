// Layered-medium configuration, branch-correct vertical wavenumbers and the
// spectral reaction densities sigma(krho). Three-layer densities with a
// middle-layer source have closed forms; every other case is produced by a
// small interface-matching solve, which doubles as the general-L extension
// point.
#pragma once

#include <array>
#include <map>
#include <optional>

#include "lmfmm/core.hpp"

namespace lmfmm {

enum class Component { UU, UD, DU, DD };

inline bool target_up(Component c) { return c == Component::UU || c == Component::UD; }
inline bool source_up(Component c) { return c == Component::UU || c == Component::DU; }
const char* component_name(Component c);

struct PoleProximityError : std::runtime_error {
  explicit PoleProximityError(const std::string& what) : std::runtime_error(what) {}
};

// Interfaces d_0 > d_1 > ... > d_{L-1}; layer l occupies d_l < z < d_{l-1},
// layer 0 is z > d_0 and layer L is z < d_{L-1}.
class LayerStack {
 public:
  LayerStack(std::vector<double> interfaces, std::vector<double> wavenumbers);

  int interface_count() const { return int(interfaces_.size()); }        // L
  int layer_count() const { return int(wavenumbers_.size()); }           // L + 1
  double interface(int i) const { return interfaces_.at(i); }
  double wavenumber(int layer) const { return wavenumbers_.at(layer); }
  double min_wavenumber() const;
  double max_wavenumber() const;

  // Total for z strictly between interfaces; throws on-interface.
  int layer_of(double z) const;
  bool inside_layer(int layer, double z) const;

  // Digest of the geometry for table-file validation.
  std::uint64_t digest() const;

  const std::vector<double>& interfaces() const { return interfaces_; }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }

 private:
  std::vector<double> interfaces_;
  std::vector<double> wavenumbers_;
};

// k_{lz} = sqrt(k_l^2 - krho^2) on the branch with Re >= 0 and Im >= 0.
cplx vertical_wavenumber(const LayerStack& stack, int layer, cplx k_rho);
cplx vertical_wavenumber(double k, cplx k_rho);

struct ThreeLayerDensities {
  cplx s01_uu, s01_ud;
  cplx s11_uu, s11_ud, s11_du, s11_dd;
  cplx s21_du, s21_dd;
};

// Closed-form densities for a three-layer stack with the source in the middle
// layer. Throws PoleProximityError near a vanishing layer denominator.
ThreeLayerDensities three_layer_densities(const LayerStack& stack, cplx k_rho);

// sigma evaluator for one (component, target layer, source layer) task.
class ReactionDensitySet {
 public:
  ReactionDensitySet(const LayerStack& stack, Component comp, int target_layer, int source_layer);

  cplx operator()(cplx k_rho) const;

  Component component() const { return comp_; }
  int target_layer() const { return l_; }
  int source_layer() const { return lp_; }

  // Validity per the layer structure: no down-going component in the top
  // layer, none up-going in the bottom one, and the source-side phase must
  // have a reference interface.
  static bool valid(const LayerStack& stack, Component comp, int l, int lp);

 private:
  const LayerStack* stack_;
  Component comp_;
  int l_, lp_;
  bool closed_form_;
};

// z'-dependent spectral density psi for the reference evaluator: the sigma
// pair of the component family weighted by the source-side phases.
cplx psi_profile(const LayerStack& stack, bool up_target, int l, int lp, double z_src, cplx k_rho);

// General solve of the interface matching conditions ([u] = 0, [k du/dz] = 0)
// for the per-layer up/down spectral amplitudes, given a unit down-going
// excitation at d_{lp} (basis_down = true) or a unit up-going excitation at
// d_{lp-1}. Returns psi-up per layer 0..L-1 and psi-down per layer 1..L.
struct SpectralAmplitudes {
  std::vector<cplx> psi_up;    // index = layer, valid 0..L-1
  std::vector<cplx> psi_down;  // index = layer, valid 1..L
};
SpectralAmplitudes solve_interface_system(const LayerStack& stack, int source_layer,
                                          bool basis_down, cplx k_rho);

}  // namespace lmfmm
