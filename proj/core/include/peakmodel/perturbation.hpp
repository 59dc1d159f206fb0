#pragma once

// The perturbing functionals φ_σ, deficiency elements g_σ(z) = (L − z)^{-1} φ_σ
// and the admissible matrix functions R(z), R̃(z).

#include "peakmodel/spectral_core.hpp"

namespace peakmodel {

struct FunctionalFamily {
  MatC phi;  // N×d, column σ = φ_σ in eigenbasis coordinates
  int d() const { return static_cast<int>(phi.cols()); }
};

FunctionalFamily make_family(const SpectralModel& model, const MatC& phi);

struct AdmissibleMode {
  enum class Kind { direct, renormalized };
  Kind kind = Kind::direct;
  MatC R0;       // R(z0) in renormalized mode
  cplx z0 = 0.0;

  static AdmissibleMode direct() { return {}; }
  static AdmissibleMode renormalized(const MatC& R0, cplx z0) {
    return {Kind::renormalized, R0, z0};
  }
};

// Everything the other modules need: model, 𝒵, φ, scaling, admissible mode,
// plus the cached diagonals of P(L) and p(L).
struct Setup {
  SpectralModel model;
  RegularSet Z;
  FunctionalFamily family;
  Scaling scaling = Scaling::canonical;
  AdmissibleMode mode;

  VecR P;        // H_m weight
  VecC p;        // p(L)
  VecR p_abs2;   // |p(L)|^2
  MatC R_shift;  // R(z) − Σ φ*φ/(P(λ−z)); zero in direct mode

  Index N = 0;
  int m = 1;
  int d = 1;
  Index md() const { return Index(m) * d; }
  // flat index of (σ, j), σ-major
  Index alpha(int sigma, int j) const { return Index(sigma) * m + j; }
};

Setup make_setup(const SpectralModel& model, const RegularSet& Z, const FunctionalFamily& family,
                 Scaling scaling = Scaling::canonical,
                 const AdmissibleMode& mode = AdmissibleMode::direct());

enum class Deficiency {
  g,       // (L − z)^{-1} φ
  G,       // P(L)^{-1} g
  ghat,    // P(L)^{-1/2} g
  Gtilde,  // p(L) G
};

VecC deficiency_g(const Setup& s, int sigma, cplx z, Deficiency kind = Deficiency::g);
MatC deficiency_block(const Setup& s, cplx z, Deficiency kind = Deficiency::g);  // N×d

// F_z(c) = Σ_σ c_σ g_σ(z) / b(z)
VecC F_vector(const Setup& s, cplx z, const VecC& c);

// ⟨g_σ(z̄), g_σ'(w)⟩_{-m}
MatC M_pair(const Setup& s, cplx z, cplx w);

// Σ_i conj(φ_iσ) w_i φ_iσ' / (P_i (λ_i − z)), w = 1 or |p|^2
MatC R_direct(const Setup& s, cplx z, bool tilde_weight = false);

MatC admissible_R(const Setup& s, cplx z);
MatC tilde_R(const Setup& s, cplx z);

}  // namespace peakmodel
