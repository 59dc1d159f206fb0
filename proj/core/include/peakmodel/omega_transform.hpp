#pragma once

// ι-deformation of the peak model.  ι is a positive, bijective, ℋ-self-adjoint
// operator on ℋ ≅ ℂ^{N+md}; Ω = ι^{1/2} (ℋ-square root) so that ΩΩ* = ι and
// Â^Ω_Θ = Ω* A_Θ Ω.  Everything below depends on Ω only through ι, except the
// γ-field Ω^{-1} H_z.

#include <cstdint>
#include <vector>

#include "peakmodel/extensions.hpp"

namespace peakmodel {

struct IotaSpec {
  enum class Kind { identity, random, fixing, from_factor };
  Kind kind = Kind::identity;
  std::uint64_t seed = 0;
  double strength = 0.5;
  std::vector<PeakVector> fixed;  // fixing mode: ι v = v on span(fixed)
  MatC factor;                    // from_factor: ι = B B^[*]

  static IotaSpec identity() { return {}; }
  static IotaSpec random(std::uint64_t seed, double strength) {
    IotaSpec s;
    s.kind = Kind::random;
    s.seed = seed;
    s.strength = strength;
    return s;
  }
  static IotaSpec fixing(std::vector<PeakVector> v, std::uint64_t seed = 0, double strength = 0.5) {
    IotaSpec s;
    s.kind = Kind::fixing;
    s.fixed = std::move(v);
    s.seed = seed;
    s.strength = strength;
    return s;
  }
  static IotaSpec from_factor(const MatC& B) {
    IotaSpec s;
    s.kind = Kind::from_factor;
    s.factor = B;
    return s;
  }
};

struct IotaDeformation {
  MatC iota;   // acts on flattened PeakVector coordinates
  MatC omega;  // ι^{1/2}
  MatC T;      // upper Cholesky factor of the ℋ-Gram: ⟨u,v⟩_ℋ = (Tu)*(Tv)
  double min_eigenvalue = 0.0;

  PeakVector apply(const Setup& s, const PeakVector& v) const;
};

IotaDeformation make_iota(const Peak& p, const IotaSpec& spec);

double iota_selfadjoint_residual(const Peak& p, const IotaDeformation& io);

// Σ_ι = res A_0 ∩ res(ι A_0)
bool in_sigma_iota(const Peak& p, const IotaDeformation& io, cplx z);
void require_sigma_iota(const Peak& p, const IotaDeformation& io, cplx z);

// H_z(c) = [I + z(ιA_0 − z)^{-1}(I − ι)] F_z(c), with explicit coordinates
ExtendedVector h_z_extended(const Peak& p, const IotaDeformation& io, cplx z, const VecC& c);
PeakVector h_z(const Peak& p, const IotaDeformation& io, cplx z, const VecC& c);

// ‖ι A_max H_z(c) − z H_z(c)‖_ℋ, relative
double h_z_eigen_residual(const Peak& p, const IotaDeformation& io, cplx z, const VecC& c);

struct OmegaWeyl {
  MatC M;        // Γ̃_1 H_z, columnwise
  MatC M_tilde;  // Γ̃_1 γ(z)
  MatC Delta;    // Γ̃_1[(ιA_0 − z)^{-1}(I − ι) z γ(z)]
};
OmegaWeyl m_omega(const Peak& p, const IotaDeformation& io, cplx z);

struct Preservation {
  bool preserved = false;  // z = 0 or ι fixes every F_σ(z)
  double fix_residual = 0.0;
  double delta_norm = 0.0;
  double weyl_norm = 0.0;
  bool consistent = true;  // preserved ⇒ ‖Δ^Ω‖ < 1e-8 ‖M‖
};
Preservation weyl_preserved(const Peak& p, const IotaDeformation& io, cplx z);

// γ-field of the Ω-triple: Ω^{-1} H_z(c)
PeakVector gamma_omega(const Peak& p, const IotaDeformation& io, cplx z, const VecC& c);

// Triple (ℂ^d, Γ̃Ω) for Â^Ω_max = Ω A_max Ω on ℋ.
TripleHandle omega_handle(const Peak& p, const IotaDeformation& io);

}  // namespace peakmodel
