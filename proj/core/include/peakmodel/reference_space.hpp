#pragma once

// Operators and boundary maps transported to the reference space H_0 = ℂ^N
// (plain Euclidean product).  K̂ = span{ĝ_α}, ĝ_α = P(L)^{-1/2} g_σ(z_j).
//
// Elements of dom Â_max are carried in explicit coordinates: u' + k̂ with
// u' = f♮ + (L − z_ref)^{-1} k̂_min(c), k̂_min(c) = Σ_α [b̂c]_α ĝ_α, and k̂ = ĝ ξ.

#include <memory>

#include "peakmodel/extensions.hpp"

namespace peakmodel {

struct KhatFrame {
  std::shared_ptr<const Peak> peak;
  MatC ghat;    // N×md
  MatC phihat;  // N×d, P(L)^{-1/2} φ
  MatC P_proj;  // orthogonal projection onto K̂
  MatC Qk;      // N×md orthonormal basis of K̂, ĝ = Qk Rk
  MatC Rk;      // md×md upper triangular

  const Setup& s() const { return peak->s; }
  const GramData& g() const { return peak->g; }
};

KhatFrame make_frame(const Peak& p);

VecC d_of(const KhatFrame& fr, const VecC& u);  // 𝒢^{-1} ĝ* u = d(Pu)
VecC c_of(const KhatFrame& fr, const VecC& u);  // c(Pu)

// L(I − P)u + ĝ Z_d 𝒢^{-1} ĝ* u
VecC l0star_apply(const KhatFrame& fr, const VecC& u);

VecC ghat_z(const KhatFrame& fr, cplx z, const VecC& c);  // Σ_σ c_σ ĝ_σ(z)

// u = u# + ĝ_z(c)
struct VonNeumannCoords {
  VecC u_sharp;
  VecC c;
  cplx z = 0.0;
};
VecC evaluate(const KhatFrame& fr, const VonNeumannCoords& v);
// u_⊥ = (I − P)u, ξ = d(Pu); u# = u_⊥ + Σ ξ_α (ĝ_α − ĝ_σ(z)), c = c(ξ)
VonNeumannCoords von_neumann_coords(const KhatFrame& fr, const VecC& u, cplx z);
// L̂_0* in von Neumann form: L u# + z ĝ_z(c)
VecC l0star_von_neumann(const KhatFrame& fr, const VonNeumannCoords& v);

// Γ̂_0 u = c, Γ̂_1 u = ⟨φ̂, u#⟩ + R(z) c
BoundaryValues gammahat(const KhatFrame& fr, const VecC& u_sharp, const VecC& c, cplx z);

struct PrimeCoords {
  VecC f_nat;
  VecC c;
  cplx z_ref = 0.0;
};
VecC u_prime(const KhatFrame& fr, const PrimeCoords& pc);
VecC embed_prime(const KhatFrame& fr, const PrimeCoords& pc, const VecC& xi);  // u' + ĝ ξ
VonNeumannCoords prime_to_von_neumann(const KhatFrame& fr, const PrimeCoords& pc, const VecC& xi, cplx z);

// Γ̂'_0(u' + k̂) = c(k̂), Γ̂'_1(u' + k̂) = ⟨φ̂, u'⟩ + ℳ d(k̂)
BoundaryValues gammahat_prime(const KhatFrame& fr, const PrimeCoords& pc, const VecC& xi);

// Â_max(u' + k̂) = L u' + ĝ Z_d ξ
VecC ahat_max_apply(const KhatFrame& fr, const PrimeCoords& pc, const VecC& xi);

// Finite-model discrepancy Â_max − L̂_0* on the embedded vector: φ̂ c(P u').
VecC ahat_defect(const KhatFrame& fr, const PrimeCoords& pc);

// ‖𝒢^{-1}ĝ*(Lu) − 𝒳⟨φ̂,u⟩ − 𝒢^{-1}𝒢_Z*𝒢^{-1}ĝ*u‖, relative
double d_of_L_identity_check(const KhatFrame& fr, const VecC& u);

// Triple (ℂ^d, Γ̂_0, Γ̂_1) for L̂_0*: R_0 = (L − z)^{-1}, γ(z) = ĝ_z(·), M = R.
TripleHandle reference_handle(const KhatFrame& fr);

}  // namespace peakmodel
