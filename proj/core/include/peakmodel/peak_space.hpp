#pragma once

// The intermediate space ℋ ≅ H_m ⊕ ℂ^{md} with ⟨(f,ξ),(f',ξ')⟩ = ⟨f,f'⟩_m + ξ*𝒢ξ',
// the operators A_0, A_0*, A_max, the boundary triple Γ̃, and the
// relation branch B_0 / B_max (m > 1).

#include <vector>

#include "peakmodel/gram_algebra.hpp"

namespace peakmodel {

struct Peak {
  Setup s;
  GramData g;
};

Peak make_peak(const Setup& s);

struct PeakVector {
  VecC f;   // H_m part, length N
  VecC xi;  // coefficients d(k), length md

  PeakVector& operator+=(const PeakVector& o) { f += o.f; xi += o.xi; return *this; }
  PeakVector& operator-=(const PeakVector& o) { f -= o.f; xi -= o.xi; return *this; }
  PeakVector& operator*=(cplx a) { f *= a; xi *= a; return *this; }
};

inline PeakVector operator+(PeakVector a, const PeakVector& b) { return a += b; }
inline PeakVector operator-(PeakVector a, const PeakVector& b) { return a -= b; }
inline PeakVector operator*(cplx a, PeakVector b) { return b *= a; }

PeakVector zero_peak(const Setup& s);
VecC flatten(const PeakVector& v);
PeakVector unflatten(const Setup& s, const VecC& x);

// Element p(L)(f# + G_z(c)) + k of dom A_max in explicit coordinates.
struct ExtendedVector {
  VecC f_sharp;
  VecC c;
  VecC xi;
  cplx z_ref = 0.0;
};

cplx inner_H(const Peak& p, const PeakVector& u, const PeakVector& v);
double norm_H(const Peak& p, const PeakVector& u);
// Gram matrix of ℋ in flattened coordinates: diag(P) ⊕ 𝒢
MatC gram_H(const Peak& p);

// Default spectral parameter z_1 + i(1 + max|λ|).
cplx default_z_ref(const Setup& s);

void require_res_A0(const Peak& p, cplx z);

PeakVector a0_apply(const Peak& p, const PeakVector& v, bool star = false);
PeakVector a0_resolvent(const Peak& p, cplx z, const PeakVector& v);

// ⟨u, A_0 v⟩ − ⟨A_0 u, v⟩ and its two closed forms
cplx boundary_form_A0(const Peak& p, const PeakVector& u, const PeakVector& v);
cplx green_A0(const Peak& p, const PeakVector& u, const PeakVector& v);      // ξ*𝒢_Zξ' − (𝒢_Zξ)*ξ'
cplx green_A0_alt(const Peak& p, const PeakVector& u, const PeakVector& v);  // c*ℳξ' − (ℳξ)*c'

PeakVector embed_extended(const Peak& p, const ExtendedVector& ev);
PeakVector amax_apply(const Peak& p, const ExtendedVector& ev);

// dom A_0 element written in explicit coordinates (c = 0, f# = p(L)^{-1} f).
ExtendedVector as_extended(const Peak& p, const PeakVector& v, cplx z_ref);

struct BoundaryValues {
  VecC gamma0;
  VecC gamma1;
};
BoundaryValues boundary_gamma(const Peak& p, const ExtendedVector& ev);

// ⟨u, A_max v⟩ − ⟨A_max u, v⟩
cplx boundary_form_Amax(const Peak& p, const ExtendedVector& u, const ExtendedVector& v);

// γ(z)c = F_z(c) = (G̃_z(c), (z − Z_d)^{-1} b̂ c)
PeakVector peak_gamma(const Peak& p, cplx z, const VecC& c);
ExtendedVector peak_gamma_extended(const Peak& p, cplx z, const VecC& c);
// γ(z̄)* v = (⟨F_σ(z̄), v⟩_ℋ)_σ
VecC peak_gamma_adjoint(const Peak& p, cplx z, const PeakVector& v);

// Q_𝒢(z)_{σσ'} = Σ_j 𝒢_{σj,σ'j} / ((z_j − z) b_j(z_j)²)
MatC Q_G(const Peak& p, cplx z);

struct PeakWeyl {
  MatC M;          // Γ̃_1 γ(z), columnwise
  MatC M_formula;  // R̃(z) + Q_𝒢(z)
  bool formal = false;  // 𝒢_Z not Hermitian: not a Weyl function of a boundary triple
};
PeakWeyl weyl_peak(const Peak& p, cplx z);

// ℋ_⊥ = {(0, ξ) : ξ ∈ ker 𝒢_b*}
std::vector<PeakVector> hperp_basis(const Peak& p);

// Relation branch, m > 1.
void require_b_branch(const Peak& p, cplx z);
PeakVector b_gamma(const Peak& p, cplx z, const VecC& c);       // (G̃_z(c), b̂(z − Δ̂)^{-1}c)
ExtendedVector b_gamma_extended(const Peak& p, cplx z, const VecC& c);
MatC weyl_b_branch(const Peak& p, cplx z);                      // R̃(z) + 𝒢_min(Δ̂ − z)^{-1}
PeakVector b0_resolvent(const Peak& p, cplx z, const PeakVector& v);
VecC b_gamma_adjoint(const Peak& p, cplx z, const PeakVector& v);  // γ'(z̄)* v

// Residual of (y, v) ∈ (B_0 − z): f-equation, ξ_y ∈ ran b̂, and the ξ-equation
// modulo ker 𝒢_b*.
double b0_graph_residual(const Peak& p, cplx z, const PeakVector& y, const PeakVector& v);

}  // namespace peakmodel
