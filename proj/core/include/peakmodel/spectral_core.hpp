#pragma once

// Finite spectral model of a self-adjoint L.  Everything lives in the
// eigenbasis of L, so every function of L is a diagonal (componentwise) map.

#include <vector>

#include "peakmodel/types.hpp"

namespace peakmodel {

struct SpectralModel {
  VecR eigenvalues;
  int m = 1;
  double gap_tol = 0.0;  // minimal admissible distance from z to the spectrum

  Index size() const { return eigenvalues.size(); }
  double max_abs() const { return eigenvalues.cwiseAbs().maxCoeff(); }
};

// tol <= 0 selects the default 1e-8 * (1 + max|λ|).
SpectralModel build_model(const std::vector<double>& eigenvalues, int m, double tol = -1.0);

double spectral_distance(const SpectralModel& model, cplx z);
void require_resolvent(const SpectralModel& model, cplx z);

// Σ_i (|λ_i|+1)^n conj(f_i) g_i
cplx scale_inner(const SpectralModel& model, int n, const VecC& f, const VecC& g);
double scale_norm(const SpectralModel& model, int n, const VecC& f);

// componentwise (|λ_i|+1)^{m s} f_i, i.e. P(L)^s for the canonical P
VecC apply_scale_power(const SpectralModel& model, double s, const VecC& f);

VecC resolvent_L(const SpectralModel& model, cplx z, const VecC& f);

// The regular set 𝒵 = {z_1..z_m} and b_j(z) = Π_{j'≠j}(z − z_j').
struct RegularSet {
  VecC z;
  VecC b_diag;  // b_j(z_j); b_1 ≡ 1 when m = 1

  int size() const { return static_cast<int>(z.size()); }
  cplx b(cplx w) const;             // P̃(w) = Π_j (w − z_j)
  cplx b_j(int j, cplx w) const;
  bool contains(cplx w, double tol) const;
  bool all_real(double tol = 0.0) const;
};

RegularSet make_regular_set(const SpectralModel& model, const std::vector<cplx>& z);

// Σ_j 1/b_j(z_j); vanishes for m > 1.
cplx inverse_b_sum(const RegularSet& Z);

enum class Scaling { canonical, tilde };

// Diagonal of P̃(L) = Π_j (L − z_j).
VecC tilde_p_diag(const SpectralModel& model, const RegularSet& Z);

// forward: Π_j (L − z_j) f.  inverse: Σ_j b_j(z_j)^{-1} (L − z_j)^{-1} f.
VecC tilde_p_apply(const SpectralModel& model, const RegularSet& Z, const VecC& f, bool inverse);

// Diagonal of the H_m weight P(L): (|λ|+1)^m, or P̃(λ) in tilde mode.
// Tilde mode needs real 𝒵 with P̃ > 0 on the spectrum.
VecR scale_weights(const SpectralModel& model, const RegularSet& Z, Scaling s);

// Diagonal of p(L) = P(L) P̃(L)^{-1}.
VecC p_of_L(const SpectralModel& model, const RegularSet& Z, Scaling s);

}  // namespace peakmodel
