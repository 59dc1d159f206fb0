#pragma once

// Finite matrices built from the md deficiency vectors g_α = g_σ(z_j),
// α = (σ, j) flattened σ-major: α = σ·m + j.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peakmodel/perturbation.hpp"

namespace peakmodel {

struct GramData {
  MatC G;          // md×md, ⟨g_α, g_α'⟩_{-m}
  MatC Ginv;
  MatC Gb;         // md×d, 𝒢 b̂
  MatC bhat;       // md×d, 𝒢^{-1} 𝒢_b
  MatC Gmin;       // d×d, 𝒢_b* 𝒢^{-1} 𝒢_b
  VecC zd;         // diagonal of Z_d
  MatC GZ;         // 𝒢 Z_d
  MatC Hb;         // md×d, pseudoinverse of 𝒢_b*
  MatC HbOp;       // H_b 𝒢_b* H_b
  MatC KerGbStar;  // md×(md−d), orthonormal
  MatC Delta;      // 𝒢_b* Z_d b̂
  MatC DeltaHat;   // 𝒢_min^{-1} Δ
  MatC X;          // md×d, 𝒳_{α,σ'} = Σ_j' [𝒢^{-1}]_{α,(σ'j')}
  MatC Mcal;       // d×md, ℳ_{σ,(σ'j')} = R_σσ'(z_j')
  double cond_G = 0.0;
  std::vector<std::string> warnings;

  MatC Zd() const { return zd.asDiagonal(); }
};

// Explicit coefficient matrix with entries δ_σσ' / b_j(z_j) (= b̂ analytically).
MatC bhat_explicit(const Setup& s);

// E_{(σ,j),σ'} = δ_σσ'; c(ξ) = E^T ξ.
MatC sum_matrix(const Setup& s);

GramData build_gram(const Setup& s);

// Derives every other field from a supplied Gram matrix.  build_gram uses it;
// the verification runner uses it to propagate injected faults.
GramData gram_from_matrix(const Setup& s, const MatC& G);

struct HermiticityReport {
  bool gz_hermitian = false;
  bool gram_j_diagonal = false;
  bool z_all_real = false;
  bool R_constant_hermitian = false;
  double gz_residual = 0.0;          // ‖𝒢_Z − 𝒢_Z*‖ / ‖𝒢_Z‖
  double j_offdiag_residual = 0.0;   // ‖off-j blocks of 𝒢‖ / ‖𝒢‖
  double R_spread_residual = 0.0;    // max_j ‖R(z_j) − R(z_1)‖ and ‖R − R*‖, relative

  bool second_characterization() const { return gram_j_diagonal && z_all_real; }
  bool consistent() const {
    return gz_hermitian == second_characterization() && gz_hermitian == R_constant_hermitian;
  }
};

HermiticityReport hermiticity_report(const Setup& s, const GramData& g);

struct Decomposition {
  VecC c;
  VecC xi_perp;
};
// ξ = b̂ c + ξ_⊥ with 𝒢_b* ξ_⊥ = 0
Decomposition decompose_coefficients(const GramData& g, const VecC& xi);

VecC c_functional(const Setup& s, const VecC& xi);

struct IdentityResiduals {
  std::optional<double> constant_R;   // ℳξ = 𝒭 c(ξ), Hermitian 𝒢_Z only
  std::optional<double> kmin_perp;    // 𝒢_b*𝒢^{-1}(𝒢_Z* − 𝒢_Z) b̂ c = 0, m > 1
  std::optional<double> gz_skew_identity;      // 𝒢_b*𝒢^{-1}(𝒢_Z* − 𝒢_Z)ξ = Σ_j conj(1/b_j)[ℳ*c(ξ)]_σj, m > 1
  double chi_M_identity = 0.0;                // 𝒢^{-1}(𝒢_Z*ξ − ℳ*c(ξ)) = (Z_d − 𝒳ℳ)ξ
  double R_difference = 0.0;          // ℳ_{σα'} − conj ℳ_{σ'α} = (z_j' − z̄_j) 𝒢_αα'
};

// Residuals are maxima over `samples` random coefficient vectors drawn from `seed`.
IdentityResiduals identity_checks(const Setup& s, const GramData& g, std::uint64_t seed = 1,
                                  int samples = 8);

// eigenpairs (z, χ) of (z 𝒢_min − Δ) χ = 0 and the residual ‖𝒢_b*(Z_d − z) b̂ χ‖
double delta_hat_eigen_residual(const GramData& g);

// Gram matrix recomputed from the deficiency vectors, independent of build_gram.
MatC gram_from_vectors(const Setup& s);

}  // namespace peakmodel
