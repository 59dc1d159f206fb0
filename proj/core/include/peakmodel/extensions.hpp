#pragma once

// Boundary parameters Θ ⊂ ℂ^d × ℂ^d and the Krein–Naimark resolvent
//   R_Θ(z) = R_0(z) + γ(z) (Θ − M(z))^{-1} γ(z̄)*
// shared by every triple in the library.

#include <functional>
#include <string>
#include <vector>

#include "peakmodel/peak_space.hpp"

namespace peakmodel {

// Θ = {(C x, D x) : x ∈ ℂ^p}
struct LinearRelationFD {
  MatC C;
  MatC D;
  int d() const { return static_cast<int>(C.rows()); }
  Index p() const { return C.cols(); }
};

LinearRelationFD make_relation(const MatC& C, const MatC& D);
LinearRelationFD relation_zero_domain(int d);        // {0} × ℂ^d
LinearRelationFD relation_graph(const MatC& T);      // {(x, T x)}

bool is_symmetric(const LinearRelationFD& t, double tol = 1e-10);
bool is_self_adjoint(const LinearRelationFD& t, double tol = 1e-10);

// Θ* = {(y, y') : C* y' = D* y}
LinearRelationFD relation_adjoint(const LinearRelationFD& t);

// sine of the largest principal angle; 1 if the dimensions differ
double subspace_distance(const LinearRelationFD& a, const LinearRelationFD& b);

// distance of (a, b) from Θ, relative to ‖(a, b)‖
double membership_residual(const LinearRelationFD& t, const VecC& a, const VecC& b);

// Same subspace with orthonormal generators.
LinearRelationFD orthonormalized(const LinearRelationFD& t);

// (Θ − M)^{-1} = C (D − M C)^{-1}
MatC theta_minus_M_inverse(const LinearRelationFD& t, const MatC& M);

enum class TripleTag { classical, reference, peak, b_branch, omega };
std::string tag_name(TripleTag t);

struct KreinResult {
  VecC y;   // R_Θ(z) v
  VecC y0;  // R_0(z) v
  VecC h;   // (Θ − M(z))^{-1} γ(z̄)* v
};

// Evaluators of one triple.  Vectors are flat coordinates of the triple's space.
struct TripleHandle {
  TripleTag tag = TripleTag::classical;
  int d = 1;
  Index dim = 0;
  std::function<VecC(cplx, const VecC&)> resolvent0;   // R_0(z) v
  std::function<VecC(cplx, const VecC&)> gamma;        // γ(z) c
  std::function<VecC(cplx, const VecC&)> gamma_adj;    // γ(z̄)* v
  std::function<MatC(cplx)> weyl;                      // M(z)
  std::function<cplx(const VecC&, const VecC&)> inner;
  // graph check of a Krein output: (Γ ŷ ∈ Θ, (T_max − z) ŷ ∋ v), relative
  std::function<double(const LinearRelationFD&, cplx, const VecC&, const KreinResult&)> graph_residual;
};

KreinResult krein_solve(const TripleHandle& h, const LinearRelationFD& t, cplx z, const VecC& v);
VecC krein_resolvent(const TripleHandle& h, const LinearRelationFD& t, cplx z, const VecC& v);

struct DispersionPoint {
  cplx z;
  double smin = 0.0;      // smallest singular value of D − M(z) C (orthonormal generators)
  bool skipped = false;
  std::string reason;
};
std::vector<DispersionPoint> dispersion_scan(const TripleHandle& h, const LinearRelationFD& t,
                                             const std::vector<cplx>& grid);

// Triple for L*_min on H_m: R_0 = (L − z)^{-1}, γ(z) = G_z(·), M = R.
TripleHandle classical_handle(const Setup& s);
// Triple (ℂ^d, Γ̃_0, Γ̃_1) for A_max on ℋ.
TripleHandle peak_handle(const Peak& p);
// Relation branch B_max (m > 1), distinguished B_0.
TripleHandle b_branch_handle(const Peak& p);

}  // namespace peakmodel
