#include "peakmodel/reference_space.hpp"

namespace peakmodel {

namespace {

VecC lam(const KhatFrame& fr) { return fr.s().model.eigenvalues.cast<cplx>(); }

void check_n(const KhatFrame& fr, const VecC& u) {
  if (u.size() != fr.s().N) throw Error(ErrorCode::DimensionMismatch, "vector must have length N");
}

}  // namespace

KhatFrame make_frame(const Peak& p) {
  if (p.s.N < p.s.md())
    throw Error(ErrorCode::InsufficientDimension, "reference frame needs N >= m*d");
  KhatFrame fr;
  fr.peak = std::make_shared<const Peak>(p);
  const Setup& s = p.s;
  fr.ghat.resize(s.N, s.md());
  for (int sg = 0; sg < s.d; ++sg)
    for (int j = 0; j < s.m; ++j)
      fr.ghat.col(s.alpha(sg, j)) = deficiency_g(s, sg, s.Z.z[j], Deficiency::ghat);
  fr.phihat = s.P.cwiseSqrt().cast<cplx>().cwiseInverse().asDiagonal() * s.family.phi;
  // QR of ĝ rather than ĝ𝒢^{-1}ĝ*: the projection then loses accuracy like cond(ĝ), not cond(𝒢)
  const Eigen::HouseholderQR<MatC> qr(fr.ghat);
  fr.Qk = qr.householderQ() * MatC::Identity(s.N, s.md());
  fr.Rk = qr.matrixQR().topRows(s.md()).triangularView<Eigen::Upper>();
  fr.P_proj = fr.Qk * fr.Qk.adjoint();
  return fr;
}

VecC d_of(const KhatFrame& fr, const VecC& u) {
  check_n(fr, u);
  return fr.Rk.triangularView<Eigen::Upper>().solve(fr.Qk.adjoint() * u);
}

VecC c_of(const KhatFrame& fr, const VecC& u) { return c_functional(fr.s(), d_of(fr, u)); }

VecC l0star_apply(const KhatFrame& fr, const VecC& u) {
  check_n(fr, u);
  const VecC w = u - fr.P_proj * u;
  return lam(fr).cwiseProduct(w) + fr.ghat * fr.g().zd.cwiseProduct(d_of(fr, u));
}

VecC ghat_z(const KhatFrame& fr, cplx z, const VecC& c) {
  return deficiency_block(fr.s(), z, Deficiency::ghat) * c;
}

VecC evaluate(const KhatFrame& fr, const VonNeumannCoords& v) { return v.u_sharp + ghat_z(fr, v.z, v.c); }

VonNeumannCoords von_neumann_coords(const KhatFrame& fr, const VecC& u, cplx z) {
  check_n(fr, u);
  const Setup& s = fr.s();
  const VecC xi = d_of(fr, u);
  VecC us = u - fr.P_proj * u;
  const MatC gz = deficiency_block(s, z, Deficiency::ghat);
  for (int sg = 0; sg < s.d; ++sg)
    for (int j = 0; j < s.m; ++j) {
      const Index a = s.alpha(sg, j);
      us += xi[a] * (fr.ghat.col(a) - gz.col(sg));
    }
  return {us, c_functional(s, xi), z};
}

VecC l0star_von_neumann(const KhatFrame& fr, const VonNeumannCoords& v) {
  return lam(fr).cwiseProduct(v.u_sharp) + v.z * ghat_z(fr, v.z, v.c);
}

BoundaryValues gammahat(const KhatFrame& fr, const VecC& u_sharp, const VecC& c, cplx z) {
  check_n(fr, u_sharp);
  return {c, fr.phihat.adjoint() * u_sharp + admissible_R(fr.s(), z) * c};
}

VecC u_prime(const KhatFrame& fr, const PrimeCoords& pc) {
  check_n(fr, pc.f_nat);
  const VecC kmin = fr.ghat * (fr.g().bhat * pc.c);
  return pc.f_nat + resolvent_L(fr.s().model, pc.z_ref, kmin);
}

VecC embed_prime(const KhatFrame& fr, const PrimeCoords& pc, const VecC& xi) {
  return u_prime(fr, pc) + fr.ghat * xi;
}

VonNeumannCoords prime_to_von_neumann(const KhatFrame& fr, const PrimeCoords& pc, const VecC& xi, cplx z) {
  const Setup& s = fr.s();
  VecC us = u_prime(fr, pc);
  const MatC gz = deficiency_block(s, z, Deficiency::ghat);
  for (int sg = 0; sg < s.d; ++sg)
    for (int j = 0; j < s.m; ++j) {
      const Index a = s.alpha(sg, j);
      us += xi[a] * (fr.ghat.col(a) - gz.col(sg));
    }
  return {us, c_functional(s, xi), z};
}

BoundaryValues gammahat_prime(const KhatFrame& fr, const PrimeCoords& pc, const VecC& xi) {
  return {c_functional(fr.s(), xi), fr.phihat.adjoint() * u_prime(fr, pc) + fr.g().Mcal * xi};
}

VecC ahat_max_apply(const KhatFrame& fr, const PrimeCoords& pc, const VecC& xi) {
  return lam(fr).cwiseProduct(u_prime(fr, pc)) + fr.ghat * fr.g().zd.cwiseProduct(xi);
}

VecC ahat_defect(const KhatFrame& fr, const PrimeCoords& pc) {
  return fr.phihat * c_of(fr, u_prime(fr, pc));
}

double d_of_L_identity_check(const KhatFrame& fr, const VecC& u) {
  check_n(fr, u);
  const GramData& g = fr.g();
  const VecC lhs = d_of(fr, lam(fr).cwiseProduct(u));
  const VecC t1 = g.X * (fr.phihat.adjoint() * u);
  const VecC t2 = g.Ginv * (g.GZ.adjoint() * d_of(fr, u));
  const double sc = std::max({lhs.norm(), t1.norm(), t2.norm(), 1e-300});
  return (lhs - t1 - t2).norm() / sc;
}

TripleHandle reference_handle(const KhatFrame& fr0) {
  auto fr = std::make_shared<const KhatFrame>(fr0);
  TripleHandle h;
  h.tag = TripleTag::reference;
  h.d = fr->s().d;
  h.dim = fr->s().N;
  h.resolvent0 = [fr](cplx z, const VecC& v) { return resolvent_L(fr->s().model, z, v); };
  h.gamma = [fr](cplx z, const VecC& c) { return ghat_z(*fr, z, c); };
  h.gamma_adj = [fr](cplx z, const VecC& v) {
    return VecC(deficiency_block(fr->s(), std::conj(z), Deficiency::ghat).adjoint() * v);
  };
  h.weyl = [fr](cplx z) { return admissible_R(fr->s(), z); };
  h.inner = [](const VecC& a, const VecC& b) { return a.dot(b); };
  h.graph_residual = [fr](const LinearRelationFD& t, cplx z, const VecC& v, const KreinResult& r) {
    const double sc = std::max({v.norm(), r.y.norm(), 1e-300});
    const VecC l = fr->s().model.eigenvalues.cast<cplx>();
    const double eq = ((l.array() - z).matrix().cwiseProduct(r.y0) - v).norm() / sc;
    const double split = (r.y - r.y0 - ghat_z(*fr, z, r.h)).norm() / sc;
    const BoundaryValues bv = gammahat(*fr, r.y0, r.h, z);
    return eq + split + membership_residual(t, bv.gamma0, bv.gamma1);
  };
  return h;
}

}  // namespace peakmodel
