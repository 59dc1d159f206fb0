#include "peakmodel/extensions.hpp"

#include <memory>
#include <sstream>

namespace peakmodel {

namespace {

MatC stacked(const LinearRelationFD& t) {
  MatC S(2 * t.d(), t.p());
  S << t.C, t.D;
  return S;
}

MatC orthonormal_range(const MatC& S) {
  Eigen::JacobiSVD<MatC> svd(S, Eigen::ComputeThinU);
  const VecR& sv = svd.singularValues();
  Index r = 0;
  while (r < sv.size() && sv[r] > 1e-12 * std::max(sv[0], 1e-300)) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace

LinearRelationFD make_relation(const MatC& C, const MatC& D) {
  if (C.rows() != D.rows() || C.cols() != D.cols() || C.rows() < 1)
    throw Error(ErrorCode::InvalidRelation, "C and D must have equal shape d×p");
  if (C.cols() > 2 * C.rows())
    throw Error(ErrorCode::InvalidRelation, "more generators than 2d");
  LinearRelationFD t{C, D};
  if (t.p() > 0) {
    Eigen::JacobiSVD<MatC> svd(stacked(t));
    const VecR& sv = svd.singularValues();
    if (!(sv[sv.size() - 1] > 1e-12 * std::max(sv[0], 1e-300)))
      throw Error(ErrorCode::InvalidRelation, "[C; D] is not of full column rank");
  }
  return t;
}

LinearRelationFD relation_zero_domain(int d) {
  return {MatC::Zero(d, d), MatC::Identity(d, d)};
}

LinearRelationFD relation_graph(const MatC& T) {
  if (T.rows() != T.cols()) throw Error(ErrorCode::InvalidRelation, "graph matrix must be square");
  return {MatC::Identity(T.rows(), T.rows()), T};
}

bool is_symmetric(const LinearRelationFD& t, double tol) {
  const MatC A = t.C.adjoint() * t.D;
  return (A - A.adjoint()).norm() <= tol * std::max(1.0, t.C.norm() * t.D.norm());
}

bool is_self_adjoint(const LinearRelationFD& t, double tol) {
  return t.p() == t.d() && is_symmetric(t, tol);
}

LinearRelationFD relation_adjoint(const LinearRelationFD& t) {
  const int d = t.d();
  // kernel of [−D*, C*] acting on (y; y')
  MatC K(t.p(), 2 * d);
  K << -t.D.adjoint(), t.C.adjoint();
  MatC basis;
  if (t.p() == 0) {
    basis = MatC::Identity(2 * d, 2 * d);
  } else {
    Eigen::JacobiSVD<MatC> svd(K, Eigen::ComputeFullV);
    const VecR& sv = svd.singularValues();
    Index r = 0;
    while (r < sv.size() && sv[r] > 1e-12 * std::max(sv[0], 1e-300)) ++r;
    basis = svd.matrixV().rightCols(2 * d - r);
  }
  return {basis.topRows(d), basis.bottomRows(d)};
}

LinearRelationFD orthonormalized(const LinearRelationFD& t) {
  const MatC Q = orthonormal_range(stacked(t));
  return {Q.topRows(t.d()), Q.bottomRows(t.d())};
}

double subspace_distance(const LinearRelationFD& a, const LinearRelationFD& b) {
  const MatC Qa = orthonormal_range(stacked(a));
  const MatC Qb = orthonormal_range(stacked(b));
  if (Qa.cols() != Qb.cols()) return 1.0;
  if (Qa.cols() == 0) return 0.0;
  const MatC R = Qb - Qa * (Qa.adjoint() * Qb);
  Eigen::JacobiSVD<MatC> svd(R);
  return svd.singularValues()[0];
}

double membership_residual(const LinearRelationFD& t, const VecC& a, const VecC& b) {
  VecC v(2 * t.d());
  v << a, b;
  const double n = v.norm();
  if (n == 0.0) return 0.0;
  const MatC Q = orthonormal_range(stacked(t));
  return (v - Q * (Q.adjoint() * v)).norm() / n;
}

MatC theta_minus_M_inverse(const LinearRelationFD& t, const MatC& M) {
  if (t.p() != t.d())
    throw Error(ErrorCode::NotInResolventSet, "relation is not d-dimensional; Θ − M(z) is not boundedly invertible");
  const MatC X = t.D - M * t.C;
  Eigen::JacobiSVD<MatC> svd(X);
  const VecR& sv = svd.singularValues();
  // relative to the size of the terms, so that d = 1 is detected too
  const double scale = std::max(t.D.norm() + M.norm() * t.C.norm(), 1e-300);
  if (!(sv[sv.size() - 1] > 1e-12 * scale)) {
    std::ostringstream os;
    os << "D - M(z) C is singular (smallest singular value " << sv[sv.size() - 1] << " relative to " << scale << ")";
    throw Error(ErrorCode::NotInResolventSet, os.str());
  }
  return t.C * X.partialPivLu().inverse();
}

std::string tag_name(TripleTag t) {
  switch (t) {
    case TripleTag::classical: return "classical";
    case TripleTag::reference: return "reference";
    case TripleTag::peak: return "peak";
    case TripleTag::b_branch: return "b";
    case TripleTag::omega: return "omega";
  }
  return "unknown";
}

KreinResult krein_solve(const TripleHandle& h, const LinearRelationFD& t, cplx z, const VecC& v) {
  if (t.d() != h.d) throw Error(ErrorCode::DimensionMismatch, "relation dimension differs from the triple");
  if (v.size() != h.dim) throw Error(ErrorCode::DimensionMismatch, "input vector has wrong length");
  KreinResult r;
  r.y0 = h.resolvent0(z, v);
  const MatC K = theta_minus_M_inverse(t, h.weyl(z));
  r.h = K * h.gamma_adj(z, v);
  r.y = r.y0 + h.gamma(z, r.h);
  return r;
}

VecC krein_resolvent(const TripleHandle& h, const LinearRelationFD& t, cplx z, const VecC& v) {
  return krein_solve(h, t, z, v).y;
}

std::vector<DispersionPoint> dispersion_scan(const TripleHandle& h, const LinearRelationFD& t,
                                             const std::vector<cplx>& grid) {
  const LinearRelationFD q = orthonormalized(t);
  std::vector<DispersionPoint> out;
  out.reserve(grid.size());
  for (const cplx z : grid) {
    DispersionPoint pt{};
    pt.z = z;
    try {
      const MatC X = q.D - h.weyl(z) * q.C;
      Eigen::JacobiSVD<MatC> svd(X);
      pt.smin = svd.singularValues()[svd.singularValues().size() - 1];
    } catch (const Error& e) {
      pt.skipped = true;
      pt.reason = std::string(code_name(e.code()));
    }
    out.push_back(pt);
  }
  return out;
}

TripleHandle classical_handle(const Setup& s0) {
  auto s = std::make_shared<const Setup>(s0);
  TripleHandle h;
  h.tag = TripleTag::classical;
  h.d = s->d;
  h.dim = s->N;
  h.resolvent0 = [s](cplx z, const VecC& v) { return resolvent_L(s->model, z, v); };
  h.gamma = [s](cplx z, const VecC& c) { return VecC(deficiency_block(*s, z, Deficiency::G) * c); };
  h.gamma_adj = [s](cplx z, const VecC& v) {
    return VecC(s->family.phi.adjoint() * resolvent_L(s->model, z, v));
  };
  h.weyl = [s](cplx z) { return admissible_R(*s, z); };
  h.inner = [s](const VecC& a, const VecC& b) { return a.dot(s->P.cast<cplx>().cwiseProduct(b)); };
  h.graph_residual = [s](const LinearRelationFD& t, cplx z, const VecC& v, const KreinResult& r) {
    // ŷ = f# + G_z(c) with f# = y0, c = h; (L* − z) ŷ = (L − z) f#
    const VecC lam = s->model.eigenvalues.cast<cplx>();
    const double sc = std::max({v.norm(), r.y.norm(), 1e-300});
    const double eq = ((lam.array() - z).matrix().cwiseProduct(r.y0) - v).norm() / sc;
    const double split = (r.y - r.y0 - deficiency_block(*s, z, Deficiency::G) * r.h).norm() / sc;
    const VecC g1 = s->family.phi.adjoint() * r.y0 + admissible_R(*s, z) * r.h;
    return eq + split + membership_residual(t, r.h, g1);
  };
  return h;
}

TripleHandle peak_handle(const Peak& p0) {
  auto p = std::make_shared<const Peak>(p0);
  TripleHandle h;
  h.tag = TripleTag::peak;
  h.d = p->s.d;
  h.dim = p->s.N + p->s.md();
  h.resolvent0 = [p](cplx z, const VecC& v) { return flatten(a0_resolvent(*p, z, unflatten(p->s, v))); };
  h.gamma = [p](cplx z, const VecC& c) { return flatten(peak_gamma(*p, z, c)); };
  h.gamma_adj = [p](cplx z, const VecC& v) { return peak_gamma_adjoint(*p, z, unflatten(p->s, v)); };
  h.weyl = [p](cplx z) { return weyl_peak(*p, z).M; };
  h.inner = [p](const VecC& a, const VecC& b) { return inner_H(*p, unflatten(p->s, a), unflatten(p->s, b)); };
  h.graph_residual = [p](const LinearRelationFD& t, cplx z, const VecC& v, const KreinResult& r) {
    const PeakVector y0 = unflatten(p->s, r.y0);
    const ExtendedVector g = peak_gamma_extended(*p, z, r.h);
    const ExtendedVector ev{y0.f.cwiseQuotient(p->s.p), r.h, y0.xi + g.xi, z};
    const PeakVector vv = unflatten(p->s, v);
    const PeakVector y = unflatten(p->s, r.y);
    const double sc = std::max({norm_H(*p, vv), norm_H(*p, y) * (1.0 + std::abs(z)), 1e-300});
    const double eq = norm_H(*p, amax_apply(*p, ev) - z * embed_extended(*p, ev) - vv) / sc;
    const double emb = norm_H(*p, embed_extended(*p, ev) - y) / sc;
    const BoundaryValues bv = boundary_gamma(*p, ev);
    return eq + emb + membership_residual(t, bv.gamma0, bv.gamma1);
  };
  return h;
}

TripleHandle b_branch_handle(const Peak& p0) {
  if (p0.s.m < 2)
    throw Error(ErrorCode::OrderTooSmall, "relation branch needs m > 1 (for m = 1, B_max = A_max)");
  auto p = std::make_shared<const Peak>(p0);
  TripleHandle h;
  h.tag = TripleTag::b_branch;
  h.d = p->s.d;
  h.dim = p->s.N + p->s.md();
  h.resolvent0 = [p](cplx z, const VecC& v) { return flatten(b0_resolvent(*p, z, unflatten(p->s, v))); };
  h.gamma = [p](cplx z, const VecC& c) { return flatten(b_gamma(*p, z, c)); };
  h.gamma_adj = [p](cplx z, const VecC& v) { return b_gamma_adjoint(*p, z, unflatten(p->s, v)); };
  h.weyl = [p](cplx z) { return weyl_b_branch(*p, z); };
  h.inner = [p](const VecC& a, const VecC& b) { return inner_H(*p, unflatten(p->s, a), unflatten(p->s, b)); };
  h.graph_residual = [p](const LinearRelationFD& t, cplx z, const VecC& v, const KreinResult& r) {
    const PeakVector y0 = unflatten(p->s, r.y0);
    const ExtendedVector g = b_gamma_extended(*p, z, r.h);
    const ExtendedVector ev{y0.f.cwiseQuotient(p->s.p), r.h, y0.xi + g.xi, z};
    const PeakVector vv = unflatten(p->s, v);
    const PeakVector y = unflatten(p->s, r.y);
    const double sc = std::max({norm_H(*p, vv), norm_H(*p, y) * (1.0 + std::abs(z)), 1e-300});
    // B_max acts like A_max on ℋ_min-coefficients, modulo the multivalued part ℋ_⊥
    const PeakVector res = amax_apply(*p, ev) - z * embed_extended(*p, ev) - vv;
    const PeakVector res_f{res.f, VecC::Zero(p->s.md())};
    const VecC proj = p->g.Gb.adjoint() * res.xi;
    const double eq = (norm_H(*p, res_f) +
                       std::sqrt(std::max(0.0, proj.dot(p->g.Gmin.ldlt().solve(proj)).real()))) / sc;
    const VecC chi = p->g.Gmin.ldlt().solve(p->g.Gb.adjoint() * ev.xi);
    const double inmin = norm_H(*p, PeakVector{VecC::Zero(p->s.N), ev.xi - p->g.bhat * chi}) / sc;
    const double emb = norm_H(*p, embed_extended(*p, ev) - y) / sc;
    const BoundaryValues bv = boundary_gamma(*p, ev);
    return eq + inmin + emb + membership_residual(t, bv.gamma0, bv.gamma1);
  };
  return h;
}

}  // namespace peakmodel
