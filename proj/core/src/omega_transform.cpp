#include "peakmodel/omega_transform.hpp"

#include <memory>
#include <sstream>

#include "peakmodel/sampling.hpp"

namespace peakmodel {

namespace {

MatC dense_A0(const Peak& p) {
  VecC diag(p.s.N + p.s.md());
  diag << p.s.model.eigenvalues.cast<cplx>(), p.g.zd;
  return diag.asDiagonal();
}

void require_hermitian(const Peak& p) {
  if (!hermiticity_report(p.s, p.g).gz_hermitian)
    throw Error(ErrorCode::NonHermitianGZ, "the Omega construction needs a Hermitian G_Z");
}

MatC orthonormal_columns(const MatC& S) {
  if (S.cols() == 0) return MatC(S.rows(), 0);
  Eigen::JacobiSVD<MatC> svd(S, Eigen::ComputeThinU);
  const VecR& sv = svd.singularValues();
  Index r = 0;
  while (r < sv.size() && sv[r] > 1e-12 * std::max(sv[0], 1e-300)) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace

PeakVector IotaDeformation::apply(const Setup& s, const PeakVector& v) const {
  return unflatten(s, iota * flatten(v));
}

IotaDeformation make_iota(const Peak& p, const IotaSpec& spec) {
  const Index n = p.s.N + p.s.md();
  IotaDeformation io;
  const MatC W = gram_H(p);
  const Eigen::LLT<MatC> llt(W);
  io.T = llt.matrixU();
  const MatC Tinv = io.T.triangularView<Eigen::Upper>().solve(MatC::Identity(n, n));

  // J = T ι T^{-1} is Hermitian positive exactly when ι is positive ℋ-self-adjoint
  MatC J = MatC::Identity(n, n);
  switch (spec.kind) {
    case IotaSpec::Kind::identity:
      break;
    case IotaSpec::Kind::random: {
      Rng rng(spec.seed);
      MatC K = random_cmat(rng, n, n);
      K /= Eigen::JacobiSVD<MatC>(K).singularValues()[0];
      const MatC A = MatC::Identity(n, n) + spec.strength * K;
      J = A * A.adjoint();
      break;
    }
    case IotaSpec::Kind::fixing: {
      MatC S(n, Index(spec.fixed.size()));
      for (std::size_t k = 0; k < spec.fixed.size(); ++k) S.col(Index(k)) = io.T * flatten(spec.fixed[k]);
      const MatC Q = orthonormal_columns(S);
      const MatC Pi = MatC::Identity(n, n) - Q * Q.adjoint();
      Rng rng(spec.seed);
      MatC K = random_cmat(rng, n, n);
      K /= Eigen::JacobiSVD<MatC>(K).singularValues()[0];
      J = MatC::Identity(n, n) + spec.strength * (Pi * K) * (Pi * K).adjoint();
      break;
    }
    case IotaSpec::Kind::from_factor: {
      if (spec.factor.rows() != n || spec.factor.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "iota factor must be (N+md)×(N+md)");
      const MatC A = io.T * spec.factor * Tinv;
      J = A * A.adjoint();
      break;
    }
  }
  J = (0.5 * (J + J.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<MatC> es(J);
  io.min_eigenvalue = es.eigenvalues()[0];
  if (!(io.min_eigenvalue > 1e-8))
    throw Error(ErrorCode::NotPositive, "iota is not positive definite");
  if (spec.kind == IotaSpec::Kind::identity) {
    io.iota = io.omega = MatC::Identity(n, n);
    return io;
  }
  io.iota = Tinv * J * io.T;
  const MatC Jh = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cast<cplx>().asDiagonal() *
                  es.eigenvectors().adjoint();
  io.omega = Tinv * Jh * io.T;
  return io;
}

double iota_selfadjoint_residual(const Peak& p, const IotaDeformation& io) {
  const MatC W = gram_H(p);
  const MatC A = W * io.iota;
  return (A - A.adjoint()).norm() / std::max(A.norm(), 1e-300);
}

bool in_sigma_iota(const Peak& p, const IotaDeformation& io, cplx z) {
  if (!(spectral_distance(p.s.model, z) > p.s.model.gap_tol)) return false;
  if (p.s.Z.contains(z, p.s.model.gap_tol)) return false;
  Eigen::ComplexEigenSolver<MatC> es(io.iota * dense_A0(p), false);
  return (es.eigenvalues().array() - z).abs().minCoeff() > p.s.model.gap_tol;
}

void require_sigma_iota(const Peak& p, const IotaDeformation& io, cplx z) {
  if (!in_sigma_iota(p, io, z)) {
    std::ostringstream os;
    os << "z = " << z << " is not in res A_0 ∩ res(iota A_0)";
    throw Error(ErrorCode::NotInSigmaIota, os.str());
  }
}

namespace {

// (ιA_0 − z)^{-1} x in flattened coordinates
VecC iota_resolvent(const Peak& p, const IotaDeformation& io, cplx z, const VecC& x) {
  const Index n = x.size();
  const MatC A = io.iota * dense_A0(p) - z * MatC::Identity(n, n);
  return A.partialPivLu().solve(x);
}

}  // namespace

ExtendedVector h_z_extended(const Peak& p, const IotaDeformation& io, cplx z, const VecC& c) {
  require_hermitian(p);
  require_sigma_iota(p, io, z);
  const ExtendedVector F = peak_gamma_extended(p, z, c);
  const VecC f = flatten(embed_extended(p, F));
  const PeakVector x = unflatten(p.s, iota_resolvent(p, io, z, z * (f - io.iota * f)));
  return {x.f.cwiseQuotient(p.s.p), c, F.xi + x.xi, z};
}

PeakVector h_z(const Peak& p, const IotaDeformation& io, cplx z, const VecC& c) {
  return embed_extended(p, h_z_extended(p, io, z, c));
}

double h_z_eigen_residual(const Peak& p, const IotaDeformation& io, cplx z, const VecC& c) {
  const ExtendedVector ev = h_z_extended(p, io, z, c);
  const PeakVector lhs = io.apply(p.s, amax_apply(p, ev));
  const PeakVector rhs = z * embed_extended(p, ev);
  const double sc = std::max({norm_H(p, lhs), norm_H(p, rhs), 1e-300});
  return norm_H(p, lhs - rhs) / sc;
}

OmegaWeyl m_omega(const Peak& p, const IotaDeformation& io, cplx z) {
  require_hermitian(p);
  require_sigma_iota(p, io, z);
  OmegaWeyl w;
  const int d = p.s.d;
  w.M.resize(d, d);
  w.M_tilde.resize(d, d);
  w.Delta.resize(d, d);
  for (int sg = 0; sg < d; ++sg) {
    const VecC e = VecC::Unit(d, sg);
    const ExtendedVector F = peak_gamma_extended(p, z, e);
    const VecC f = flatten(embed_extended(p, F));
    const PeakVector x = unflatten(p.s, iota_resolvent(p, io, z, z * (f - io.iota * f)));
    const ExtendedVector H{x.f.cwiseQuotient(p.s.p), e, F.xi + x.xi, z};
    w.M.col(sg) = boundary_gamma(p, H).gamma1;
    w.M_tilde.col(sg) = boundary_gamma(p, F).gamma1;
    w.Delta.col(sg) = boundary_gamma(p, as_extended(p, x, z)).gamma1;
  }
  return w;
}

Preservation weyl_preserved(const Peak& p, const IotaDeformation& io, cplx z) {
  require_hermitian(p);
  require_sigma_iota(p, io, z);
  Preservation r;
  if (std::abs(z) == 0.0) {
    r.preserved = true;
  } else {
    for (int sg = 0; sg < p.s.d; ++sg) {
      const PeakVector F = peak_gamma(p, z, VecC::Unit(p.s.d, sg));
      r.fix_residual = std::max(r.fix_residual, norm_H(p, io.apply(p.s, F) - F) / norm_H(p, F));
    }
    r.preserved = r.fix_residual <= 1e-9;
  }
  const OmegaWeyl w = m_omega(p, io, z);
  r.delta_norm = w.Delta.norm();
  r.weyl_norm = w.M_tilde.norm();
  r.consistent = !r.preserved || r.delta_norm < 1e-8 * r.weyl_norm;
  return r;
}

PeakVector gamma_omega(const Peak& p, const IotaDeformation& io, cplx z, const VecC& c) {
  return unflatten(p.s, io.omega.partialPivLu().solve(flatten(h_z(p, io, z, c))));
}

TripleHandle omega_handle(const Peak& p0, const IotaDeformation& io0) {
  require_hermitian(p0);
  auto p = std::make_shared<const Peak>(p0);
  auto io = std::make_shared<const IotaDeformation>(io0);
  auto omega_lu = std::make_shared<const Eigen::PartialPivLU<MatC>>(io->omega);
  TripleHandle h;
  h.tag = TripleTag::omega;
  h.d = p->s.d;
  h.dim = p->s.N + p->s.md();
  h.resolvent0 = [p, io, omega_lu](cplx z, const VecC& v) {
    require_sigma_iota(*p, *io, z);
    return VecC(omega_lu->solve(iota_resolvent(*p, *io, z, io->omega * v)));
  };
  h.gamma = [p, io, omega_lu](cplx z, const VecC& c) {
    return VecC(omega_lu->solve(flatten(h_z(*p, *io, z, c))));
  };
  h.gamma_adj = [p, io](cplx z, const VecC& v) {
    require_sigma_iota(*p, *io, z);
    const PeakVector x = unflatten(p->s, iota_resolvent(*p, *io, z, io->omega * v));
    return boundary_gamma(*p, as_extended(*p, x, z)).gamma1;
  };
  h.weyl = [p, io](cplx z) { return m_omega(*p, *io, z).M; };
  h.inner = [p](const VecC& a, const VecC& b) { return inner_H(*p, unflatten(p->s, a), unflatten(p->s, b)); };
  h.graph_residual = [p, io](const LinearRelationFD& t, cplx z, const VecC& v, const KreinResult& r) {
    // Ω y = (ιA_0 − z)^{-1} Ω v + H_z(h) must solve (ι A_max − z) Ω y = Ω v with Γ̃ Ω y ∈ Θ
    const PeakVector x = unflatten(p->s, io->omega * r.y0);
    const ExtendedVector H = h_z_extended(*p, *io, z, r.h);
    const ExtendedVector ev{x.f.cwiseQuotient(p->s.p) + H.f_sharp, r.h, x.xi + H.xi, z};
    const PeakVector Ov = unflatten(p->s, io->omega * v);
    const PeakVector Oy = unflatten(p->s, io->omega * r.y);
    const double sc = std::max({norm_H(*p, Ov), norm_H(*p, Oy) * (1.0 + std::abs(z)), 1e-300});
    const double eq = norm_H(*p, io->apply(p->s, amax_apply(*p, ev)) - z * embed_extended(*p, ev) - Ov) / sc;
    const double emb = norm_H(*p, embed_extended(*p, ev) - Oy) / sc;
    const BoundaryValues bv = boundary_gamma(*p, ev);
    return eq + emb + membership_residual(t, bv.gamma0, bv.gamma1);
  };
  return h;
}

}  // namespace peakmodel
