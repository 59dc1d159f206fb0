#include "peakmodel/perturbation.hpp"

#include <sstream>

namespace peakmodel {

FunctionalFamily make_family(const SpectralModel& model, const MatC& phi) {
  if (phi.rows() != model.size())
    throw Error(ErrorCode::DimensionMismatch, "functional coordinates must have length N");
  if (phi.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "need at least one functional");
  if (model.size() < Index(model.m) * phi.cols()) {
    std::ostringstream os;
    os << "N=" << model.size() << " < m*d=" << model.m * phi.cols();
    throw Error(ErrorCode::InsufficientDimension, os.str());
  }
  if (!phi.allFinite()) throw Error(ErrorCode::DimensionMismatch, "functional is not finite");
  Eigen::JacobiSVD<MatC> svd(phi);
  const VecR sv = svd.singularValues();
  if (!(sv[sv.size() - 1] > 1e-10 * sv[0]))
    throw Error(ErrorCode::DependentFunctionals, "functionals are linearly dependent");
  return {phi};
}

Setup make_setup(const SpectralModel& model, const RegularSet& Z, const FunctionalFamily& family,
                 Scaling scaling, const AdmissibleMode& mode) {
  if (Z.size() != model.m) throw Error(ErrorCode::DimensionMismatch, "|Z| must equal m");
  if (family.phi.rows() != model.size())
    throw Error(ErrorCode::DimensionMismatch, "functional coordinates must have length N");
  Setup s;
  s.model = model;
  s.Z = Z;
  s.family = family;
  s.scaling = scaling;
  s.mode = mode;
  s.N = model.size();
  s.m = model.m;
  s.d = family.d();
  s.P = scale_weights(model, Z, scaling);
  s.p = p_of_L(model, Z, scaling);
  s.p_abs2 = s.p.cwiseAbs2();
  s.R_shift = MatC::Zero(s.d, s.d);

  if (mode.kind == AdmissibleMode::Kind::renormalized) {
    if (mode.R0.rows() != s.d || mode.R0.cols() != s.d)
      throw Error(ErrorCode::DimensionMismatch, "R0 must be d×d");
    require_resolvent(model, mode.z0);
    // R(z) = R_direct(z) + C with C = R0 − R_direct(z0).  C must be Hermitian
    // for R(z)* = R(z̄); for real z0 this is just R0 = R0*.
    s.R_shift = mode.R0 - R_direct(s, mode.z0);
    const double scale = std::max(1.0, mode.R0.norm());
    if ((s.R_shift - s.R_shift.adjoint()).norm() > 1e-10 * scale)
      throw Error(ErrorCode::NonHermitianRenormalization,
                  "renormalization constant R0 - R_direct(z0) is not Hermitian");
  }
  return s;
}

VecC deficiency_g(const Setup& s, int sigma, cplx z, Deficiency kind) {
  if (sigma < 0 || sigma >= s.d) throw Error(ErrorCode::IndexOutOfRange, "functional index out of range");
  VecC g = resolvent_L(s.model, z, s.family.phi.col(sigma));
  switch (kind) {
    case Deficiency::g: return g;
    case Deficiency::G: return g.cwiseQuotient(s.P.cast<cplx>());
    case Deficiency::ghat: return g.cwiseQuotient(s.P.cwiseSqrt().cast<cplx>());
    case Deficiency::Gtilde: return s.p.cwiseProduct(g.cwiseQuotient(s.P.cast<cplx>()));
  }
  return g;
}

MatC deficiency_block(const Setup& s, cplx z, Deficiency kind) {
  MatC out(s.N, s.d);
  for (int sg = 0; sg < s.d; ++sg) out.col(sg) = deficiency_g(s, sg, z, kind);
  return out;
}

VecC F_vector(const Setup& s, cplx z, const VecC& c) {
  if (c.size() != s.d) throw Error(ErrorCode::DimensionMismatch, "coefficient vector must have length d");
  require_resolvent(s.model, z);
  if (s.Z.contains(z, s.model.gap_tol))
    throw Error(ErrorCode::RegularPointCollision, "z coincides with a regular point");
  return deficiency_block(s, z) * c / s.Z.b(z);
}

MatC M_pair(const Setup& s, cplx z, cplx w) {
  require_resolvent(s.model, z);
  require_resolvent(s.model, w);
  const auto lam = s.model.eigenvalues.cast<cplx>().array();
  const VecC wt = (s.P.cast<cplx>().array() * (lam - z) * (lam - w)).inverse().matrix();
  return s.family.phi.adjoint() * wt.asDiagonal() * s.family.phi;
}

MatC R_direct(const Setup& s, cplx z, bool tilde_weight) {
  require_resolvent(s.model, z);
  const auto lam = s.model.eigenvalues.cast<cplx>().array();
  VecC wt = (s.P.cast<cplx>().array() * (lam - z)).inverse().matrix();
  if (tilde_weight) wt = wt.cwiseProduct(s.p_abs2.cast<cplx>());
  return s.family.phi.adjoint() * wt.asDiagonal() * s.family.phi;
}

MatC admissible_R(const Setup& s, cplx z) {
  if (s.mode.kind == AdmissibleMode::Kind::direct) return R_direct(s, z);
  return s.mode.R0 + (z - s.mode.z0) * M_pair(s, z, s.mode.z0);
}

MatC tilde_R(const Setup& s, cplx z) { return R_direct(s, z, true) + s.R_shift; }

}  // namespace peakmodel
