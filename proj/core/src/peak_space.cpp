#include "peakmodel/peak_space.hpp"

#include <sstream>

namespace peakmodel {

namespace {

void check_peak(const Setup& s, const PeakVector& v) {
  if (v.f.size() != s.N || v.xi.size() != s.md())
    throw Error(ErrorCode::DimensionMismatch, "peak vector has wrong dimensions");
}

void check_ext(const Setup& s, const ExtendedVector& ev) {
  if (ev.f_sharp.size() != s.N || ev.c.size() != s.d || ev.xi.size() != s.md())
    throw Error(ErrorCode::DimensionMismatch, "extended vector has wrong dimensions");
}

VecC lambda_c(const Setup& s) { return s.model.eigenvalues.cast<cplx>(); }

}  // namespace

Peak make_peak(const Setup& s) { return {s, build_gram(s)}; }

PeakVector zero_peak(const Setup& s) { return {VecC::Zero(s.N), VecC::Zero(s.md())}; }

VecC flatten(const PeakVector& v) {
  VecC x(v.f.size() + v.xi.size());
  x << v.f, v.xi;
  return x;
}

PeakVector unflatten(const Setup& s, const VecC& x) {
  if (x.size() != s.N + s.md()) throw Error(ErrorCode::DimensionMismatch, "flat vector has wrong length");
  return {x.head(s.N), x.tail(s.md())};
}

cplx inner_H(const Peak& p, const PeakVector& u, const PeakVector& v) {
  check_peak(p.s, u);
  check_peak(p.s, v);
  return u.f.dot(p.s.P.cast<cplx>().cwiseProduct(v.f)) + u.xi.dot(p.g.G * v.xi);
}

double norm_H(const Peak& p, const PeakVector& u) {
  return std::sqrt(std::max(0.0, inner_H(p, u, u).real()));
}

MatC gram_H(const Peak& p) {
  const Index n = p.s.N + p.s.md();
  MatC W = MatC::Zero(n, n);
  W.topLeftCorner(p.s.N, p.s.N) = p.s.P.cast<cplx>().asDiagonal();
  W.bottomRightCorner(p.s.md(), p.s.md()) = p.g.G;
  return W;
}

cplx default_z_ref(const Setup& s) { return s.Z.z[0] + cplx(0.0, 1.0 + s.model.max_abs()); }

void require_res_A0(const Peak& p, cplx z) {
  require_resolvent(p.s.model, z);
  if (p.s.Z.contains(z, p.s.model.gap_tol)) {
    std::ostringstream os;
    os << "z = " << z << " is a regular point (spectrum of Z_d)";
    throw Error(ErrorCode::RegularPointCollision, os.str());
  }
}

PeakVector a0_apply(const Peak& p, const PeakVector& v, bool star) {
  check_peak(p.s, v);
  PeakVector out;
  out.f = lambda_c(p.s).cwiseProduct(v.f);
  if (!star)
    out.xi = p.g.zd.cwiseProduct(v.xi);
  else
    out.xi = p.g.Ginv * (p.g.GZ.adjoint() * v.xi);
  return out;
}

PeakVector a0_resolvent(const Peak& p, cplx z, const PeakVector& v) {
  check_peak(p.s, v);
  require_res_A0(p, z);
  return {resolvent_L(p.s.model, z, v.f), v.xi.cwiseQuotient((p.g.zd.array() - z).matrix())};
}

cplx boundary_form_A0(const Peak& p, const PeakVector& u, const PeakVector& v) {
  return inner_H(p, u, a0_apply(p, v)) - inner_H(p, a0_apply(p, u), v);
}

cplx green_A0(const Peak& p, const PeakVector& u, const PeakVector& v) {
  return u.xi.dot(p.g.GZ * v.xi) - (p.g.GZ * u.xi).dot(v.xi);
}

cplx green_A0_alt(const Peak& p, const PeakVector& u, const PeakVector& v) {
  const VecC cu = c_functional(p.s, u.xi);
  const VecC cv = c_functional(p.s, v.xi);
  return cu.dot(p.g.Mcal * v.xi) - (p.g.Mcal * u.xi).dot(cv);
}

PeakVector embed_extended(const Peak& p, const ExtendedVector& ev) {
  check_ext(p.s, ev);
  const VecC G = deficiency_block(p.s, ev.z_ref, Deficiency::G) * ev.c;
  return {p.s.p.cwiseProduct(ev.f_sharp + G), ev.xi};
}

PeakVector amax_apply(const Peak& p, const ExtendedVector& ev) {
  check_ext(p.s, ev);
  const VecC G = deficiency_block(p.s, ev.z_ref, Deficiency::G) * ev.c;
  const VecC f = lambda_c(p.s).cwiseProduct(ev.f_sharp) + ev.z_ref * G;
  return {p.s.p.cwiseProduct(f), p.g.zd.cwiseProduct(ev.xi) + p.g.bhat * ev.c};
}

ExtendedVector as_extended(const Peak& p, const PeakVector& v, cplx z_ref) {
  check_peak(p.s, v);
  return {v.f.cwiseQuotient(p.s.p), VecC::Zero(p.s.d), v.xi, z_ref};
}

BoundaryValues boundary_gamma(const Peak& p, const ExtendedVector& ev) {
  check_ext(p.s, ev);
  BoundaryValues b;
  b.gamma0 = ev.c;
  b.gamma1 = p.s.family.phi.adjoint() * p.s.p_abs2.cast<cplx>().cwiseProduct(ev.f_sharp) +
             tilde_R(p.s, ev.z_ref) * ev.c - p.g.Gb.adjoint() * ev.xi;
  return b;
}

cplx boundary_form_Amax(const Peak& p, const ExtendedVector& u, const ExtendedVector& v) {
  return inner_H(p, embed_extended(p, u), amax_apply(p, v)) -
         inner_H(p, amax_apply(p, u), embed_extended(p, v));
}

PeakVector peak_gamma(const Peak& p, cplx z, const VecC& c) {
  return embed_extended(p, peak_gamma_extended(p, z, c));
}

ExtendedVector peak_gamma_extended(const Peak& p, cplx z, const VecC& c) {
  if (c.size() != p.s.d) throw Error(ErrorCode::DimensionMismatch, "coefficient vector must have length d");
  require_res_A0(p, z);
  const VecC xi = (p.g.bhat * c).cwiseQuotient((z - p.g.zd.array()).matrix());
  return {VecC::Zero(p.s.N), c, xi, z};
}

VecC peak_gamma_adjoint(const Peak& p, cplx z, const PeakVector& v) {
  VecC out(p.s.d);
  for (int sg = 0; sg < p.s.d; ++sg)
    out[sg] = inner_H(p, peak_gamma(p, std::conj(z), VecC::Unit(p.s.d, sg)), v);
  return out;
}

MatC Q_G(const Peak& p, cplx z) {
  require_res_A0(p, z);
  MatC Q = MatC::Zero(p.s.d, p.s.d);
  for (int j = 0; j < p.s.m; ++j) {
    const cplx w = 1.0 / ((p.s.Z.z[j] - z) * p.s.Z.b_diag[j] * p.s.Z.b_diag[j]);
    for (int a = 0; a < p.s.d; ++a)
      for (int b = 0; b < p.s.d; ++b) Q(a, b) += p.g.G(p.s.alpha(a, j), p.s.alpha(b, j)) * w;
  }
  return Q;
}

PeakWeyl weyl_peak(const Peak& p, cplx z) {
  PeakWeyl w;
  w.M.resize(p.s.d, p.s.d);
  for (int sg = 0; sg < p.s.d; ++sg)
    w.M.col(sg) = boundary_gamma(p, peak_gamma_extended(p, z, VecC::Unit(p.s.d, sg))).gamma1;
  w.M_formula = tilde_R(p.s, z) + Q_G(p, z);
  w.formal = !hermiticity_report(p.s, p.g).gz_hermitian;
  return w;
}

std::vector<PeakVector> hperp_basis(const Peak& p) {
  std::vector<PeakVector> out;
  for (Index k = 0; k < p.g.KerGbStar.cols(); ++k)
    out.push_back({VecC::Zero(p.s.N), p.g.KerGbStar.col(k)});
  return out;
}

void require_b_branch(const Peak& p, cplx z) {
  if (p.s.m < 2)
    throw Error(ErrorCode::OrderTooSmall, "relation branch needs m > 1 (for m = 1, B_max = A_max)");
  require_resolvent(p.s.model, z);
  Eigen::ComplexEigenSolver<MatC> es(p.g.DeltaHat, false);
  if ((es.eigenvalues().array() - z).abs().minCoeff() <= p.s.model.gap_tol) {
    std::ostringstream os;
    os << "z = " << z << " is an eigenvalue of DeltaHat";
    throw Error(ErrorCode::DeltaHatCollision, os.str());
  }
}

ExtendedVector b_gamma_extended(const Peak& p, cplx z, const VecC& c) {
  if (c.size() != p.s.d) throw Error(ErrorCode::DimensionMismatch, "coefficient vector must have length d");
  require_b_branch(p, z);
  const MatC A = z * MatC::Identity(p.s.d, p.s.d) - p.g.DeltaHat;
  return {VecC::Zero(p.s.N), c, p.g.bhat * A.partialPivLu().solve(c), z};
}

PeakVector b_gamma(const Peak& p, cplx z, const VecC& c) {
  return embed_extended(p, b_gamma_extended(p, z, c));
}

MatC weyl_b_branch(const Peak& p, cplx z) {
  require_b_branch(p, z);
  const MatC A = p.g.DeltaHat - z * MatC::Identity(p.s.d, p.s.d);
  return tilde_R(p.s, z) + p.g.Gmin * A.inverse();
}

namespace {

VecC b0_chi(const Peak& p, cplx z, const VecC& xi) {
  const MatC A = p.g.Delta - z * p.g.Gmin;
  return A.partialPivLu().solve(p.g.Gb.adjoint() * xi);
}

}  // namespace

PeakVector b0_resolvent(const Peak& p, cplx z, const PeakVector& v) {
  check_peak(p.s, v);
  require_b_branch(p, z);
  return {resolvent_L(p.s.model, z, v.f), p.g.bhat * b0_chi(p, z, v.xi)};
}

VecC b_gamma_adjoint(const Peak& p, cplx z, const PeakVector& v) {
  check_peak(p.s, v);
  require_b_branch(p, z);
  const VecC f = resolvent_L(p.s.model, z, v.f);
  return p.s.family.phi.adjoint() * p.s.p.conjugate().cwiseProduct(f) - p.g.Gmin * b0_chi(p, z, v.xi);
}

double b0_graph_residual(const Peak& p, cplx z, const PeakVector& y, const PeakVector& v) {
  const double scale = std::max({norm_H(p, v), norm_H(p, y) * (1.0 + std::abs(z)), 1e-300});
  const VecC fres = (lambda_c(p.s).array() - z).matrix().cwiseProduct(y.f) - v.f;
  const VecC chi = p.g.Gmin.ldlt().solve(p.g.Gb.adjoint() * y.xi);
  const PeakVector off_min{VecC::Zero(p.s.N), y.xi - p.g.bhat * chi};
  const MatC shift = p.g.DeltaHat - z * MatC::Identity(p.s.d, p.s.d);
  const VecC xres = p.g.Gb.adjoint() * (v.xi - p.g.bhat * (shift * chi));
  const double r1 = std::sqrt(std::max(0.0, fres.dot(p.s.P.cast<cplx>().cwiseProduct(fres)).real()));
  const double r2 = norm_H(p, off_min);
  // 𝒢_b* ξ measured in the dual norm ‖𝒢_min^{-1/2} ·‖
  const double r3 = std::sqrt(std::max(0.0, xres.dot(p.g.Gmin.ldlt().solve(xres)).real()));
  return (r1 + r2 + r3) / scale;
}

}  // namespace peakmodel
