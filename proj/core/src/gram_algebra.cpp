#include "peakmodel/gram_algebra.hpp"

#include <sstream>

#include "peakmodel/sampling.hpp"

namespace peakmodel {

namespace {

MatC pinv(const MatC& A) {
  Eigen::JacobiSVD<MatC> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecR& sv = svd.singularValues();
  const double cut = 1e-13 * sv[0] * double(std::max(A.rows(), A.cols()));
  VecC inv(sv.size());
  for (Index k = 0; k < sv.size(); ++k) inv[k] = sv[k] > cut ? 1.0 / sv[k] : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace

MatC bhat_explicit(const Setup& s) {
  MatC B = MatC::Zero(s.md(), s.d);
  for (int sg = 0; sg < s.d; ++sg)
    for (int j = 0; j < s.m; ++j) B(s.alpha(sg, j), sg) = 1.0 / s.Z.b_diag[j];
  return B;
}

MatC sum_matrix(const Setup& s) {
  MatC E = MatC::Zero(s.md(), s.d);
  for (int sg = 0; sg < s.d; ++sg)
    for (int j = 0; j < s.m; ++j) E(s.alpha(sg, j), sg) = 1.0;
  return E;
}

MatC gram_from_vectors(const Setup& s) {
  MatC g(s.N, s.md());
  for (int sg = 0; sg < s.d; ++sg)
    for (int j = 0; j < s.m; ++j) g.col(s.alpha(sg, j)) = deficiency_g(s, sg, s.Z.z[j]);
  return g.adjoint() * s.P.cast<cplx>().cwiseInverse().asDiagonal() * g;
}

GramData build_gram(const Setup& s) {
  // ⟨g_σ(z_j), g_σ'(z_j')⟩_{-m} = M_pair(z̄_j, z_j')_{σσ'}
  MatC G(s.md(), s.md());
  for (int j = 0; j < s.m; ++j)
    for (int k = 0; k < s.m; ++k) {
      const MatC blk = M_pair(s, std::conj(s.Z.z[j]), s.Z.z[k]);
      for (int a = 0; a < s.d; ++a)
        for (int b = 0; b < s.d; ++b) G(s.alpha(a, j), s.alpha(b, k)) = blk(a, b);
    }
  G = (0.5 * (G + G.adjoint())).eval();
  return gram_from_matrix(s, G);
}

GramData gram_from_matrix(const Setup& s, const MatC& G) {
  if (G.rows() != s.md() || G.cols() != s.md())
    throw Error(ErrorCode::DimensionMismatch, "Gram matrix must be md×md");
  GramData g;
  g.G = G;

  Eigen::SelfAdjointEigenSolver<MatC> es(G);
  const VecR ev = es.eigenvalues();
  if (!(ev[0] > 1e-14 * std::abs(ev[ev.size() - 1])))
    throw Error(ErrorCode::DependentDeficiencyVectors,
                "deficiency vectors g_sigma(z_j) are numerically dependent");
  g.cond_G = ev[ev.size() - 1] / ev[0];
  if (g.cond_G > 1e10) {
    std::ostringstream os;
    os << "Gram matrix condition number " << g.cond_G << " exceeds 1e10";
    g.warnings.push_back(os.str());
  }
  const VecC bd = s.Z.b_diag;
  if (bd.cwiseAbs().minCoeff() < 1e-6 * bd.cwiseAbs().maxCoeff())
    g.warnings.push_back("regular points nearly coincide: min|b_j(z_j)| < 1e-6 max|b_j(z_j)|");

  const Eigen::LLT<MatC> llt(G);
  g.Ginv = llt.solve(MatC::Identity(s.md(), s.md()));
  g.Gb = G * bhat_explicit(s);
  g.bhat = llt.solve(g.Gb);
  g.Gmin = g.Gb.adjoint() * g.bhat;
  g.Gmin = (0.5 * (g.Gmin + g.Gmin.adjoint())).eval();

  g.zd.resize(s.md());
  for (int sg = 0; sg < s.d; ++sg)
    for (int j = 0; j < s.m; ++j) g.zd[s.alpha(sg, j)] = s.Z.z[j];
  g.GZ = G * g.zd.asDiagonal();

  const MatC GbStar = g.Gb.adjoint();
  g.Hb = pinv(GbStar);
  g.HbOp = g.Hb * GbStar * g.Hb;

  Eigen::HouseholderQR<MatC> qr(g.Gb);
  const MatC Q = qr.householderQ() * MatC::Identity(s.md(), s.md());
  g.KerGbStar = Q.rightCols(s.md() - s.d);

  g.Delta = GbStar * g.zd.asDiagonal() * g.bhat;
  g.DeltaHat = g.Gmin.ldlt().solve(g.Delta);
  g.X = g.Ginv * sum_matrix(s);

  g.Mcal.resize(s.d, s.md());
  for (int k = 0; k < s.m; ++k) {
    const MatC R = admissible_R(s, s.Z.z[k]);
    for (int b = 0; b < s.d; ++b) g.Mcal.col(s.alpha(b, k)) = R.col(b);
  }
  return g;
}

HermiticityReport hermiticity_report(const Setup& s, const GramData& g) {
  HermiticityReport r;
  const double tol = 1e-9;
  r.gz_residual = (g.GZ - g.GZ.adjoint()).norm() / std::max(g.GZ.norm(), 1e-300);
  r.gz_hermitian = r.gz_residual <= tol;

  double off = 0.0;
  for (Index a = 0; a < s.md(); ++a)
    for (Index b = 0; b < s.md(); ++b)
      if (a % s.m != b % s.m) off += std::norm(g.G(a, b));
  r.j_offdiag_residual = std::sqrt(off) / g.G.norm();
  r.gram_j_diagonal = r.j_offdiag_residual <= tol;
  const double zscale = std::max(1.0, s.Z.z.cwiseAbs().maxCoeff());
  r.z_all_real = s.Z.all_real(tol * zscale);

  double spread = 0.0;
  for (int j = 0; j < s.m; ++j)
    for (int k = 0; k < j; ++k) spread = std::max(spread, std::abs(s.Z.z[j] - s.Z.z[k]));
  const double rscale = (1.0 + spread) * g.G.norm();
  const MatC R1 = admissible_R(s, s.Z.z[0]);
  double worst = (R1 - R1.adjoint()).norm();
  for (int j = 1; j < s.m; ++j) worst = std::max(worst, (admissible_R(s, s.Z.z[j]) - R1).norm());
  r.R_spread_residual = worst / rscale;
  r.R_constant_hermitian = r.R_spread_residual <= tol;
  return r;
}

Decomposition decompose_coefficients(const GramData& g, const VecC& xi) {
  Decomposition out;
  out.c = g.Gmin.ldlt().solve(g.Gb.adjoint() * xi);
  out.xi_perp = xi - g.bhat * out.c;
  return out;
}

VecC c_functional(const Setup& s, const VecC& xi) {
  if (xi.size() != s.md()) throw Error(ErrorCode::DimensionMismatch, "coefficient vector must have length md");
  VecC c = VecC::Zero(s.d);
  for (int sg = 0; sg < s.d; ++sg)
    for (int j = 0; j < s.m; ++j) c[sg] += xi[s.alpha(sg, j)];
  return c;
}

IdentityResiduals identity_checks(const Setup& s, const GramData& g, std::uint64_t seed, int samples) {
  Rng rng(seed);
  IdentityResiduals r;
  const HermiticityReport h = hermiticity_report(s, g);
  const MatC E = sum_matrix(s);
  const MatC Zd = g.Zd();
  const MatC GZs = g.GZ.adjoint();
  const double gnorm = g.G.norm();
  const double zmax = g.zd.cwiseAbs().maxCoeff();

  // ℳ_{σα'} − conj ℳ_{σ'α} = (z_j' − z̄_j) 𝒢_αα'
  {
    MatC lhs = E * g.Mcal - g.Mcal.adjoint() * E.transpose();
    MatC rhs(s.md(), s.md());
    for (Index a = 0; a < s.md(); ++a)
      for (Index b = 0; b < s.md(); ++b) rhs(a, b) = (g.zd[b] - std::conj(g.zd[a])) * g.G(a, b);
    r.R_difference = (lhs - rhs).norm() / std::max({lhs.norm(), rhs.norm(), gnorm * (1 + zmax)});
  }

  const MatC B = bhat_explicit(s);
  // residual scales: 𝒢_Z* − 𝒢_Z vanishes in the Hermitian case, so normalize by ‖𝒢_Z‖
  const MatC GbGinv = g.Gb.adjoint() * g.Ginv;
  const double a_scale = 2.0 * GbGinv.norm() * g.GZ.norm();
  const MatC Rc = admissible_R(s, s.Z.z[0]);
  double cmid = 0, kmin = 0, dk0 = 0, cx = 0;
  for (int t = 0; t < samples; ++t) {
    const VecC xi = random_cvec(rng, s.md());
    const VecC c = c_functional(s, xi);
    {
      const VecC lhs = g.Ginv * (GZs * xi - g.Mcal.adjoint() * c);
      const VecC rhs = (Zd - g.X * g.Mcal) * xi;
      const double sc = std::max({lhs.norm(), rhs.norm(), (Zd.norm() + (g.X * g.Mcal).norm()) * xi.norm()});
      cx = std::max(cx, (lhs - rhs).norm() / sc);
    }
    if (h.gz_hermitian) {
      const VecC lhs = g.Mcal * xi;
      const VecC rhs = Rc * c;
      cmid = std::max(cmid, (lhs - rhs).norm() / std::max(g.Mcal.norm() * xi.norm(), 1e-300));
    }
    if (s.m > 1) {
      const VecC cc = random_cvec(rng, s.d);
      const MatC A = g.Gb.adjoint() * g.Ginv * (GZs - g.GZ);
      const VecC v = A * g.bhat * cc;
      kmin = std::max(kmin, v.norm() / std::max(a_scale * (g.bhat * cc).norm(), 1e-300));

      const VecC lhs = A * xi;
      const VecC rhs = B.adjoint() * (g.Mcal.adjoint() * c);
      const double sc = std::max({lhs.norm(), rhs.norm(), a_scale * xi.norm(),
                                  B.norm() * g.Mcal.norm() * c.norm()});
      dk0 = std::max(dk0, (lhs - rhs).norm() / sc);
    }
  }
  r.chi_M_identity = cx;
  if (h.gz_hermitian) r.constant_R = cmid;
  if (s.m > 1) {
    r.kmin_perp = kmin;
    r.gz_skew_identity = dk0;
  }
  return r;
}

double delta_hat_eigen_residual(const GramData& g) {
  Eigen::ComplexEigenSolver<MatC> es(g.DeltaHat);
  double worst = 0.0;
  const MatC Zd = g.Zd();
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    const cplx z = es.eigenvalues()[k];
    const VecC chi = es.eigenvectors().col(k);
    const VecC w = (Zd - z * MatC::Identity(Zd.rows(), Zd.cols())) * g.bhat * chi;
    const VecC v = g.Gb.adjoint() * w;
    const double sc = g.Gb.norm() * (Zd.norm() + std::abs(z)) * (g.bhat * chi).norm();
    worst = std::max(worst, v.norm() / std::max(sc, 1e-300));
  }
  return worst;
}

}  // namespace peakmodel
