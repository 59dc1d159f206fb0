#include "doctest.h"

#include "oracle.hpp"
#include "peakmodel/gram_algebra.hpp"
#include "peakmodel/sampling.hpp"

using namespace peakmodel;

namespace {

RandomSetupOptions opts(bool real, int m_min = 1, int m_max = 4) {
  RandomSetupOptions o;
  o.real_z = real;
  o.m_min = m_min;
  o.m_max = m_max;
  o.d_max = 3;
  return o;
}

Index rank_of(const MatC& A, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<MatC> svd(A);
  const VecR& sv = svd.singularValues();
  Index r = 0;
  while (r < sv.size() && sv[r] > rel_tol * sv[0]) ++r;
  return r;
}

}  // namespace

TEST_CASE("Gram matrix matches the defining sum and derived objects") {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    const Setup s = random_setup(rng, opts(t % 2 == 0));
    const GramData g = build_gram(s);
    const MatC G = oracle::gram(s);
    CHECK(oracle::rel(g.G, G) < 1e-12);
    CHECK(oracle::rel(gram_from_vectors(s), G) < 1e-12);

    Eigen::SelfAdjointEigenSolver<MatC> es(G);
    CHECK(es.eigenvalues()[0] > 0.0);

    // b̂ = 𝒢^{-1}𝒢_b equals the explicit coefficient matrix
    const MatC B = oracle::bhat(s);
    CHECK(oracle::rel(g.bhat, B) < 1e-9);
    CHECK(oracle::rel(g.Gb, MatC(G * B)) < 1e-12);
    CHECK(oracle::rel(g.Gmin, MatC(B.adjoint() * G * B)) < 1e-10);

    // generalized inverse of 𝒢_b*
    const MatC Gbs = g.Gb.adjoint();
    CHECK(oracle::rel(MatC(Gbs * g.Hb * Gbs), Gbs) < 1e-9);
    CHECK(oracle::rel(MatC(g.Hb.adjoint() * g.Gb), MatC::Identity(s.d, s.d)) < 1e-9);
    CHECK(oracle::rel(g.HbOp, MatC(g.Hb * Gbs * g.Hb)) < 1e-12);

    // ker 𝒢_b*
    CHECK(g.KerGbStar.cols() == s.md() - s.d);
    CHECK(rank_of(Gbs) == s.d);
    if (g.KerGbStar.cols() > 0) {
      CHECK((Gbs * g.KerGbStar).norm() < 1e-10 * Gbs.norm());
      CHECK(oracle::rel(MatC(g.KerGbStar.adjoint() * g.KerGbStar),
                        MatC::Identity(g.KerGbStar.cols(), g.KerGbStar.cols())) < 1e-12);
    }

    // Δ, Δ̂
    const VecC zd = oracle::zd(s);
    const MatC Delta = B.adjoint() * G * zd.asDiagonal() * B;
    CHECK(oracle::rel(g.Delta, Delta) < 1e-9);
    if (s.m > 1) CHECK((g.Delta - g.Delta.adjoint()).norm() < 1e-9 * g.Delta.norm());
    CHECK(oracle::rel(MatC(g.Gmin * g.DeltaHat), g.Delta) < 1e-9);
    CHECK(delta_hat_eigen_residual(g) < 1e-9);

    // 𝒳 = 𝒢^{-1}E has trivial kernel; ℳ_{σ,(σ',j')} = R_σσ'(z_j')
    const MatC E = sum_matrix(s);
    CHECK(oracle::rel(g.X, MatC(G.inverse() * E)) < 1e-9);
    Eigen::JacobiSVD<MatC> sx(g.X);
    CHECK(sx.singularValues()[s.d - 1] > 1e-10 * sx.singularValues()[0]);
    for (int j = 0; j < s.m; ++j) {
      const MatC R = oracle::R(s, s.Z.z[j]);
      for (int b = 0; b < s.d; ++b) CHECK(oracle::rel(VecC(g.Mcal.col(s.alpha(b, j))), VecC(R.col(b))) < 1e-12);
    }
  }
}

TEST_CASE("eigen-characterization of Delta-hat") {
  // every eigenpair (z, χ) of z𝒢_min − Δ makes (Z_d − z)b̂χ orthogonal to ran 𝒢_b
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const Setup s = random_setup(rng, opts(t % 2 == 1, 2, 4));
    const GramData g = build_gram(s);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatC> es(g.Delta, g.Gmin);
    for (Index k = 0; k < s.d; ++k) {
      const double z = es.eigenvalues()[k];
      const VecC chi = es.eigenvectors().col(k);
      CHECK(((z * g.Gmin - g.Delta) * chi).norm() < 1e-9 * g.Delta.norm() * chi.norm());
      const VecC w = (oracle::zd(s).array() - z).matrix().cwiseProduct(oracle::bhat(s) * chi);
      const double sc = g.Gb.norm() * (oracle::zd(s).cwiseAbs().maxCoeff() + std::abs(z)) * chi.norm();
      CHECK((g.Gb.adjoint() * w).norm() < 1e-9 * sc);
    }
  }
}

TEST_CASE("Hermiticity characterizations agree") {
  Rng rng(77);
  int herm = 0, non = 0;
  for (int t = 0; t < 500; ++t) {
    Setup s;
    switch (t % 5) {
      case 0: s = random_setup(rng, opts(false)); break;
      case 1: s = random_setup(rng, opts(true)); break;
      case 2: s = hermitian_setup(rng, 1 + t % 4, 1 + t % 3); break;
      case 3: s = random_setup(rng, opts(true, 1, 1)); break;
      default: s = random_setup(rng, opts(false, 1, 1)); break;
    }
    const GramData g = build_gram(s);
    const HermiticityReport r = hermiticity_report(s, g);
    CHECK(r.consistent());
    (r.gz_hermitian ? herm : non)++;
    if (!s.Z.all_real()) CHECK_FALSE(r.gz_hermitian);
    if (s.m == 1 && s.Z.all_real()) {
      CHECK(r.gz_hermitian);
      CHECK(r.gram_j_diagonal);
      CHECK(r.R_constant_hermitian);
    }
  }
  CHECK(herm >= 200);
  CHECK(non >= 200);
}

TEST_CASE("coefficient decomposition and the c-functional") {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const Setup s = random_setup(rng, opts(t % 2 == 0));
    const GramData g = build_gram(s);
    const VecC c0 = random_cvec(rng, s.d);
    Decomposition dc = decompose_coefficients(g, g.bhat * c0);
    CHECK(oracle::rel(dc.c, c0) < 1e-9);
    CHECK(dc.xi_perp.norm() < 1e-9 * (g.bhat * c0).norm());
    if (g.KerGbStar.cols() > 0) {
      const VecC k = g.KerGbStar.col(0);
      dc = decompose_coefficients(g, k);
      CHECK(dc.c.norm() < 1e-9);
      CHECK(oracle::rel(dc.xi_perp, k) < 1e-9);
    }
    const VecC xi = random_cvec(rng, s.md());
    dc = decompose_coefficients(g, xi);
    CHECK((xi - g.bhat * dc.c - dc.xi_perp).norm() < 1e-12 * xi.norm());
    CHECK((g.Gb.adjoint() * dc.xi_perp).norm() < 1e-9 * g.Gb.norm() * xi.norm());

    // c(ξ)_σ = Σ_j ξ_σj; c(b̂ c0) = 0 for m > 1, = c0 for m = 1
    VecC c(s.d);
    for (int sg = 0; sg < s.d; ++sg) {
      c[sg] = 0;
      for (int j = 0; j < s.m; ++j) c[sg] += xi[Index(sg) * s.m + j];
    }
    CHECK(oracle::rel(c_functional(s, xi), c) < 1e-15);
    if (s.m > 1)
      CHECK(c_functional(s, oracle::bhat(s) * c0).norm() < 1e-10 * (oracle::bhat(s) * c0).norm());
    else
      CHECK((c_functional(s, xi) - xi).norm() == 0.0);
  }
  // m = 2, d = 1: ξ = (1, −1) ↦ 0
  {
    const SpectralModel md = build_model({0, 1, 2}, 2);
    const Setup s = make_setup(md, make_regular_set(md, {-1.0, -2.0}), make_family(md, MatC::Ones(3, 1)));
    VecC xi(2);
    xi << 1, -1;
    CHECK(c_functional(s, xi).norm() == 0.0);
  }
}

TEST_CASE("matrix identities over the regular points") {
  Rng rng(99);
  for (int t = 0; t < 120; ++t) {
    const bool hermitian = t % 3 == 0;
    const Setup s = hermitian ? hermitian_setup(rng, 1 + t % 4, 1 + t % 3)
                              : random_setup(rng, opts(t % 3 == 1));
    const GramData g = build_gram(s);
    const IdentityResiduals r = identity_checks(s, g, 100 + t, 8);
    CHECK(r.chi_M_identity < 1e-10);
    CHECK(r.R_difference < 1e-10);
    CHECK(r.constant_R.has_value() == hermiticity_report(s, g).gz_hermitian);
    if (hermitian) CHECK(r.constant_R.has_value());
    if (r.constant_R) CHECK(*r.constant_R < 1e-10);
    CHECK(r.kmin_perp.has_value() == (s.m > 1));
    if (r.kmin_perp) CHECK(*r.kmin_perp < 1e-10);
    if (r.gz_skew_identity) CHECK(*r.gz_skew_identity < 1e-10);

    // independent evaluation of 𝒢^{-1}(𝒢_Z*ξ − ℳ*c(ξ)) = (Z_d − 𝒳ℳ)ξ
    const MatC G = oracle::gram(s);
    const VecC zd = oracle::zd(s);
    MatC Mcal(s.d, s.md());
    for (int j = 0; j < s.m; ++j) {
      const MatC R = oracle::R(s, s.Z.z[j]);
      for (int b = 0; b < s.d; ++b) Mcal.col(Index(b) * s.m + j) = R.col(b);
    }
    const MatC E = sum_matrix(s);
    const MatC Gi = G.inverse();
    const VecC xi = random_cvec(rng, s.md());
    const VecC lhs = Gi * ((G * zd.asDiagonal()).adjoint() * xi - Mcal.adjoint() * (E.transpose() * xi));
    const VecC rhs = zd.cwiseProduct(xi) - Gi * E * (Mcal * xi);
    CHECK(oracle::rel(lhs, rhs) < 1e-8);
  }
}

TEST_CASE("conditioning diagnostics") {
  const SpectralModel md = build_model({0, 1, 2, 3, 4, 5}, 2);
  bool warned = false;
  for (double sep : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const Setup s = make_setup(md, make_regular_set(md, {cplx(-1, 0), cplx(-1 - sep, 0)}),
                               make_family(md, MatC::Ones(6, 1)));
    try {
      const GramData g = build_gram(s);
      CHECK((g.cond_G > 1e10) == !g.warnings.empty());
      warned = warned || !g.warnings.empty();
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DependentDeficiencyVectors);
    }
  }
  CHECK(warned);

  // exactly dependent deficiency vectors: φ supported on a single eigenvalue, m = 2
  VecC phi = VecC::Zero(6);
  phi[2] = 1.0;
  const Setup dep = make_setup(md, make_regular_set(md, {-1.0, -3.0}), make_family(md, phi));
  CHECK_THROWS_AS(build_gram(dep), Error);
}

TEST_CASE("injected Gram perturbation propagates to derived matrices") {
  Rng rng(3);
  const Setup s = random_setup(rng, opts(false, 2, 3));
  const GramData g = build_gram(s);
  MatC G = g.G;
  G(0, 1) += 0.05 * std::sqrt(std::abs(G(0, 0) * G(1, 1)));
  G(1, 0) = std::conj(G(0, 1));
  const GramData bad = gram_from_matrix(s, G);
  CHECK(identity_checks(s, bad).R_difference > 1e-6);
}
