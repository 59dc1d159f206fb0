#include "doctest.h"

#include "oracle.hpp"
#include "peakmodel/extensions.hpp"
#include "peakmodel/sampling.hpp"

using namespace peakmodel;

namespace {

MatC random_hermitian(Rng& rng, int d) {
  const MatC A = random_cmat(rng, d, d);
  return (A + A.adjoint()) / 2.0;
}

// random self-adjoint relation: range of [C; D] with C = U cos, D = U sin (Lagrangian)
LinearRelationFD random_sa_relation(Rng& rng, int d) {
  const MatC U = random_unitary(rng, d);
  VecC cs(d), sn(d);
  for (int k = 0; k < d; ++k) {
    const double th = uniform(rng, 0, M_PI);
    cs[k] = std::cos(th);
    sn[k] = std::sin(th);
  }
  return make_relation(U * cs.asDiagonal(), U * sn.asDiagonal());
}

cplx random_z(Rng& rng, const Setup& s, bool upper = false) {
  for (;;) {
    const cplx z(uniform(rng, -6, 6), upper ? uniform(rng, 0.2, 3) : uniform(rng, -3, 3));
    if (spectral_distance(s.model, z) > 0.05 && !s.Z.contains(z, 0.05) && std::abs(z.imag()) > 0.05) return z;
  }
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::EmptySpectrum;
}

}  // namespace

TEST_CASE("linear relations") {
  Rng rng(1);
  const LinearRelationFD z0 = relation_zero_domain(3);
  CHECK(is_self_adjoint(z0));
  CHECK(subspace_distance(relation_adjoint(z0), z0) < 1e-12);

  const MatC T = random_hermitian(rng, 3);
  const LinearRelationFD gT = relation_graph(T);
  CHECK(is_self_adjoint(gT));
  CHECK(subspace_distance(relation_adjoint(gT), gT) < 1e-12);

  const MatC A = random_cmat(rng, 3, 3);
  const LinearRelationFD gA = relation_graph(A);
  CHECK_FALSE(is_symmetric(gA));
  CHECK(subspace_distance(relation_adjoint(gA), relation_graph(A.adjoint())) < 1e-10);

  for (int t = 0; t < 30; ++t) {
    const int d = 1 + t % 4;
    const Index p = 1 + t % (2 * d);
    const LinearRelationFD th = make_relation(random_cmat(rng, d, p), random_cmat(rng, d, p));
    const LinearRelationFD adj = relation_adjoint(th);
    CHECK(adj.p() == 2 * d - p);
    CHECK(subspace_distance(relation_adjoint(adj), th) < 1e-10);
    // every (y, y') in Θ* satisfies ⟨y', x⟩ = ⟨y, x'⟩ for (x, x') in Θ
    CHECK((adj.D.adjoint() * th.C - adj.C.adjoint() * th.D).norm() < 1e-10);
    const VecC x = random_cvec(rng, p);
    CHECK(membership_residual(th, th.C * x, th.D * x) < 1e-12);
  }
  CHECK(code_of([] { make_relation(MatC::Ones(2, 2), MatC::Ones(2, 2)); }) == ErrorCode::InvalidRelation);
  CHECK(code_of([] { make_relation(MatC::Ones(2, 2), MatC::Ones(3, 2)); }) == ErrorCode::InvalidRelation);
}

TEST_CASE("(Theta - M)^{-1}") {
  Rng rng(2);
  const MatC M = random_cmat(rng, 2, 2);
  CHECK(theta_minus_M_inverse(relation_zero_domain(2), M).norm() == 0.0);

  MatC th(1, 1), m1(1, 1);
  th << 2.5;
  m1 << cplx(0.5, 1.0);
  const MatC inv = theta_minus_M_inverse(relation_graph(th), m1);
  CHECK(std::abs(inv(0, 0) - 1.0 / (2.5 - cplx(0.5, 1.0))) < 1e-15);

  const MatC Tm = M;
  CHECK(code_of([&] { theta_minus_M_inverse(relation_graph(Tm), M); }) == ErrorCode::NotInResolventSet);
  const LinearRelationFD half = make_relation(MatC::Identity(2, 1), MatC::Zero(2, 1));
  CHECK(code_of([&] { theta_minus_M_inverse(half, M); }) == ErrorCode::NotInResolventSet);
}

TEST_CASE("classical Krein formula against dense inversion of L_Theta") {
  // L_Θ = L − P^{-1}Φ C (D − C_r C)^{-1} Φ*, with C_r the renormalization constant of R
  Rng rng(3);
  double worst = 0.0, graph = 0.0;
  for (int t = 0; t < 60; ++t) {
    Setup s = random_setup(rng);
    if (t % 2) {
      const cplx z0(uniform(rng, -2, 2), uniform(rng, 0.5, 2));
      s = make_setup(s.model, s.Z, s.family, s.scaling,
                     AdmissibleMode::renormalized(R_direct(s, z0) + random_hermitian(rng, s.d), z0));
    }
    const TripleHandle h = classical_handle(s);
    const MatC T = random_hermitian(rng, s.d);
    const LinearRelationFD th = relation_graph(T);
    MatC L = MatC::Zero(s.N, s.N);
    MatC Pinv = MatC::Zero(s.N, s.N);
    for (Index i = 0; i < s.N; ++i) {
      L(i, i) = s.model.eigenvalues[i];
      Pinv(i, i) = 1.0 / oracle::weight(s, i);
    }
    const MatC Cr = s.R_shift;
    const MatC Phi = s.family.phi;
    const MatC LT = L - Pinv * Phi * (T - Cr).inverse() * Phi.adjoint();
    const cplx z = random_z(rng, s, t % 3 != 0);
    const VecC v = random_cvec(rng, s.N);
    const KreinResult r = krein_solve(h, th, z, v);
    const VecC dense = (LT - z * MatC::Identity(s.N, s.N)).partialPivLu().solve(v);
    worst = std::max(worst, oracle::rel(r.y, dense));
    graph = std::max(graph, h.graph_residual(th, z, v, r));
  }
  CHECK(worst < 1e-9);
  CHECK(graph < 1e-9);
}

TEST_CASE("distinguished extension is reproduced exactly") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Setup s = t % 2 ? hermitian_setup(rng, 1 + t % 3, 1 + t % 2) : random_setup(rng);
    const Peak p = make_peak(s);
    const cplx z = random_z(rng, s);
    std::vector<TripleHandle> hs{classical_handle(s), peak_handle(p)};
    if (s.m > 1) hs.push_back(b_branch_handle(p));
    for (const auto& h : hs) {
      const VecC v = random_cvec(rng, h.dim);
      const KreinResult r = krein_solve(h, relation_zero_domain(s.d), z, v);
      CHECK((r.y - h.resolvent0(z, v)).norm() == 0.0);
      CHECK(r.h.norm() == 0.0);
    }
  }
}

TEST_CASE("peak Krein resolvent: graph oracle, adjoint duality, resolvent identity") {
  Rng rng(5);
  double graph = 0, dual = 0, ident = 0, sym = 0;
  for (int t = 0; t < 60; ++t) {
    const Setup s = hermitian_setup(rng, 1 + t % 4, 1 + t % 3, t % 3);
    const Peak p = make_peak(s);
    const TripleHandle h = peak_handle(p);
    const LinearRelationFD th = t % 2 ? random_sa_relation(rng, s.d) : relation_graph(random_hermitian(rng, s.d));
    const cplx z = random_z(rng, s, true), w = random_z(rng, s);
    const VecC u = random_cvec(rng, h.dim), v = random_cvec(rng, h.dim);
    const KreinResult r = krein_solve(h, th, z, v);
    graph = std::max(graph, h.graph_residual(th, z, v, r));

    // non-self-adjoint Θ: R_Θ(z)* = R_{Θ*}(z̄)
    const LinearRelationFD ns = make_relation(random_cmat(rng, s.d, s.d), random_cmat(rng, s.d, s.d));
    const cplx a = h.inner(krein_resolvent(h, ns, z, u), v);
    const cplx b = h.inner(u, krein_resolvent(h, relation_adjoint(ns), std::conj(z), v));
    dual = std::max(dual, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}));

    const VecC lhs = r.y - krein_resolvent(h, th, w, v);
    const VecC rhs = (z - w) * krein_resolvent(h, th, z, krein_resolvent(h, th, w, v));
    ident = std::max(ident, oracle::rel(lhs, rhs));
    sym = std::max(sym, oracle::rel(h.weyl(std::conj(z)), MatC(h.weyl(z).adjoint())));
  }
  CHECK(graph < 1e-9);
  CHECK(dual < 1e-9);
  CHECK(ident < 1e-9);
  CHECK(sym < 1e-9);
}

TEST_CASE("B-branch Krein resolvent against the scalar closed form") {
  // d = 1, tilde scaling, p(L) = I:
  //   R'_θ(z)(f, ξ) = ((L − z)^{-1}f, b ⟨b,𝒢ξ⟩/(⟨b,𝒢b⟩(Δ̂ − z))) + γ'(z) h,
  //   h = [θ − R(z) + ⟨b,𝒢b⟩/(z − Δ̂)]^{-1} γ'(z̄)*(f, ξ),
  //   γ'(z)h = (G(z)h, b h/(z − Δ̂)),  γ'(z̄)*(f, ξ) = Σ conj φ f/(λ − z) + ⟨b,𝒢ξ⟩/(z − Δ̂)
  Rng rng(6);
  double worst = 0.0, graph = 0.0;
  for (int t = 0; t < 60; ++t) {
    const int m = 2 + t % 2;
    const Setup s = tilde_setup(rng, 8 + t % 5, m, 1);
    const Peak p = make_peak(s);
    const TripleHandle h = b_branch_handle(p);
    const MatC G = oracle::gram(s);
    const VecC b = oracle::bhat(s).col(0);
    const VecC zd = oracle::zd(s);
    const cplx gbb = b.dot(G * b);
    const cplx dhat = b.dot(G * zd.asDiagonal() * b) / gbb;
    CHECK(std::abs(dhat.imag()) < 1e-10 * std::abs(dhat));

    const cplx z = t % 3 == 0 ? cplx(uniform(rng, -6, -3), 0) : cplx(uniform(rng, -3, 6), uniform(rng, 0.2, 2));
    if (std::abs(z - dhat) < 0.05) continue;
    const double theta = uniform(rng, -3, 3);
    MatC th(1, 1);
    th << theta;
    const VecC f = random_cvec(rng, s.N), xi = random_cvec(rng, s.md());
    VecC v(s.N + s.md());
    v << f, xi;

    const cplx R = oracle::R(s, z)(0, 0);
    cplx adj = b.dot(G * xi) / (z - dhat);
    VecC Gz(s.N), y0f(s.N);
    for (Index i = 0; i < s.N; ++i) {
      const double l = s.model.eigenvalues[i];
      adj += std::conj(s.family.phi(i, 0)) * f[i] / (l - z);
      Gz[i] = s.family.phi(i, 0) / ((l - z) * oracle::weight(s, i));
      y0f[i] = f[i] / (l - z);
    }
    const cplx hh = adj / (theta - R + gbb / (z - dhat));
    VecC expect(s.N + s.md());
    expect << y0f + Gz * hh, b * (b.dot(G * xi) / (gbb * (dhat - z))) + b * (hh / (z - dhat));

    const KreinResult r = krein_solve(h, relation_graph(th), z, v);
    worst = std::max(worst, oracle::rel(r.y, expect));
    graph = std::max(graph, h.graph_residual(relation_graph(th), z, v, r));
  }
  CHECK(worst < 1e-9);
  CHECK(graph < 1e-9);
}

TEST_CASE("resolvent identity for the classical and B handles") {
  Rng rng(7);
  double worst = 0.0;
  for (int t = 0; t < 40; ++t) {
    RandomSetupOptions o;
    o.m_min = 2;
    o.real_z = t % 2;
    const Setup s = random_setup(rng, o);
    const Peak p = make_peak(s);
    for (const TripleHandle& h : {classical_handle(s), b_branch_handle(p)}) {
      const LinearRelationFD th = relation_graph(random_hermitian(rng, s.d));
      const cplx z = random_z(rng, s, true), w = random_z(rng, s);
      const VecC v = random_cvec(rng, h.dim);
      const VecC lhs = krein_resolvent(h, th, z, v) - krein_resolvent(h, th, w, v);
      const VecC rhs = (z - w) * krein_resolvent(h, th, z, krein_resolvent(h, th, w, v));
      worst = std::max(worst, oracle::rel(lhs, rhs));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("dispersion scan") {
  Rng rng(8);
  const Setup s = hermitian_setup(rng, 2, 2);
  const Peak p = make_peak(s);
  const TripleHandle h = peak_handle(p);
  CHECK(dispersion_scan(h, relation_zero_domain(2), {}).empty());
  const std::vector<cplx> grid{cplx(-1, 0.5), cplx(0.5, 0.5), s.Z.z[0], cplx(3, 1)};
  const auto pts = dispersion_scan(h, relation_zero_domain(2), grid);
  REQUIRE(pts.size() == grid.size());
  for (const auto& pt : pts) {
    if (pt.z == s.Z.z[0]) {
      CHECK(pt.skipped);
      CHECK(pt.reason == "REGULAR_POINT_COLLISION");
    } else {
      CHECK_FALSE(pt.skipped);
      CHECK(std::abs(pt.smin - 1.0) < 1e-12);
    }
  }
  // the minimum of σ_min over real z locates eigenvalues of A_Θ
  const LinearRelationFD th = relation_graph(random_hermitian(rng, 2));
  const auto gen = dispersion_scan(h, th, {cplx(0.1, 1e-3)});
  CHECK(gen[0].smin >= 0.0);
}
