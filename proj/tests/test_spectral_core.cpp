#include "doctest.h"

#include <cmath>
#include <limits>

#include "peakmodel/sampling.hpp"
#include "peakmodel/spectral_core.hpp"

using namespace peakmodel;

namespace {

VecC vec(std::initializer_list<cplx> xs) {
  VecC v(Index(xs.size()));
  Index i = 0;
  for (cplx x : xs) v[i++] = x;
  return v;
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

std::vector<cplx> random_z(Rng& rng, int m, bool real) {
  std::vector<cplx> z;
  while (int(z.size()) < m) {
    const cplx w = real ? cplx(uniform(rng, -8, -1), 0) : cplx(uniform(rng, -6, 6), uniform(rng, -3, 3));
    bool ok = real || std::abs(w.imag()) > 0.3;
    for (cplx u : z) ok = ok && std::abs(u - w) > 0.2;
    if (ok) z.push_back(w);
  }
  return z;
}

}  // namespace

TEST_CASE("build_model validates its input") {
  CHECK(build_model({0, 1, 2, 3}, 1, 1e-8).size() == 4);
  CHECK(build_model({0.5}, 3, 1e-8).size() == 1);
  CHECK(code_of([] { build_model({}, 1, 1e-8); }) == ErrorCode::EmptySpectrum);
  CHECK(code_of([] { build_model({1.0}, 0); }) == ErrorCode::InvalidOrder);
  CHECK(code_of([] { build_model({std::numeric_limits<double>::quiet_NaN()}, 1); }) ==
        ErrorCode::NonFiniteEigenvalue);
  const SpectralModel md = build_model({-3.0, 1.0}, 2);
  CHECK(md.gap_tol == doctest::Approx(1e-8 * 4.0));
  CHECK(md.eigenvalues[0] == -3.0);
}

TEST_CASE("scale_inner worked values") {
  CHECK(std::abs(scale_inner(build_model({7.0, 9.0}, 1), 0, vec({1, cplx(0, 1)}), vec({1, cplx(0, 1)})) - 2.0) < 1e-15);
  CHECK(std::abs(scale_inner(build_model({0.0}, 4), 1, vec({1}), vec({1})) - 1.0) < 1e-15);
  CHECK(std::abs(scale_inner(build_model({1.0, 3.0}, 1), -2, vec({1, 1}), vec({1, 1})) - 0.3125) < 1e-15);

  const SpectralModel a = build_model({0.0, 5.0}, 2);
  const VecC f = vec({cplx(1, 2), cplx(0, -1)});
  const VecC g = vec({cplx(3, 0), cplx(1, 1)});
  const cplx c(0.5, -2);
  CHECK(std::abs(scale_inner(a, 1, c * f, g) - std::conj(c) * scale_inner(a, 1, f, g)) < 1e-12);
  CHECK(code_of([&] { scale_inner(a, 0, vec({1}), g); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("apply_scale_power worked values and isometry") {
  const SpectralModel md = build_model({0.0, 1.0}, 2);
  const VecC out = apply_scale_power(md, 0.5, vec({1, 1}));
  CHECK(std::abs(out[0] - 1.0) < 1e-15);
  CHECK(std::abs(out[1] - 2.0) < 1e-15);
  CHECK((apply_scale_power(md, 0.0, vec({cplx(1, 2), 3})) - vec({cplx(1, 2), 3})).norm() == 0.0);

  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const int m = 1 + t % 4;
    std::vector<double> ev(9);
    for (auto& x : ev) x = uniform(rng, -6, 6);
    const SpectralModel sm = build_model(ev, m);
    const VecC f = random_cvec(rng, 9);
    for (int n = -2 * m; n <= 2 * m; ++n) {
      const double lhs = scale_norm(sm, n, apply_scale_power(sm, 0.5, f));
      const double rhs = scale_norm(sm, n + m, f);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
  }
}

TEST_CASE("diagonal similarity P^{-1/2} L P^{1/2} = L componentwise") {
  Rng rng(5);
  std::vector<double> ev(7);
  for (auto& x : ev) x = uniform(rng, -4, 4);
  const SpectralModel sm = build_model(ev, 3);
  const VecC f = random_cvec(rng, 7);
  const VecC lam = sm.eigenvalues.cast<cplx>();
  const VecC sim = apply_scale_power(sm, -0.5, lam.cwiseProduct(apply_scale_power(sm, 0.5, f)));
  const VecC lf = lam.cwiseProduct(f);
  for (Index i = 0; i < 7; ++i) CHECK(std::abs(sim[i] - lf[i]) <= 1e-14 * std::abs(lf[i]));
}

TEST_CASE("resolvent_L") {
  const SpectralModel md = build_model({0.0, 1.0}, 1);
  const VecC r = resolvent_L(md, -1.0, vec({1, 1}));
  CHECK(std::abs(r[0] - 1.0) < 1e-15);
  CHECK(std::abs(r[1] - 0.5) < 1e-15);
  CHECK(code_of([&] { resolvent_L(md, 0.0, vec({1, 1})); }) == ErrorCode::SpectralCollision);

  Rng rng(2);
  const VecC f = random_cvec(rng, 2);
  const cplx z(0.3, 0.7);
  const VecC back = (md.eigenvalues.cast<cplx>().array() - z).matrix().cwiseProduct(resolvent_L(md, z, f));
  CHECK((back - f).norm() <= 1e-12 * f.norm());
}

TEST_CASE("regular set validation") {
  const SpectralModel md = build_model({0.0, 1.0, 2.0}, 2);
  CHECK(code_of([&] { make_regular_set(md, {-1.0, -1.0}); }) == ErrorCode::DuplicateRegularPoint);
  CHECK(code_of([&] { make_regular_set(md, {-1.0, 1.0}); }) == ErrorCode::SpectralCollision);
  CHECK(code_of([&] { make_regular_set(md, {-1.0}); }) == ErrorCode::DimensionMismatch);
  const RegularSet Z = make_regular_set(md, {-1.0, -2.0});
  CHECK(std::abs(Z.b_diag[0] - 1.0) < 1e-15);   // z1 − z2
  CHECK(std::abs(Z.b_diag[1] + 1.0) < 1e-15);   // z2 − z1
  CHECK(Z.all_real());
  const RegularSet Z1 = make_regular_set(build_model({0.0}, 1), {cplx(0, 1)});
  CHECK(std::abs(Z1.b_diag[0] - 1.0) == 0.0);
}

TEST_CASE("partial-fraction identity for the inverse of P~(L)") {
  // worked value: λ=(0), 𝒵=(−1,−2): 1·1 + (−1)·(1/2) = 1/((0+1)(0+2))
  const SpectralModel md = build_model({0.0}, 2);
  const RegularSet Z = make_regular_set(md, {-1.0, -2.0});
  CHECK(std::abs(tilde_p_apply(md, Z, vec({1}), true)[0] - 0.5) < 1e-15);

  // m = 1: the inverse is the resolvent at z_1
  {
    const SpectralModel m1 = build_model({0.0, 2.0, -1.0}, 1);
    const RegularSet Z1 = make_regular_set(m1, {cplx(0.5, 1.0)});
    const VecC f = vec({1, cplx(0, 2), 3});
    CHECK((tilde_p_apply(m1, Z1, f, true) - resolvent_L(m1, cplx(0.5, 1.0), f)).norm() < 1e-15);
  }

  Rng rng(17);
  double worst = 0.0, worst_round = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int N = 1 + int(uniform(rng, 0, 32));
    const int m = 1 + t % 5;
    std::vector<double> ev(N);
    for (auto& x : ev) x = uniform(rng, 0, 10);
    const SpectralModel sm = build_model(ev, m);
    const RegularSet R = make_regular_set(sm, random_z(rng, m, t % 2 == 0));
    const VecC f = random_cvec(rng, N);
    const VecC inv = tilde_p_apply(sm, R, f, true);
    for (Index i = 0; i < N; ++i) {
      cplx prod = 1.0;
      for (int j = 0; j < m; ++j) prod *= ev[i] - R.z[j];
      const cplx direct = f[i] / prod;
      worst = std::max(worst, std::abs(inv[i] - direct) / std::abs(direct));
    }
    const VecC back = tilde_p_apply(sm, R, inv, false);
    worst_round = std::max(worst_round, (back - f).norm() / f.norm());
  }
  CHECK(worst < 1e-10);
  CHECK(worst_round < 1e-10);
}

TEST_CASE("sum of 1/b_j(z_j) vanishes for m > 1") {
  Rng rng(3);
  for (int m = 2; m <= 6; ++m)
    for (int t = 0; t < 200; ++t) {
      const std::vector<cplx> z = random_z(rng, m, false);
      cplx sum = 0.0;
      double mx = 0.0;
      for (int j = 0; j < m; ++j) {
        cplx b = 1.0;
        for (int k = 0; k < m; ++k)
          if (k != j) b *= z[j] - z[k];
        sum += 1.0 / b;
        mx = std::max(mx, 1.0 / std::abs(b));
      }
      CHECK(std::abs(sum) < 1e-10 * mx);
      const SpectralModel sm = build_model({100.0}, m);
      CHECK(std::abs(inverse_b_sum(make_regular_set(sm, z))) < 1e-10 * mx);
    }
}

TEST_CASE("p(L) and scale weights") {
  const SpectralModel md = build_model({0.0}, 1);
  const RegularSet Z = make_regular_set(md, {-1.0});
  CHECK(std::abs(p_of_L(md, Z, Scaling::canonical)[0] - 1.0) < 1e-15);
  CHECK(std::abs(p_of_L(md, Z, Scaling::tilde)[0] - 1.0) == 0.0);

  const SpectralModel m3 = build_model({0.0, 1.0, 4.0}, 2);
  const RegularSet Z3 = make_regular_set(m3, {-1.0, -2.5});
  const VecC p = p_of_L(m3, Z3, Scaling::canonical);
  for (Index i = 0; i < 3; ++i) {
    const double l = m3.eigenvalues[i];
    CHECK(std::abs(p[i] - std::pow(l + 1, 2) / ((l + 1) * (l + 2.5))) < 1e-14);
    CHECK(std::norm(p[i]) > 0.0);
  }
  CHECK((p_of_L(m3, Z3, Scaling::tilde) - VecC::Ones(3)).norm() == 0.0);
  const VecR w = scale_weights(m3, Z3, Scaling::tilde);
  CHECK(std::abs(w[2] - 5.0 * 6.5) < 1e-13);

  // P~ must be positive on the spectrum
  const RegularSet bad = make_regular_set(m3, {-1.0, 2.0});
  CHECK(code_of([&] { scale_weights(m3, bad, Scaling::tilde); }) == ErrorCode::InvalidScaling);
  const RegularSet cz = make_regular_set(m3, {cplx(0, 1), cplx(0, -1)});
  CHECK(code_of([&] { scale_weights(m3, cz, Scaling::tilde); }) == ErrorCode::InvalidScaling);
}
