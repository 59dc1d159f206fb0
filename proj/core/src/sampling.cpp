#include "peakmodel/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace peakmodel {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

cplx normal_c(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

VecC random_cvec(Rng& rng, Index n) {
  VecC v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal_c(rng);
  return v;
}

MatC random_cmat(Rng& rng, Index rows, Index cols) {
  MatC a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = normal_c(rng);
  return a;
}

MatC random_unitary(Rng& rng, Index n) {
  Eigen::HouseholderQR<MatC> qr(random_cmat(rng, n, n));
  return qr.householderQ() * MatC::Identity(n, n);
}

namespace {

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<double> random_spectrum(Rng& rng, int N, double spread) {
  std::vector<double> ev(N);
  for (auto& x : ev) x = uniform(rng, -spread, spread);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<cplx> random_regular_points(Rng& rng, const std::vector<double>& ev, int m, bool real,
                                        double spread) {
  std::vector<cplx> z;
  while (static_cast<int>(z.size()) < m) {
    cplx w;
    if (real) {
      w = uniform(rng, -spread - 2.0, spread + 2.0);
      double dist = 1e300;
      for (double l : ev) dist = std::min(dist, std::abs(l - w.real()));
      if (dist < 0.15) continue;
    } else {
      const double im = uniform(rng, 0.5, 2.5) * (uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0);
      w = {uniform(rng, -spread - 1.0, spread + 1.0), im};
    }
    bool ok = true;
    for (const auto& v : z) ok = ok && std::abs(v - w) > 0.7;
    if (ok) z.push_back(w);
  }
  return z;
}

}  // namespace

Setup random_setup(Rng& rng, const RandomSetupOptions& opt) {
  const int m = uniform_int(rng, opt.m_min, opt.m_max);
  const int d = uniform_int(rng, opt.d_min, opt.d_max);
  const int N = uniform_int(rng, std::max(opt.N_min, m * d + 1), std::max(opt.N_max, m * d + 1));
  const auto ev = random_spectrum(rng, N, opt.spread);
  const SpectralModel model = build_model(ev, m);
  const RegularSet Z = make_regular_set(model, random_regular_points(rng, ev, m, opt.real_z, opt.spread));
  const FunctionalFamily fam = make_family(model, random_cmat(rng, N, d));
  return make_setup(model, Z, fam);
}

Setup hermitian_setup(Rng& rng, int m, int d, int extra, const AdmissibleMode& mode) {
  // common real regular points, spacing 3
  std::vector<cplx> z(m);
  const double z0 = -1.5 * m + uniform(rng, -0.5, 0.5);
  for (int j = 0; j < m; ++j) z[j] = z0 + 3.0 * j;

  std::vector<double> ev;
  std::vector<std::vector<double>> blocks(d);
  for (int sg = 0; sg < d; ++sg)
    for (int i = 0; i < m; ++i) {
      const double l = z[i].real() + uniform(rng, 0.3, 2.7);
      blocks[sg].push_back(l);
      ev.push_back(l);
    }
  for (int e = 0; e < extra; ++e) {
    double l;
    do {
      l = uniform(rng, z0 - 2.0, z0 + 3.0 * m + 1.0);
    } while (std::any_of(z.begin(), z.end(), [&](cplx w) { return std::abs(w.real() - l) < 0.3; }));
    ev.push_back(l);
  }
  const int N = static_cast<int>(ev.size());
  const SpectralModel model = build_model(ev, m);
  const RegularSet Z = make_regular_set(model, z);
  const VecR P = scale_weights(model, Z, Scaling::canonical);

  // a_i = κ Π_j(λ_i − z_j) / Π_{i'≠i}(λ_i − λ_i') > 0 for interlaced points
  MatC phi = MatC::Zero(N, d);
  for (int sg = 0; sg < d; ++sg) {
    const double kappa = uniform(rng, 0.5, 2.0);
    for (int i = 0; i < m; ++i) {
      const double l = blocks[sg][i];
      double a = kappa;
      for (int j = 0; j < m; ++j) a *= (l - z[j].real());
      for (int k = 0; k < m; ++k)
        if (k != i) a /= (l - blocks[sg][k]);
      const int row = sg * m + i;
      const double phase = uniform(rng, 0.0, 2.0 * M_PI);
      phi(row, sg) = std::sqrt(a * P[row]) * std::polar(1.0, phase);
    }
  }
  phi = phi * random_unitary(rng, d);
  return make_setup(model, Z, make_family(model, phi), Scaling::canonical, mode);
}

Setup tilde_setup(Rng& rng, int N, int m, int d) {
  auto ev = random_spectrum(rng, N, 2.5);
  for (auto& x : ev) x += 2.5;  // spectrum in [0, 5]
  std::vector<cplx> z(m);
  for (int j = 0; j < m; ++j) z[j] = -(0.5 + 1.2 * j + uniform(rng, 0.0, 0.4));
  const SpectralModel model = build_model(ev, m);
  const RegularSet Z = make_regular_set(model, z);
  return make_setup(model, Z, make_family(model, random_cmat(rng, N, d)), Scaling::tilde);
}

}  // namespace peakmodel
