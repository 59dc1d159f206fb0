#include "peakmodel_app/verify.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "peakmodel/sampling.hpp"

namespace peakmodel::app {

namespace {

class Checks {
public:
  explicit Checks(std::string suite) : suite_(std::move(suite)) {}

  // Evaluates fn and folds its value into the named check; library errors are recorded by code.
  void run(const std::string& name, const std::string& identity, double tol, const std::function<double()>& fn,
           bool lower_bound = false) {
    CheckResult& c = slot(name, identity, tol, lower_bound);
    try {
      const double v = fn();
      if (c.samples == 0)
        c.value = v;
      else
        c.value = lower_bound ? std::min(c.value, v) : std::max(c.value, v);
      if (std::isnan(v)) c.value = v;
      ++c.samples;
    } catch (const Error& e) {
      c.errors.emplace_back(code_name(e.code()));
    }
  }

  void fail(const std::string& name, const std::string& identity, const Error& e) {
    slot(name, identity, 0.0, false).errors.emplace_back(code_name(e.code()));
  }

  void append_to(std::vector<CheckResult>& out) const {
    out.insert(out.end(), checks_.begin(), checks_.end());
  }

private:
  CheckResult& slot(const std::string& name, const std::string& identity, double tol, bool lower_bound) {
    auto it = index_.find(name);
    if (it != index_.end()) return checks_[it->second];
    index_[name] = checks_.size();
    CheckResult c;
    c.suite = suite_;
    c.name = name;
    c.identity = identity;
    c.tolerance = tol;
    c.lower_bound = lower_bound;
    checks_.push_back(c);
    return checks_.back();
  }

  std::string suite_;
  std::vector<CheckResult> checks_;
  std::map<std::string, std::size_t> index_;
};

double rel(const MatC& a, const MatC& b) { return rel_diff(a, b); }

cplx random_point(Rng& rng, const Setup& s, bool upper) {
  for (;;) {
    const cplx z(uniform(rng, -6, 6), upper ? uniform(rng, 0.3, 3) : uniform(rng, -3, 3));
    if (spectral_distance(s.model, z) > 0.05 && !s.Z.contains(z, 0.05) && std::abs(z.imag()) > 0.2) return z;
  }
}

Setup mixed_setup(Rng& rng, int t, bool need_pairs) {
  RandomSetupOptions o;
  if (need_pairs) o.m_min = 2;
  switch (t % 3) {
    case 0: o.real_z = false; return random_setup(rng, o);
    case 1: o.real_z = true; return random_setup(rng, o);
    default: return hermitian_setup(rng, (need_pairs ? 2 : 1) + t % 3, 1 + t % 2);
  }
}

Setup herm_setup(Rng& rng, int t, bool need_pairs) {
  return hermitian_setup(rng, (need_pairs ? 2 : 1) + t % 3, 1 + (t / 3) % 3, t % 3);
}

GramData gram_for(const Setup& s, Inject inj) {
  GramData g = build_gram(s);
  if (inj == Inject::gram_offdiag && s.md() >= 2) {
    MatC G = g.G;
    G(0, 1) += 0.05 * std::sqrt(std::abs(G(0, 0) * G(1, 1)));
    G(1, 0) = std::conj(G(0, 1));
    g = gram_from_matrix(s, G);
  }
  return g;
}

Peak peak_for(const Setup& s, Inject inj) { return Peak{s, gram_for(s, inj)}; }

// Runs body on the (possibly fault-injected) peak model of s; a Gram matrix that
// cannot be factorized is itself a violation of 𝒢 ≻ 0.
void with_peak(Checks& ck, const Setup& s, Inject inj, const std::function<void(const Peak&)>& body) {
  std::optional<Peak> p;
  try {
    p = peak_for(s, inj);
  } catch (const Error& e) {
    ck.fail("gram_positive", "𝒢 is positive definite", e);
    return;
  }
  body(*p);
}

MatC hermitian_matrix(Rng& rng, int d) {
  const MatC A = random_cmat(rng, d, d);
  return (A + A.adjoint()) / 2.0;
}

// ---------------------------------------------------------------- gram

void gram_checks(Checks& ck, const Setup& s, const GramData& g, Rng& rng) {
  ck.run("gram_definition", "𝒢_{(σ,j),(σ',k)} = ⟨g_σ(z_j), g_σ'(z_k)⟩_{-m}", 1e-10,
         [&] { return rel(g.G, gram_from_vectors(s)); });
  ck.run("gram_positive", "𝒢 is positive definite", 0.0, [&] {
    const VecR ev = Eigen::SelfAdjointEigenSolver<MatC>(g.G).eigenvalues();
    return std::max(0.0, -ev[0] / ev[ev.size() - 1]);
  });
  const MatC Gbs = g.Gb.adjoint();
  ck.run("gb_star_generalized_inverse", "𝒢_b* H_b 𝒢_b* = 𝒢_b*", 1e-9, [&] { return rel(Gbs * g.Hb * Gbs, Gbs); });
  ck.run("hb_left_inverse", "H_b* 𝒢_b = I_d", 1e-9,
         [&] { return rel(g.Hb.adjoint() * g.Gb, MatC::Identity(s.d, s.d)); });
  ck.run("ker_gb_star_dimension", "dim ker 𝒢_b* = md − d", 1e-9, [&] {
    const double dim = std::abs(double(g.KerGbStar.cols()) - double(s.md() - s.d));
    const double ann = g.KerGbStar.cols() ? (Gbs * g.KerGbStar).norm() / Gbs.norm() : 0.0;
    return dim + ann;
  });
  if (s.m > 1) ck.run("delta_hermitian", "Δ = 𝒢_b* Z_d b̂ is Hermitian for m > 1", 1e-9, [&] {
    return (g.Delta - g.Delta.adjoint()).norm() / g.Delta.norm();
  });
  ck.run("delta_hat_eigenvectors", "(z𝒢_min − Δ)χ = 0 ⟹ 𝒢_b*(Z_d − z) b̂χ = 0", 1e-9, [&] { return delta_hat_eigen_residual(g); });

  const IdentityResiduals r = identity_checks(s, g, rng(), 4);
  ck.run("R_difference", "R(z_k) − R(z_j)* = (z_k − z̄_j) 𝒢_{(σ,j),(σ',k)}, entries of ℳ", 1e-10,
         [&] { return r.R_difference; });
  ck.run("chi_M_identity", "𝒢^{-1}(𝒢_Z* ξ − ℳ* c(ξ)) = (Z_d − 𝒳ℳ) ξ", 1e-10, [&] { return r.chi_M_identity; });
  if (r.constant_R)
    ck.run("constant_R", "ℳ ξ = R c(ξ) when 𝒢_Z is Hermitian", 1e-10, [&] { return *r.constant_R; });
  if (r.kmin_perp)
    ck.run("kmin_perp", "𝒢_b* 𝒢^{-1}(𝒢_Z* − 𝒢_Z) b̂ c = 0", 1e-10, [&] { return *r.kmin_perp; });
  if (r.gz_skew_identity)
    ck.run("gz_skew_identity", "𝒢_b* 𝒢^{-1}(𝒢_Z* − 𝒢_Z) ξ = Σ_j conj(1/b_j(z_j)) [ℳ* c(ξ)]_{σj}", 1e-10,
           [&] { return *r.gz_skew_identity; });
  ck.run("hermiticity_equivalence", "𝒢_Z Hermitian ⟺ 𝒵 real and 𝒢 j-diagonal ⟺ R(z_j) equal and Hermitian", 0.0,
         [&] { return hermiticity_report(s, g).consistent() ? 0.0 : 1.0; });

  ck.run("partial_fraction", "P̃(L)^{-1} = Σ_j b_j(z_j)^{-1} (L − z_j)^{-1}", 1e-10, [&] {
    const VecC f = random_cvec(rng, s.N);
    const VecC inv = tilde_p_apply(s.model, s.Z, f, true);
    const VecC direct = f.cwiseQuotient(tilde_p_diag(s.model, s.Z));
    return rel_diff(inv, direct);
  });
  if (s.m > 1) ck.run("inverse_b_sum", "Σ_j 1/b_j(z_j) = 0 for m > 1", 1e-10, [&] {
    return std::abs(inverse_b_sum(s.Z)) / s.Z.b_diag.cwiseInverse().cwiseAbs().maxCoeff();
  });
}

// ---------------------------------------------------------------- peak

void peak_green_checks(Checks& ck, const Peak& p, Rng& rng) {
  const Setup& s = p.s;
  ck.run("green_A0", "⟨u, A_0 v⟩ − ⟨A_0 u, v⟩ = ξ_u* 𝒢_Z ξ_v − (𝒢_Z ξ_u)* ξ_v", 1e-10, [&] {
    const PeakVector u{random_cvec(rng, s.N), random_cvec(rng, s.md())};
    const PeakVector v{random_cvec(rng, s.N), random_cvec(rng, s.md())};
    const double sc = norm_H(p, u) * norm_H(p, v) * (1 + s.model.max_abs() + p.g.zd.cwiseAbs().maxCoeff());
    return std::abs(boundary_form_A0(p, u, v) - green_A0(p, u, v)) / sc;
  });
  ck.run("green_Amax",
         "⟨u, A_max v⟩ − ⟨A_max u, v⟩ = ⟨Γ̃_0u, Γ̃_1v⟩ − ⟨Γ̃_1u, Γ̃_0v⟩ + ξ_u* 𝒢_Z ξ_v − (𝒢_Z ξ_u)* ξ_v", 1e-10, [&] {
           const ExtendedVector u{random_cvec(rng, s.N), random_cvec(rng, s.d), random_cvec(rng, s.md()),
                                  default_z_ref(s)};
           const ExtendedVector v{random_cvec(rng, s.N), random_cvec(rng, s.d), random_cvec(rng, s.md()),
                                  random_point(rng, s, false)};
           const BoundaryValues bu = boundary_gamma(p, u), bv = boundary_gamma(p, v);
           const cplx rhs = bu.gamma0.dot(bv.gamma1) - bu.gamma1.dot(bv.gamma0) +
                            green_A0(p, {VecC::Zero(s.N), u.xi}, {VecC::Zero(s.N), v.xi});
           const double sc = norm_H(p, embed_extended(p, u)) * norm_H(p, amax_apply(p, v)) +
                             norm_H(p, amax_apply(p, u)) * norm_H(p, embed_extended(p, v));
           return std::abs(boundary_form_Amax(p, u, v) - rhs) / sc;
         });
}

void peak_weyl_checks(Checks& ck, const Peak& p, Rng& rng) {
  const Setup& s = p.s;
  const cplx z = random_point(rng, s, true), w = random_point(rng, s, false);
  ck.run("weyl_formula", "Γ̃_1 γ(z) = R̃(z) + Q_𝒢(z)", 1e-10, [&] {
    const PeakWeyl W = weyl_peak(p, z);
    return rel(W.M, W.M_formula);
  });
  ck.run("weyl_symmetry", "M(z̄) = M(z)*", 1e-10,
         [&] { return rel(weyl_peak(p, std::conj(z)).M, weyl_peak(p, z).M.adjoint()); });
  ck.run("weyl_simplicity", "(M(z) − M(w)*)/(z − w̄) = γ(w)* γ(z)", 1e-10, [&] {
    const MatC lhs = (weyl_peak(p, z).M - weyl_peak(p, w).M.adjoint()) / (z - std::conj(w));
    MatC gg(s.d, s.d);
    for (int a = 0; a < s.d; ++a)
      for (int b = 0; b < s.d; ++b)
        gg(a, b) = inner_H(p, peak_gamma(p, w, VecC::Unit(s.d, a)), peak_gamma(p, z, VecC::Unit(s.d, b)));
    return rel(lhs, gg);
  });
  ck.run("weyl_nevanlinna", "Im M(z) ≥ 0 for Im z > 0", 1e-10, [&] {
    const MatC M = weyl_peak(p, z).M;
    const MatC im = (M - M.adjoint()) / cplx(0, 2);
    return std::max(0.0, -Eigen::SelfAdjointEigenSolver<MatC>(im).eigenvalues()[0] / std::max(1.0, im.norm()));
  });
  ck.run("krein_peak_graph", "Γ̃ŷ ∈ Θ and (A_max − z)ŷ = v for ŷ = R_Θ(z)v", 1e-9, [&] {
    const TripleHandle h = peak_handle(p);
    const LinearRelationFD th = relation_graph(hermitian_matrix(rng, s.d));
    const VecC v = random_cvec(rng, h.dim);
    return h.graph_residual(th, z, v, krein_solve(h, th, z, v));
  });
}

void classical_checks(Checks& ck, const Setup& s, Rng& rng) {
  ck.run("krein_classical_graph", "Γŷ ∈ Θ and (L_0* − z)ŷ = v for ŷ = R_Θ(z)v", 1e-9, [&] {
    const TripleHandle h = classical_handle(s);
    const LinearRelationFD th = relation_graph(hermitian_matrix(rng, s.d));
    const cplx z = random_point(rng, s, true);
    const VecC v = random_cvec(rng, h.dim);
    return h.graph_residual(th, z, v, krein_solve(h, th, z, v));
  });
}

void b_branch_checks(Checks& ck, const Peak& p, Rng& rng) {
  const Setup& s = p.s;
  const cplx z = random_point(rng, s, true), w = random_point(rng, s, false);
  const PeakVector v{random_cvec(rng, s.N), random_cvec(rng, s.md())};
  ck.run("b0_graph", "(y, v) ∈ B_0 − z for y = (B_0 − z)^{-1} v", 1e-9,
         [&] { return b0_graph_residual(p, z, b0_resolvent(p, z, v), v); });
  ck.run("b0_kernel_annihilation", "(B_0 − z)^{-1}(0, ξ) = 0 for ξ ∈ ker 𝒢_b*", 1e-9, [&] {
    double worst = 0.0;
    for (const PeakVector& k : hperp_basis(p)) worst = std::max(worst, norm_H(p, b0_resolvent(p, z, k)) / norm_H(p, k));
    return worst;
  });
  ck.run("b0_resolvent_identity", "R(z) − R(w) = (z − w) R(z) R(w)", 1e-9, [&] {
    const PeakVector lhs = b0_resolvent(p, z, v) - b0_resolvent(p, w, v);
    const PeakVector rhs = (z - w) * b0_resolvent(p, z, b0_resolvent(p, w, v));
    return norm_H(p, lhs - rhs) / std::max({norm_H(p, lhs), norm_H(p, rhs), 1e-300});
  });
}

// ---------------------------------------------------------------- reference

void reference_checks(Checks& ck, const Peak& p, Rng& rng) {
  const Setup& s = p.s;
  const KhatFrame fr = make_frame(p);
  const cplx z = random_point(rng, s, false);
  ck.run("l0star_von_neumann", "L̂_0* u = L u# + z ĝ_z(c) for u = u# + ĝ_z(c) in canonical coordinates", 1e-10, [&] {
    const VecC u = random_cvec(rng, s.N);
    return rel_diff(l0star_apply(fr, u), l0star_von_neumann(fr, von_neumann_coords(fr, u, z)));
  });
  ck.run("gammahat_prime_restriction", "Γ̂′(u′ + k̂) = Γ̂(u′ + k̂)", 1e-10, [&] {
    const PrimeCoords pc{random_cvec(rng, s.N), random_cvec(rng, s.d), random_point(rng, s, false)};
    const VecC xi = random_cvec(rng, s.md());
    const BoundaryValues a = gammahat_prime(fr, pc, xi);
    const VonNeumannCoords vc = prime_to_von_neumann(fr, pc, xi, z);
    const BoundaryValues b = gammahat(fr, vc.u_sharp, vc.c, z);
    return rel_diff(a.gamma0, b.gamma0) + rel_diff(a.gamma1, b.gamma1);
  });
  ck.run("d_of_L_identity", "d(P L u) = 𝒳⟨φ̂, u⟩ + 𝒢^{-1} 𝒢_Z* d(P u)", 1e-10,
         [&] { return d_of_L_identity_check(fr, random_cvec(rng, s.N)); });
  ck.run("c_surjective", "c(K̂) = ℂ^d", 0.0, [&] {
    MatC CK(s.d, s.md());
    for (Index a = 0; a < s.md(); ++a) CK.col(a) = c_of(fr, fr.ghat.col(a));
    Eigen::JacobiSVD<MatC> svd(CK);
    const VecR& sv = svd.singularValues();
    Index r = 0;
    while (r < sv.size() && sv[r] > 1e-10 * sv[0]) ++r;
    return double(s.d - r);
  });
  ck.run("gammahat_green", "⟨L̂_0* u, v⟩ − ⟨u, L̂_0* v⟩ = ⟨Γ̂_1u, Γ̂_0v⟩ − ⟨Γ̂_0u, Γ̂_1v⟩", 1e-10, [&] {
    const cplx w = random_point(rng, s, false);
    const VonNeumannCoords u{random_cvec(rng, s.N), random_cvec(rng, s.d), z};
    const VonNeumannCoords v{random_cvec(rng, s.N), random_cvec(rng, s.d), w};
    const VecC Au = l0star_von_neumann(fr, u), Av = l0star_von_neumann(fr, v);
    const VecC eu = evaluate(fr, u), ev = evaluate(fr, v);
    const BoundaryValues bu = gammahat(fr, u.u_sharp, u.c, z), bv = gammahat(fr, v.u_sharp, v.c, w);
    const cplx lhs = Au.dot(ev) - eu.dot(Av);
    const cplx rhs = bu.gamma1.dot(bv.gamma0) - bu.gamma0.dot(bv.gamma1);
    return std::abs(lhs - rhs) / (Au.norm() * ev.norm() + eu.norm() * Av.norm());
  });
}

// ---------------------------------------------------------------- omega

void omega_checks(Checks& ck, const Peak& p, Rng& rng, std::uint64_t iota_seed, const IotaSpec* user) {
  const Setup& s = p.s;
  const cplx z = random_point(rng, s, true);
  ck.run("omega_identity", "ι = I ⟹ M_Ω(z) = M_Γ̃(z)", 1e-10,
         [&] { return rel(m_omega(p, make_iota(p, IotaSpec::identity()), z).M, weyl_peak(p, z).M); });
  ck.run("omega_fixing", "ι F_σ(z*) = F_σ(z*) for all σ ⟹ Δ^Ω(z*) = 0", 1e-10, [&] {
    std::vector<PeakVector> F;
    for (int sg = 0; sg < s.d; ++sg) F.push_back(peak_gamma(p, z, VecC::Unit(s.d, sg)));
    const IotaDeformation io = make_iota(p, IotaSpec::fixing(F, iota_seed, 0.8));
    const OmegaWeyl w = m_omega(p, io, z);
    return w.Delta.norm() / w.M_tilde.norm();
  });
  const IotaDeformation gen = make_iota(p, user ? *user : IotaSpec::random(iota_seed, 0.6));
  if (!user)
    ck.run("omega_generic", "generic ι ⟹ Δ^Ω(z) ≠ 0 (‖Δ^Ω‖/‖M_Γ̃‖ bounded below)", 1e-6, [&] {
      const OmegaWeyl w = m_omega(p, gen, z);
      return w.Delta.norm() / w.M_tilde.norm();
    }, true);
  ck.run("omega_preservation", "z 𝔑_z(A_max) ⊆ 𝔑_1(ι) ⟹ Δ^Ω(z) = 0", 0.0, [&] {
    double bad = 0.0;
    for (const IotaDeformation& io : {make_iota(p, IotaSpec::identity()), gen}) {
      if (!weyl_preserved(p, io, z).consistent) bad = 1.0;
      if (in_sigma_iota(p, io, 0.0) && !weyl_preserved(p, io, 0.0).consistent) bad = 1.0;
    }
    return bad;
  });
  ck.run("omega_eigen", "ι A_max H_z(c) = z H_z(c)", 1e-9,
         [&] { return h_z_eigen_residual(p, gen, z, random_cvec(rng, s.d)); });
  ck.run("omega_symmetry", "M_Ω(z̄) = M_Ω(z)*", 1e-9,
         [&] { return rel(m_omega(p, gen, std::conj(z)).M, m_omega(p, gen, z).M.adjoint()); });
}

}  // namespace

bool VerifyReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass()) return false;
  return !checks.empty();
}

VerifyReport run_verify(const VerifyOptions& opt, const RunConfig* config) {
  VerifyReport rep;
  rep.options = opt;
  const bool pairs = opt.inject != Inject::none;
  auto want = [&](Suite s) { return opt.suite == Suite::all || opt.suite == s; };

  std::optional<Setup> user;
  if (config) user = build_setup(*config);
  auto user_hermitian = [&](const Peak& p) { return hermiticity_report(p.s, p.g).gz_hermitian; };

  if (want(Suite::gram)) {
    Checks ck("gram");
    Rng rng(opt.seed);
    auto run = [&](const Setup& s) { with_peak(ck, s, opt.inject, [&](const Peak& p) { gram_checks(ck, s, p.g, rng); }); };
    if (user) run(*user);
    for (int t = 0; t < opt.trials; ++t) run(mixed_setup(rng, t, pairs));
    ck.append_to(rep.checks);
  }
  if (want(Suite::peak)) {
    Checks ck("peak");
    Rng rng(opt.seed + 1);
    if (user)
      with_peak(ck, *user, opt.inject, [&](const Peak& p) {
        peak_green_checks(ck, p, rng);
        classical_checks(ck, p.s, rng);
        if (user_hermitian(p)) peak_weyl_checks(ck, p, rng);
        if (p.s.m > 1) b_branch_checks(ck, p, rng);
      });
    for (int t = 0; t < opt.trials; ++t) {
      with_peak(ck, mixed_setup(rng, t, pairs), opt.inject, [&](const Peak& p) {
        peak_green_checks(ck, p, rng);
        classical_checks(ck, p.s, rng);
        if (p.s.m > 1) b_branch_checks(ck, p, rng);
      });
      with_peak(ck, herm_setup(rng, t, pairs), opt.inject, [&](const Peak& p) { peak_weyl_checks(ck, p, rng); });
    }
    ck.append_to(rep.checks);
  }
  if (want(Suite::reference)) {
    Checks ck("reference");
    Rng rng(opt.seed + 2);
    auto run = [&](const Setup& s) { with_peak(ck, s, opt.inject, [&](const Peak& p) { reference_checks(ck, p, rng); }); };
    if (user) run(*user);
    for (int t = 0; t < opt.trials; ++t) run(mixed_setup(rng, t, pairs));
    ck.append_to(rep.checks);
  }
  if (want(Suite::omega)) {
    Checks ck("omega");
    Rng rng(opt.seed + 3);
    if (user)
      with_peak(ck, *user, opt.inject, [&](const Peak& p) {
        if (!user_hermitian(p)) return;
        const IotaSpec spec = iota_spec(*config, p);
        omega_checks(ck, p, rng, opt.seed, config->iota.kind == IotaConfig::Kind::random ? &spec : nullptr);
      });
    for (int t = 0; t < opt.trials; ++t)
      with_peak(ck, herm_setup(rng, t, pairs), opt.inject,
                [&](const Peak& p) { omega_checks(ck, p, rng, opt.seed * 1000 + t, nullptr); });
    ck.append_to(rep.checks);
  }
  return rep;
}

json report_to_json(const VerifyReport& r) {
  json checks = json::array();
  json failures = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"suite", c.suite},
                      {"name", c.name},
                      {"identity", c.identity},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"comparison", c.lower_bound ? ">" : "<="},
                      {"samples", c.samples},
                      {"errors", c.errors},
                      {"pass", c.pass()}});
    if (!c.pass()) failures.push_back({{"suite", c.suite}, {"name", c.name}, {"identity", c.identity}});
  }
  return {{"schema", "peakmodel/verify/v1"},
          {"suite", suite_name(r.options.suite)},
          {"seed", r.options.seed},
          {"trials", r.options.trials},
          {"inject", inject_name(r.options.inject)},
          {"pass", r.pass()},
          {"checks", checks},
          {"failures", failures}};
}

std::optional<Suite> parse_suite(const std::string& s) {
  if (s == "all") return Suite::all;
  if (s == "gram") return Suite::gram;
  if (s == "peak") return Suite::peak;
  if (s == "reference") return Suite::reference;
  if (s == "omega") return Suite::omega;
  return std::nullopt;
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::all: return "all";
    case Suite::gram: return "gram";
    case Suite::peak: return "peak";
    case Suite::reference: return "reference";
    case Suite::omega: return "omega";
  }
  return "all";
}

std::optional<Inject> parse_inject(const std::string& s) {
  if (s == "none") return Inject::none;
  if (s == "gram-offdiag") return Inject::gram_offdiag;
  return std::nullopt;
}

std::string inject_name(Inject i) { return i == Inject::none ? "none" : "gram-offdiag"; }

}  // namespace peakmodel::app
