#include "peakmodel/spectral_core.hpp"

#include <cmath>
#include <sstream>

namespace peakmodel {

namespace {

void check_len(const SpectralModel& model, const VecC& f, const char* what) {
  if (f.size() != model.size()) {
    std::ostringstream os;
    os << what << ": vector of length " << f.size() << ", model has N=" << model.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

SpectralModel build_model(const std::vector<double>& eigenvalues, int m, double tol) {
  if (eigenvalues.empty()) throw Error(ErrorCode::EmptySpectrum, "spectrum is empty");
  if (m < 1) throw Error(ErrorCode::InvalidOrder, "order m must be >= 1");
  SpectralModel model;
  model.eigenvalues = Eigen::Map<const VecR>(eigenvalues.data(), Index(eigenvalues.size()));
  if (!model.eigenvalues.allFinite())
    throw Error(ErrorCode::NonFiniteEigenvalue, "eigenvalues must be finite");
  model.m = m;
  model.gap_tol = tol > 0 ? tol : 1e-8 * (1.0 + model.max_abs());
  return model;
}

double spectral_distance(const SpectralModel& model, cplx z) {
  return (model.eigenvalues.cast<cplx>().array() - z).abs().minCoeff();
}

void require_resolvent(const SpectralModel& model, cplx z) {
  if (!(spectral_distance(model, z) > model.gap_tol)) {
    std::ostringstream os;
    os << "z = " << z << " is within " << model.gap_tol << " of the spectrum";
    throw Error(ErrorCode::SpectralCollision, os.str());
  }
}

cplx scale_inner(const SpectralModel& model, int n, const VecC& f, const VecC& g) {
  check_len(model, f, "scale_inner");
  check_len(model, g, "scale_inner");
  cplx s = 0;
  for (Index i = 0; i < model.size(); ++i)
    s += std::pow(std::abs(model.eigenvalues[i]) + 1.0, n) * std::conj(f[i]) * g[i];
  return s;
}

double scale_norm(const SpectralModel& model, int n, const VecC& f) {
  return std::sqrt(std::max(0.0, scale_inner(model, n, f, f).real()));
}

VecC apply_scale_power(const SpectralModel& model, double s, const VecC& f) {
  check_len(model, f, "apply_scale_power");
  VecC out(f.size());
  for (Index i = 0; i < f.size(); ++i)
    out[i] = std::pow(std::abs(model.eigenvalues[i]) + 1.0, model.m * s) * f[i];
  return out;
}

VecC resolvent_L(const SpectralModel& model, cplx z, const VecC& f) {
  check_len(model, f, "resolvent_L");
  require_resolvent(model, z);
  return f.array() / (model.eigenvalues.cast<cplx>().array() - z);
}

cplx RegularSet::b(cplx w) const {
  cplx r = 1;
  for (Index j = 0; j < z.size(); ++j) r *= (w - z[j]);
  return r;
}

cplx RegularSet::b_j(int j, cplx w) const {
  cplx r = 1;
  for (Index k = 0; k < z.size(); ++k)
    if (k != j) r *= (w - z[k]);
  return r;
}

bool RegularSet::contains(cplx w, double tol) const {
  for (Index j = 0; j < z.size(); ++j)
    if (std::abs(w - z[j]) <= tol) return true;
  return false;
}

bool RegularSet::all_real(double tol) const {
  for (Index j = 0; j < z.size(); ++j)
    if (std::abs(z[j].imag()) > tol) return false;
  return true;
}

cplx inverse_b_sum(const RegularSet& Z) {
  cplx s = 0;
  for (Index j = 0; j < Z.b_diag.size(); ++j) s += 1.0 / Z.b_diag[j];
  return s;
}

RegularSet make_regular_set(const SpectralModel& model, const std::vector<cplx>& z) {
  if (static_cast<int>(z.size()) != model.m) {
    std::ostringstream os;
    os << "regular set has " << z.size() << " points, order m=" << model.m;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  RegularSet Z;
  Z.z = Eigen::Map<const VecC>(z.data(), Index(z.size()));
  const double scale = 1.0 + model.max_abs() + Z.z.cwiseAbs().maxCoeff();
  for (Index j = 0; j < Z.z.size(); ++j) {
    if (!std::isfinite(Z.z[j].real()) || !std::isfinite(Z.z[j].imag()))
      throw Error(ErrorCode::DimensionMismatch, "regular point is not finite");
    require_resolvent(model, Z.z[j]);
    for (Index k = 0; k < j; ++k)
      if (std::abs(Z.z[j] - Z.z[k]) <= 1e-12 * scale) {
        std::ostringstream os;
        os << "regular points z_" << k + 1 << " and z_" << j + 1 << " coincide";
        throw Error(ErrorCode::DuplicateRegularPoint, os.str());
      }
  }
  Z.b_diag.resize(Z.z.size());
  for (int j = 0; j < Z.size(); ++j) Z.b_diag[j] = Z.b_j(j, Z.z[j]);

  if (Z.size() > 1) {
    const double mx = Z.b_diag.cwiseInverse().cwiseAbs().maxCoeff();
    if (std::abs(inverse_b_sum(Z)) >= 1e-10 * mx)
      throw Error(ErrorCode::IllConditionedRegularSet,
                  "sum of 1/b_j(z_j) does not vanish numerically; regular points too close");
  }
  return Z;
}

VecC tilde_p_diag(const SpectralModel& model, const RegularSet& Z) {
  VecC out(model.size());
  for (Index i = 0; i < model.size(); ++i) out[i] = Z.b(model.eigenvalues[i]);
  return out;
}

VecC tilde_p_apply(const SpectralModel& model, const RegularSet& Z, const VecC& f, bool inverse) {
  check_len(model, f, "tilde_p_apply");
  if (!inverse) return tilde_p_diag(model, Z).cwiseProduct(f);
  VecC out = VecC::Zero(f.size());
  for (int j = 0; j < Z.size(); ++j) out += resolvent_L(model, Z.z[j], f) / Z.b_diag[j];
  return out;
}

VecR scale_weights(const SpectralModel& model, const RegularSet& Z, Scaling s) {
  VecR w(model.size());
  if (s == Scaling::canonical) {
    for (Index i = 0; i < model.size(); ++i)
      w[i] = std::pow(std::abs(model.eigenvalues[i]) + 1.0, model.m);
    return w;
  }
  if (!Z.all_real())
    throw Error(ErrorCode::InvalidScaling, "tilde scaling needs a real regular set");
  const VecC pt = tilde_p_diag(model, Z);
  for (Index i = 0; i < model.size(); ++i) {
    if (!(pt[i].real() > 0))
      throw Error(ErrorCode::InvalidScaling,
                  "tilde scaling needs prod_j (lambda - z_j) > 0 on the whole spectrum");
    w[i] = pt[i].real();
  }
  return w;
}

VecC p_of_L(const SpectralModel& model, const RegularSet& Z, Scaling s) {
  if (s == Scaling::tilde) {
    scale_weights(model, Z, s);  // validates
    return VecC::Ones(model.size());
  }
  const VecR w = scale_weights(model, Z, s);
  const VecC pt = tilde_p_diag(model, Z);
  return w.cast<cplx>().cwiseQuotient(pt);
}

}  // namespace peakmodel
