#pragma once

// Random inputs for property tests, verification runs and benchmarks.

#include <cstdint>
#include <random>
#include <vector>

#include "peakmodel/perturbation.hpp"

namespace peakmodel {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
cplx normal_c(Rng& rng);
VecC random_cvec(Rng& rng, Index n);
MatC random_cmat(Rng& rng, Index rows, Index cols);
MatC random_unitary(Rng& rng, Index n);

struct RandomSetupOptions {
  int N_min = 6, N_max = 24;
  int m_min = 1, m_max = 3;
  int d_min = 1, d_max = 3;
  bool real_z = false;     // real regular points placed in spectral gaps / outside
  double spread = 5.0;     // eigenvalues in [−spread, spread]
};

// Generic configuration: random spectrum, random complex φ, regular points well
// separated from each other and from the spectrum.  𝒢_Z is generically non-Hermitian.
Setup random_setup(Rng& rng, const RandomSetupOptions& opt = {});

// Configuration with Hermitian 𝒢_Z (canonical scaling): every functional is
// supported on its own block of m eigenvalues interlaced with a common real 𝒵,
// weights chosen so that Σ_i |φ_i|²/P_i /((λ_i − z_j)(λ_i − z_k)) = 0 for j ≠ k;
// the columns are then mixed by a random unitary.  `extra` eigenvalues carry no
// functional mass.
Setup hermitian_setup(Rng& rng, int m, int d, int extra = 2,
                      const AdmissibleMode& mode = AdmissibleMode::direct());

// Real regular set strictly below the spectrum, so tilde scaling is admissible.
Setup tilde_setup(Rng& rng, int N, int m, int d);

}  // namespace peakmodel
