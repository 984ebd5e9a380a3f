#pragma once

// Black-hole arithmetic in geometric units: Hawking temperature, area
// entropy, cell counting, incremental free energy and the mu free energies.

#include "cftspec/numeric.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cftspec::bh {

struct BlackHoleParams {
  Real A;      // horizon area
  Real kappa;  // surface gravity
  Real M;      // mass

  /// Schwarzschild: kappa = 1/(4M), A = 16 pi M^2.
  static BlackHoleParams schwarzschild(const Real& M);
  /// Throws Error(InvalidArgument) unless all three are positive.
  static BlackHoleParams make(const Real& A, const Real& kappa, const Real& M);
};

struct Thermo {
  Real beta;  // 2 pi / kappa
  Real S;     // A / 4
  Real c;     // 3 A / (2 pi), from c/12 = A/(8 pi)
};

Thermo hawking_and_bekenstein(const BlackHoleParams& p);

/// A = 2 pi c / 3
Real area_from_central_charge(const Real& c);

struct AlphaReport {
  Real alpha;      // the alpha in S = alpha A
  Real extracted;  // alpha solved from the central difference dS/dM = beta
  Real residual;   // |dS/dM - beta| / beta
  bool pass;       // residual <= 1e-9
};

/// S(M) = alpha 16 pi M^2 differentiated by a central difference with step dM
/// and compared with beta = 8 pi M. Throws Error(InvalidArgument) unless
/// 0 < dM < M.
AlphaReport verify_alpha_quarter(const Real& M, const Real& dM, const Real& alpha = Real("0.25"));

struct CellEntropy {
  BigInt degrees;  // prod k_i^{n_i}
  Real entropy;    // C sum n_i log k_i
};

/// cells are (k_i, n_i) with k_i >= 1 and n_i >= 0; throws Error(InvalidArgument).
CellEntropy cell_entropy(const std::vector<std::pair<long, long>>& cells, const Real& C = Real(1));

/// Entropy added by one more particle with k degrees of freedom: C log k.
Real cell_increment(long k, const Real& C = Real(1));

struct FreeEnergyIncrement {
  Real dF;  // (2 pi / kappa)(log d_rho - log d_sigma)
  std::optional<Real> chi_rho;  // 12 a1
  std::optional<Real> chi_sigma;
  std::optional<Real> dF_from_chi;     // (pi / (6 kappa))(chi_rho - chi_sigma)
  std::optional<Real> cross_check;     // |(a1_rho - a1_sigma) - (log d_rho - log d_sigma)|
  bool consistent = true;              // cross_check <= 1e-3 when a1 values are given
  std::string warning;
};

/// Throws Error(InvalidArgument) for d < 1 or kappa <= 0. An a1 mismatch
/// only sets `consistent = false` and a warning.
FreeEnergyIncrement incremental_free_energy(const Real& d_rho, const Real& d_sigma,
                                            const Real& kappa,
                                            const std::optional<Real>& a1_rho = std::nullopt,
                                            const std::optional<Real>& a1_sigma = std::nullopt);

struct MuFreeEnergy {
  Real log_Z;      // log Z_n(2 pi) = (n - 1)/2 log mu + log d
  Real F_n;        // -(n - 1)/(4 pi) log mu - log d / (2 pi)
  Real F_mean;     // -log mu / (4 pi)
  Real a0;         // log mu / 2
  Real a1_log_mu;  // the computable part of a1: log mu
  std::string a1_formula;
};

/// Throws Error(InvalidArgument) unless mu >= 1, d >= 1 and n >= 1.
MuFreeEnergy mu_free_energy(const Real& mu, const Real& d, long n);

/// Heuristic reference curve: log rho(lambda) = 2 pi sqrt(c (lambda - c/24) / 6).
Real cardy_reference_log_density(const Real& c, const Real& lambda);

/// {"A", "kappa", "M", "beta", "S", "c", "F_mean", "F_mean_chiral",
/// "S_equals_F_mean", "mu", "F_mean_mu"}. F_mean = 2 pi c / 12 is the
/// two-dimensional mean free energy, F_mean_chiral half of it.
nlohmann::json summary(const BlackHoleParams& p, const Real& mu);

}  // namespace cftspec::bh
