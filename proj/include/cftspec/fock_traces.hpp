#pragma once

// Traces of second-quantized contractions on Bose/Fermi Fock space,
// computed from the one-particle spectrum and by summing over occupation
// numbers, and the Fermi ratio log Tr exp(-tH) / Tr exp(-th).

#include "cftspec/numeric.hpp"

#include <iosfwd>
#include <vector>

namespace cftspec::fock {

enum class Statistics { Bose, Fermi };
enum class OperatorKind { Contraction, PositiveH };

/// A selfadjoint one-particle operator given by its eigenvalues.
struct OneParticleOperator {
  std::vector<Real> eigenvalues;
  OperatorKind kind = OperatorKind::Contraction;

  /// Throws Error(InvalidArgument) unless 0 <= lambda < 1 (Contraction)
  /// or lambda > 0 (PositiveH).
  static OneParticleOperator contraction(std::vector<Real> eigenvalues);
  static OneParticleOperator positive(std::vector<Real> eigenvalues);
};

/// Bose: prod (1 - lambda)^-1. Fermi: prod (1 + lambda).
/// Throws Error(KindMismatch) for a PositiveH operator.
Real gamma_trace(const OneParticleOperator& a, Statistics stat);

/// log Tr Gamma(a) = -/+ sum log(1 -/+ lambda) (upper sign Bose).
/// printed_sign flips the sign inside the logarithm, i.e.
/// +/- sum log(1 +/- lambda); kept only as a negative control.
Real log_gamma_trace(const OneParticleOperator& a, Statistics stat, bool printed_sign = false);

struct BruteForce {
  Real value;
  Real tail_bound;  // |exact - value| <= tail_bound
  long cutoff = 0;  // per-mode occupancy cutoff actually used
  long terms = 0;   // occupation patterns summed
};

/// Sum over occupation multi-indices of prod lambda_i^{n_i}: n_i <= cutoff
/// for Bose, n_i in {0, 1} for Fermi (exact, cutoff ignored). The Bose
/// bound covers the dropped patterns (some n_i > cutoff) and rounding.
BruteForce gamma_trace_bruteforce(const OneParticleOperator& a, Statistics stat, long cutoff);

/// Largest Bose occupancy cutoff with (cutoff + 1)^dim <= max_terms, capped
/// at 2000.
long bruteforce_cutoff(std::size_t dim, long max_terms = 2000000);

struct RatioRow {
  Real t;
  Real numerator;    // sum log(1 + exp(-t lambda))
  Real denominator;  // sum exp(-t lambda)
  Real ratio;
};

/// Fermi ratio log Tr exp(-tH) / Tr exp(-th) on a descending grid in (0, 1].
/// Throws Error(KindMismatch) for a contraction, Error(InvalidArgument) for
/// a bad grid and Error(IdentityViolation) if a ratio leaves
/// [log 2 - eps, 1 + eps].
std::vector<RatioRow> fermi_ratio_scan(const OneParticleOperator& h, const std::vector<Real>& grid,
                                       const Real& eps = Real("1e-9"));

/// Rows "t,numerator,denominator,ratio".
void write_ratio_csv(std::ostream& os, const std::vector<RatioRow>& rows);

}  // namespace cftspec::fock
