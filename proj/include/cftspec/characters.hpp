#pragma once

// Sector characters as exact q-series and their evaluation on the imaginary
// axis, directly or through the modular S transform.

#include "cftspec/modular_data.hpp"
#include "cftspec/numeric.hpp"

#include <iosfwd>
#include <vector>

namespace cftspec::chars {

using modular::MinimalModel;
using modular::ModularData;
using modular::Sector;

/// coeffs[k] is the multiplicity of the L0 eigenvalue h + k.
struct CharacterSeries {
  int r = 1;
  int s = 1;
  Rational h;
  Rational c;
  std::vector<BigInt> coeffs;
  // True when the spectrum is exactly the listed levels (toy inputs); the
  // evaluator then skips the tail bound.
  bool finite = false;

  long cutoff() const { return static_cast<long>(coeffs.size()) - 1; }
};

/// p(0..N) by Euler's pentagonal recurrence.
std::vector<BigInt> partition_numbers(long N);

CharacterSeries character_coeffs(const MinimalModel& model, const Sector& sector, long N);

/// One series per sector, in model order, sharing one partition table.
std::vector<CharacterSeries> all_characters(const MinimalModel& model, long N);

struct Evaluation {
  Real value;
  Real error;  // certified absolute bound: truncation tail plus rounding
};

/// Default relative tolerance for tail bounds: 10^-(digits - 8).
Real default_tolerance();

/// Sum_k a_k exp(-2 pi t (h + k - c/24)) when shifted, otherwise
/// Tr exp(-2 pi t L0) = exp(-2 pi t c/24) * shifted. Throws
/// InsufficientCutoff if the tail bound exceeds tol * |value|.
Evaluation evaluate(const CharacterSeries& series, const Real& t, bool shifted,
                    const Real& tol = default_tolerance());

/// chi_rho(i t) = Sum_nu S_{rho nu} chi_nu(i/t). Meant for t < 1; at t == 1
/// this is the direct evaluation.
Evaluation evaluate_small_t(const ModularData& md, const std::vector<CharacterSeries>& series,
                            std::size_t rho, const Real& t, bool shifted,
                            const Real& tol = default_tolerance());

/// max over sectors and grid of |chi_rho(i/t) - Sum_nu S_{rho nu} chi_nu(i t)|.
Real s_transform_residual(const ModularData& md, const std::vector<CharacterSeries>& series,
                          const std::vector<Real>& grid);

/// N(lambda) = Sum_{k : h + k <= lambda} a_k.
BigInt count_states(const CharacterSeries& series, const Real& lambda);

/// Rows "t,value,error" for every grid point.
void write_csv(std::ostream& os, const CharacterSeries& series, const std::vector<Real>& grid,
               bool shifted);

/// Newline-delimited decimal coefficients a_0..a_N.
void write_coefficients(std::ostream& os, const CharacterSeries& series);

}  // namespace cftspec::chars
