#pragma once

// Heat-trace asymptotics: least-squares extraction of (a0, a1, a2) from
// t log Tr exp(-2 pi t L0), dimension estimates, Kac-Wakimoto ratios, state
// counting slopes, the flat Weyl demo and two-dimensional combinations.

#include "cftspec/characters.hpp"
#include "cftspec/modular_data.hpp"

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace cftspec::spectral {

using chars::CharacterSeries;
using chars::Evaluation;

/// t -> log Tr exp(-2 pi t L0) with an absolute error bound on the log.
using LogTraceFn = std::function<Evaluation(const Real& t)>;

/// A minimal model together with its modular data and characters.
struct ChiralData {
  modular::MinimalModel model;
  modular::ModularData md;
  std::vector<CharacterSeries> series;
};

ChiralData make_chiral(int m, long cutoff = 400);

/// Unshifted log-trace of one sector through the small-t modular path.
LogTraceFn log_trace(std::shared_ptr<const ChiralData> data, std::size_t rho);

/// {0.01, 0.02, 0.03, 0.04, 0.05}
std::vector<Real> default_grid();

/// t_max * {0.2, 0.4, 0.6, 0.8, 1} with t_max = 2 pi h_min / log(1e10), so
/// the neglected corrections exp(-2 pi h_min / t) stay below 1e-10.
std::vector<Real> auto_grid(const modular::MinimalModel& model);

struct AsymptoticFit {
  Real n_dim;  // local log-log dimension at the smallest grid point, 0 if undefined
  Real a0;
  Real a1;
  Real a2;
  Real residual;   // max |t log Tr - (a0 + a1 t + a2 t^2)| on the grid
  Real threshold;  // rejection level the residual was tested against
  std::vector<Real> grid;
  std::vector<Real> correction_gaps;    // g_k of the extra basis terms t exp(-2 pi g_k / t)
  std::vector<Real> correction_coeffs;  // their fitted coefficients
};

/// Absolute floor of the residual rejection level. The certified evaluation
/// error alone is far smaller than the exponentially small terms the
/// three-term model leaves out.
Real fit_residual_floor();

/// Least squares of t log Tr on {1, t, t^2}, plus t exp(-2 pi g / t) for each
/// entry of correction_gaps (the leading exponentially small terms of the
/// modular expansion; their coefficients are fitted, not imposed).
/// Throws Error(NonElliptic) if a grid point exceeds 0.1, the residual is
/// above max(10 * eval error, floor), or a0 vanishes within that level.
AsymptoticFit fit_invariants(const LogTraceFn& trace_fn, const std::vector<Real>& grid,
                             const std::vector<Real>& correction_gaps = {});

/// Smallest h_nu > 0 with S_{rho nu} != 0, i.e. the first correction
/// exp(-2 pi h_nu / t) to the vacuum-dominated small-t trace of rho.
/// Empty for a single-sector model.
std::vector<Real> leading_gap(const ChiralData& data, std::size_t rho);

struct Targets {
  Real a0;
  Real a1;
  Real a2;
};

/// (pi c/12, log d - log(mu)/2, -pi c/12)
Targets modular_targets(const ChiralData& data, std::size_t rho);

struct DimensionEstimate {
  Real slope;    // -2 d log(log Tr)/d log t, central difference in log t
  Real literal;  // -2 log(log Tr)/log t
};

/// Throws Error(UndefinedDimension) when log Tr <= 1 at t.
DimensionEstimate dimension_estimate(const LogTraceFn& trace_fn, const Real& t);

/// Tr exp(-t L0,rho) / Tr exp(-t L0,sigma); exactly 1 when rho == sigma.
Real kw_ratio(const ChiralData& data, std::size_t rho, std::size_t sigma, const Real& t);

/// d/dt [t log Tr exp(-t L0)] by a central difference with one Richardson
/// step. log_tr maps t to log Tr exp(-t L0). step == 0 means t/10.
Real index_density_derivative(const std::function<Real(const Real&)>& log_tr, const Real& t,
                              const Real& step = Real(0));
Real index_density_derivative(const ChiralData& data, std::size_t rho, const Real& t,
                              const Real& step = Real(0));

struct Comparison {
  bool same_dimension;
  Real a0_dev;     // |a0 - a0'|
  Real log_ratio;  // log of the supplied ratio limit
  Real a1_diff;    // a1 - a1'
  Real a1_dev;     // |log_ratio - a1_diff|
  bool pass;
};

/// Throws Error(Inconsistency) if the dimensions differ by more than 5% while
/// ratio_limit is nonzero.
Comparison compare_log_elliptic(const AsymptoticFit& a, const AsymptoticFit& b,
                                const Real& ratio_limit);

struct CardyReport {
  double slope;
  double target;  // 2 pi sqrt(c/6)
  double rel_dev;
  double lower_slope;
  double upper_slope;
  bool integrity;  // half-window slopes agree within 10%
  bool pass;       // integrity and rel_dev <= 5%
  long points;
};

/// Least-squares slope of log N(lambda) against sqrt(lambda) over the
/// integers of [lo, hi]. Throws WindowTooSmall if hi < 4 lo and
/// InsufficientCutoff if the series does not reach hi.
CardyReport cardy_count_check(const CharacterSeries& series, long lo, long hi);

enum class Manifold { Circle, Torus };

struct WeylReport {
  int n = 1;
  Real volume;  // fitted a0 of (4 pi t)^(n/2) Tr exp(-t Delta)
  Real a1;
  Real analytic_volume;
  Real rel_dev;
  std::vector<Real> grid;
  std::vector<Real> traces;
};

/// Flat circle of length L (or the square torus L x L): spectrum
/// (2 pi k / L)^2, k in Z.
Real flat_heat_trace(Manifold manifold, const Real& L, const Real& t);
WeylReport weyl_heat_demo(Manifold manifold, const Real& L, const std::vector<Real>& grid);

struct TwoDimSpec {
  std::vector<std::vector<long>> Z;
  std::shared_ptr<const ChiralData> left;
  std::shared_ptr<const ChiralData> right;
  Real inclusion_index;  // [A : A0] = Sum Z_ij d_i d_j
  Real mu2d;             // mu_+ mu_- / [A : A0]^2
  Rational c_avg;        // (c_+ + c_-)/2
};

/// Validates Z (Z_00 = 1, nonnegative, matching sizes) and fills the
/// derived fields. Throws Error(InvalidArgument).
TwoDimSpec make_two_dim(std::vector<std::vector<long>> Z, std::shared_ptr<const ChiralData> left,
                        std::shared_ptr<const ChiralData> right);

/// log Tr exp(-2 pi t H) with Tr = Sum Z_ij Tr_i^+ Tr_j^-.
LogTraceFn log_trace_2d(const TwoDimSpec& spec);

/// Fit of the two-dimensional trace. Targets: a0 = 2 pi c_avg/12,
/// a1 = -log(mu2d)/2, a2 = -a0.
AsymptoticFit combine_2d(const TwoDimSpec& spec, const std::vector<Real>& grid,
                         const std::vector<Real>& correction_gaps = {});
Targets two_dim_targets(const TwoDimSpec& spec);

nlohmann::json fit_report(const std::string& sector, const AsymptoticFit& fit,
                          const Targets& targets);

/// Rows "t,t_log_tr".
void write_fit_csv(std::ostream& os, const LogTraceFn& trace_fn, const std::vector<Real>& grid);

}  // namespace cftspec::spectral
