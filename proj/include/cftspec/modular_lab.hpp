#pragma once

// Finite-dimensional modular theory on H1 (x) H2 (x) H3: spatial derivatives,
// Connes cocycles, weights from modular flows, index products, Araki
// relative entropy and the derivative identity of the log mass function.
//
// Every routine is a template over the real scalar; double and float128
// are instantiated. Matrix functions go through Hermitian eigensolves.

#include "cftspec/quad_eigen.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace cftspec::lab {

using Quad = boost::multiprecision::float128;

template <class T>
using Cx = std::complex<T>;
template <class T>
using Mat = Eigen::Matrix<Cx<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<Cx<T>, Eigen::Dynamic, 1>;
template <class T>
using RVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Residual levels per scalar: `membership` for algebra membership and
/// flow hypotheses, `identity` for exact algebraic identities.
template <class T>
struct Tolerances;
template <>
struct Tolerances<double> {
  static double membership() { return 1e-10; }
  static double identity() { return 1e-10; }
};
template <>
struct Tolerances<Quad> {
  static Quad membership() { return Quad("1e-20"); }
  static Quad identity() { return Quad("1e-16"); }
};

/// Densities whose eigenvalue ratio exceeds this are rejected.
inline constexpr double kMaxCondition = 1e12;

/// H1 (x) H2 (x) H3 with N1 = B(H1), N2 = B(H3), M1 = B(H1 (x) H2) = N2',
/// M2 = B(H2 (x) H3) = N1'.
struct Triple {
  int d1 = 1;
  int d2 = 1;
  int d3 = 1;

  int dim() const { return d1 * d2 * d3; }
  /// Throws Error(InvalidArgument) for a non-positive dimension.
  void validate() const;
};

// ---- matrix helpers -------------------------------------------------------

template <class T>
struct HermitianEig {
  RVec<T> values;
  Mat<T> vectors;
};

template <class T>
HermitianEig<T> hermitian_eig(const Mat<T>& a);

/// V f(lambda) V*
template <class T>
Mat<T> apply_function(const HermitianEig<T>& e, const std::function<Cx<T>(const T&)>& f);

template <class T>
Mat<T> matrix_log(const Mat<T>& a);  // positive a
template <class T>
Mat<T> matrix_power(const Mat<T>& a, const T& p);  // positive a
template <class T>
Mat<T> matrix_it(const Mat<T>& a, const T& t);  // a^{it}, positive a

template <class T>
Mat<T> kron(const Mat<T>& a, const Mat<T>& b);

/// Trace over the left (right) factor of x on C^dl (x) C^dr.
template <class T>
Mat<T> trace_left(const Mat<T>& x, int dl, int dr);
template <class T>
Mat<T> trace_right(const Mat<T>& x, int dl, int dr);

/// Throws Error(NotSeparating) unless rho is Hermitian, positive definite
/// with unit trace and condition number <= kMaxCondition.
template <class T>
void check_density(const Mat<T>& rho, const std::string& what);

/// Ginibre density G G* / Tr, G with independent complex Gaussian entries.
template <class T>
Mat<T> random_density(int d, std::mt19937_64& rng);

template <class T>
Mat<T> maximally_mixed(int d);

// ---- spatial derivative and cocycles --------------------------------------

enum class Side { Left, Right };

/// H = C^left (x) C^right, R = B of the factor named by `algebra`, S = R'.
struct Split {
  int left = 1;
  int right = 1;
  Side algebra = Side::Left;

  int dim_R() const { return algebra == Side::Left ? left : right; }
  int dim_S() const { return algebra == Side::Left ? right : left; }
  Split commutant() const;
};

/// Embeds an operator on the R (S) factor into the full space.
template <class T>
Mat<T> embed_R(const Mat<T>& x, const Split& split);
template <class T>
Mat<T> embed_S(const Mat<T>& y, const Split& split);

/// Distance of x from S = R' and the S-part 1 (x) Tr_R(x)/d_R.
template <class T>
struct Projection {
  Mat<T> part;  // operator on the S factor
  T residual;   // || x - embed_S(part) ||
};
template <class T>
Projection<T> project_S(const Mat<T>& x, const Split& split);

/// d phi / d psi for phi on R with density rho_R and psi on S with density
/// rho_S: rho_R (x) rho_S^{-1} in the split's factor order.
template <class T>
Mat<T> spatial_derivative(const Mat<T>& rho_R, const Mat<T>& rho_S, const Split& split);

template <class T>
struct SpatialCheck {
  T modular_R;  // max || D^{it} x D^{-it} - sigma^phi_t(x) || over matrix units of R
  T modular_S;  // max || D^{-it} y D^{it} - sigma^psi_t(y) || over matrix units of S
  T inverse;    // || D (d psi/d phi) - 1 ||
};

/// Checks the implementing properties of D at time t with D^{it} taken from
/// an eigensolve of D itself.
template <class T>
SpatialCheck<T> check_spatial_derivative(const Mat<T>& D, const Mat<T>& rho_R, const Mat<T>& rho_S,
                                         const Split& split, const T& t);

template <class T>
struct Cocycle {
  Mat<T> u;          // operator on the S factor
  T membership;      // distance of the full-space product from S
};

/// (D psi : D psi0)_t = (d phi/d psi)^{-it} (d phi/d psi0)^{it}, computed on
/// the full space with phi the density rho_phi on R (tracial if empty), then
/// restricted to S. Throws Error(Cocycle) if the product is not in S.
template <class T>
Cocycle<T> connes_cocycle(const Mat<T>& rho_psi, const Mat<T>& rho_psi0, const Split& split,
                          const T& t, const Mat<T>& rho_phi = Mat<T>());

template <class T>
struct CocycleCheck {
  T unitarity;       // || u u* - 1 ||
  T membership;
  T cocycle;         // || u_{t+s} - u_t sigma^{psi0}_t(u_s) ||
  T reconstruction;  // || (d phi/d psi0)^{it} - (d phi/d psi)^{it} u_t ||, u_t = rho_psi^{it} rho_psi0^{-it}
};

template <class T>
CocycleCheck<T> check_cocycle(const Mat<T>& rho_psi, const Mat<T>& rho_psi0, const Mat<T>& rho_phi,
                              const Split& split, const T& t, const T& s);

// ---- flows and weights ----------------------------------------------------

/// V(t) = exp(itK) for a self-adjoint K, with its eigensystem cached.
template <class T>
struct FlowGenerator {
  Mat<T> K;
  HermitianEig<T> eig;

  static FlowGenerator from(const Mat<T>& K);
  Mat<T> V(const T& t) const;       // exp(itK)
  Mat<T> exp_K(const T& s) const;   // exp(sK)
  int dim() const { return static_cast<int>(K.rows()); }
};

/// K = log rho1 (x) 1 (x) 1 - 1 (x) 1 (x) log rho3 + c on the triple: Ad V(t)
/// is sigma^{phi1}_t on N1 and sigma^{phi2}_{-t} on N2.
template <class T>
FlowGenerator<T> product_flow(const Triple& triple, const Mat<T>& rho1, const Mat<T>& rho3,
                              const T& c = T(0));

/// Largest distance from R' of (rho_R^{-it} (x) 1) V(sign * t) over sampled
/// t; zero iff Ad V(sign * t) restricted to R is the modular group of rho_R.
template <class T>
T flow_hypothesis_residual(const FlowGenerator<T>& flow, int sign, const Mat<T>& rho_R,
                           const Split& split);

/// A unit vector with full-rank reduced densities on both factors.
template <class T>
struct VectorState {
  Vec<T> xi;
  Split split;
  Mat<T> rho_R;
  Mat<T> rho_S;

  /// Normalizes xi; throws Error(NotSeparating) if a reduced density is
  /// rank deficient.
  static VectorState make(const Vec<T>& xi, const Split& split);
};

/// (exp(-K) xi, xi) after checking that V restricts to the modular group of
/// the vector state on R. Throws Error(HypothesisViolation).
template <class T>
T weight_total_mass(const FlowGenerator<T>& flow, const VectorState<T>& phi);

/// psi(1) for the weight psi on S with (d phi/d psi)^{it} = V(sign * t),
/// by analytic continuation of psi0((D psi : D psi0)_t) to t = -i:
/// psi0 of the S-part of exp(-sign K) (d phi/d psi0). Throws
/// Error(HypothesisViolation) or Error(Cocycle).
template <class T>
T weight_total_mass(const FlowGenerator<T>& flow, int sign, const Mat<T>& rho_R,
                    const Mat<T>& sigma_S, const Split& split);

template <class T>
struct IndexReport {
  T psi1;  // mass of the weight on M1 built from phi2 and V(-t)
  T psi2;  // mass of the weight on M2 built from phi1 and V(t)
  T product;
  T hypothesis;  // worst flow hypothesis residual
};

/// psi1(1) psi2(1) with reference states sigma_M1 on M1 and sigma_M2 on M2
/// (maximally mixed if empty). Throws Error(HypothesisViolation).
template <class T>
IndexReport<T> index_product(const Triple& triple, const Mat<T>& rho1, const Mat<T>& rho3,
                             const FlowGenerator<T>& flow, const Mat<T>& sigma_M1 = Mat<T>(),
                             const Mat<T>& sigma_M2 = Mat<T>());

/// -(log Delta_{xi2, xi1} xi1, xi1) in the standard form on Hilbert-Schmidt
/// space, xi_i = rho_i^{1/2}.
template <class T>
T araki_relative_entropy(const Mat<T>& rho1, const Mat<T>& rho2);

/// log [M1 : N1] = log d2^2
double pimsner_popa_entropy(const Triple& triple);

/// Density of phi1 . eps1 on M1 (eps1 the trace-preserving expectation
/// onto N1): rho1 (x) 1/d2.
template <class T>
Mat<T> expectation_density_M1(const Triple& triple, const Mat<T>& rho1);
/// Density of phi2 . eps2 on M2: 1/d2 (x) rho3.
template <class T>
Mat<T> expectation_density_M2(const Triple& triple, const Mat<T>& rho3);

/// orientation * log(d(phi1 . eps1)/d phi2) + 1/2 log [M1 : N1]. Orientation
/// +1 reproduces the flow of the symmetric setup; -1 is the opposite sign
/// of the logarithm.
template <class T>
Mat<T> generator_from_expectation(const Triple& triple, const Mat<T>& rho1, const Mat<T>& rho3,
                                  int orientation);

template <class T>
struct DerivativeReport {
  T z_at_1;           // Z(1)
  T sqrt_index;       // [M1 : N1]^{1/2}
  T derivative;       // d/dt [t log Z(t)] at t = 1, central differences
  T log_index;
  T s_rel;            // S(phi2 . eps2 | psi0)
  T expected;         // log Ind + S
  T printed;          // log Ind - S
  T deviation;        // |derivative - expected|
  T printed_deviation;
  T generator_residual;          // || K from the expectation - K of the flow ||
  T generator_restriction;       // flow hypothesis residual of that K on N1
  T flipped_restriction;         // same for the opposite orientation
  T step;
};

/// Symmetric setup d1 = d3, rho1 = rho3 = rho, c = 0, psi0 = sigma0 on M2.
/// Z(t) = psi0(S-part of exp(-tK) (d phi1/d psi0)^t). Throws
/// Error(IdentityViolation) if Z(1) != Ind^{1/2} or the derivative misses
/// log Ind + S by more than 1e-6.
template <class T>
DerivativeReport<T> entropy_derivative_identity(const Triple& triple, const Mat<T>& rho,
                                                const Mat<T>& sigma0, const T& step = T(0));

/// Swap of the outer legs of a symmetric triple.
template <class T>
Mat<T> swap_outer(const Triple& triple);

// ---- reports --------------------------------------------------------------

nlohmann::json identity_json(const std::string& identity, double lhs, double rhs,
                             const Triple& triple, std::uint64_t seed);

/// Deterministic per-case generator from (seed, case index).
std::mt19937_64 case_rng(std::uint64_t seed, std::uint64_t index);

struct BatterySummary {
  nlohmann::json report;
  bool pass = true;
};

/// index_product over all triples with legs <= max_leg, `seeds` random
/// state choices each, double precision.
BatterySummary index_battery(std::uint64_t seed, int max_leg = 4, int seeds = 20);
/// index_product on one triple over `seeds` random states; when d1 == d3
/// also the symmetric split with each mass equal to d2. Double precision.
BatterySummary triple_battery(std::uint64_t seed, const Triple& triple, int seeds = 20);
/// Symmetric split: each mass equals d2 for d1 = d3 <= max_leg, float128.
BatterySummary symmetric_battery(std::uint64_t seed, int max_leg = 3, int seeds = 5);
/// Araki entropy against Tr rho1 (log rho1 - log rho2), float128.
BatterySummary entropy_battery(std::uint64_t seed, int pairs = 100, int max_dim = 6);
/// Spatial derivatives and cocycle identities on random states, float128.
BatterySummary cocycle_battery(std::uint64_t seed, int cases = 20, int max_leg = 3);
/// The derivative identity on (2, 3, 2) and a few random symmetric setups.
BatterySummary derivative_battery(std::uint64_t seed);

template <class T>
double to_double(const T& x) {
  return static_cast<double>(x);
}

}  // namespace cftspec::lab
