#include "cftspec/fock_traces.hpp"

#include "cftspec/errors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace cftspec::fock {

namespace {

void require_contraction(const OneParticleOperator& a) {
  if (a.kind != OperatorKind::Contraction)
    throw Error(ErrorKind::KindMismatch, "operation needs a contraction 0 <= a < 1");
}

// Beyond this a single mode's powers drift into subnormal long doubles.
constexpr long kMaxCutoff = 2000;

}  // namespace

OneParticleOperator OneParticleOperator::contraction(std::vector<Real> eigenvalues) {
  for (const auto& l : eigenvalues)
    if (l < 0 || l >= 1)
      throw Error(ErrorKind::InvalidArgument, "contraction eigenvalue outside [0, 1): " + to_decimal(l, 10));
  return OneParticleOperator{std::move(eigenvalues), OperatorKind::Contraction};
}

OneParticleOperator OneParticleOperator::positive(std::vector<Real> eigenvalues) {
  for (const auto& l : eigenvalues)
    if (!(l > 0))
      throw Error(ErrorKind::InvalidArgument, "positive operator needs eigenvalues > 0");
  return OneParticleOperator{std::move(eigenvalues), OperatorKind::PositiveH};
}

Real gamma_trace(const OneParticleOperator& a, Statistics stat) {
  require_contraction(a);
  Real p(1);
  for (const auto& l : a.eigenvalues) p *= stat == Statistics::Bose ? Real(1 / (1 - l)) : Real(1 + l);
  return p;
}

Real log_gamma_trace(const OneParticleOperator& a, Statistics stat, bool printed_sign) {
  require_contraction(a);
  Real s(0);
  for (const auto& l : a.eigenvalues) {
    if (stat == Statistics::Bose)
      s += printed_sign ? Real(log(1 + l)) : Real(-log(1 - l));
    else
      s += printed_sign ? Real(-log(1 - l)) : Real(log(1 + l));
  }
  return s;
}

long bruteforce_cutoff(std::size_t dim, long max_terms) {
  if (dim == 0) return 0;
  long k = 0;
  while (k < kMaxCutoff && std::pow(static_cast<double>(k + 2), static_cast<double>(dim)) <= static_cast<double>(max_terms)) ++k;
  return k;
}

BruteForce gamma_trace_bruteforce(const OneParticleOperator& a, Statistics stat, long cutoff) {
  require_contraction(a);
  const std::size_t d = a.eigenvalues.size();
  const long K = stat == Statistics::Fermi ? 1 : cutoff;
  if (K < 0) throw Error(ErrorKind::InvalidArgument, "occupancy cutoff must be >= 0");

  // Powers lambda_i^n for n <= K in long double; each pattern is a product
  // of d table entries.
  std::vector<std::vector<long double>> pw(d, std::vector<long double>(K + 1));
  for (std::size_t i = 0; i < d; ++i) {
    const long double l = a.eigenvalues[i].convert_to<long double>();
    pw[i][0] = 1;
    for (long n = 1; n <= K; ++n) pw[i][n] = pw[i][n - 1] * l;
  }
  // Depth-first over modes; the partial product of the outer modes is
  // carried down so each pattern costs one multiplication at the leaf.
  long double sum = 0;
  long terms = 0;
  auto visit = [&](auto&& self, std::size_t i, long double prefix) -> void {
    if (i + 1 == d) {
      for (long n = 0; n <= K; ++n) sum += prefix * pw[i][n];
      terms += K + 1;
      return;
    }
    for (long n = 0; n <= K; ++n) self(self, i + 1, prefix * pw[i][n]);
  };
  if (d == 0) {
    sum = 1;
    terms = 1;
  } else {
    visit(visit, 0, 1.0L);
  }

  BruteForce out;
  out.value = Real(sum);
  out.cutoff = K;
  out.terms = terms;
  // Each term carries at most d roundings, the running sum one more.
  const long double eps = std::numeric_limits<long double>::epsilon();
  out.tail_bound = Real(sum * eps * static_cast<long double>(d + terms + 2));
  if (stat == Statistics::Bose) {
    // Patterns with n_i > K: sum_i lambda_i^{K+1}/(1 - lambda_i) prod_{j != i} 1/(1 - lambda_j).
    Real dropped(0);
    for (std::size_t i = 0; i < d; ++i) {
      const Real& li = a.eigenvalues[i];
      Real term = pow(li, K + 1) / (1 - li);
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) term /= 1 - a.eigenvalues[j];
      dropped += term;
    }
    out.tail_bound += dropped;
  }
  return out;
}

std::vector<RatioRow> fermi_ratio_scan(const OneParticleOperator& h, const std::vector<Real>& grid,
                                       const Real& eps) {
  if (h.kind != OperatorKind::PositiveH)
    throw Error(ErrorKind::KindMismatch, "ratio scan needs a positive one-particle Hamiltonian");
  if (h.eigenvalues.empty()) throw Error(ErrorKind::InvalidArgument, "empty spectrum");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0) || grid[i] > 1)
      throw Error(ErrorKind::InvalidArgument, "grid points must lie in (0, 1]");
    if (i > 0 && !(grid[i] < grid[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "grid must be strictly descending");
  }
  const Real lower = log(Real(2)) - eps;
  const Real upper = 1 + eps;
  std::vector<RatioRow> rows;
  for (const auto& t : grid) {
    RatioRow r;
    r.t = t;
    r.numerator = 0;
    r.denominator = 0;
    for (const auto& l : h.eigenvalues) {
      const Real x = exp(-t * l);
      r.numerator += log1p(x);
      r.denominator += x;
    }
    r.ratio = r.numerator / r.denominator;
    if (r.ratio < lower || r.ratio > upper)
      throw Error(ErrorKind::IdentityViolation,
                  "Fermi ratio " + to_decimal(r.ratio, 12) + " outside [log 2, 1] at t = " +
                      to_decimal(t, 10));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_ratio_csv(std::ostream& os, const std::vector<RatioRow>& rows) {
  os << "t,numerator,denominator,ratio\n";
  for (const auto& r : rows)
    os << to_decimal(r.t) << ',' << to_decimal(r.numerator) << ',' << to_decimal(r.denominator)
       << ',' << to_decimal(r.ratio) << '\n';
}

}  // namespace cftspec::fock
