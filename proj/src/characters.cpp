#include "cftspec/characters.hpp"

#include "cftspec/errors.hpp"

#include <ostream>

namespace cftspec::chars {

namespace {

// Upper bound for Sum_{k >= K} exp(f(k)) with f(k) = pi sqrt(2k/3) - 2 pi t k.
// f is concave, so past its maximum the tail is dominated by a geometric
// series with ratio exp(f'(K)). Returns a negative value when K is not yet
// past the maximum.
Real tail_bound(const Real& t, long K) {
  const Real k(K);
  const Real slope = pi() / sqrt(6 * k) - 2 * pi() * t;
  if (slope >= 0) return Real(-1);
  const Real f = pi() * sqrt(2 * k / 3) - 2 * pi() * t * k;
  return exp(f) / (1 - exp(slope));
}

Real rounding_bound(const Real& sum, long terms) {
  const Real eps = pow(Real(10), -static_cast<long>(working_digits()));
  return sum * eps * (terms + 4);
}

std::vector<BigInt> coeffs_from_partitions(int m, int r, int s, long N,
                                           const std::vector<BigInt>& P) {
  const long p = m + 1;
  const long pp = m;
  std::vector<BigInt> a(static_cast<std::size_t>(N) + 1, BigInt(0));
  auto add = [&](long shift, int sign) {
    if (shift < 0 || shift > N) return;
    for (long n = shift; n <= N; ++n) {
      if (sign > 0)
        a[n] += P[n - shift];
      else
        a[n] -= P[n - shift];
    }
  };
  // E_k = k(p p' k + p r - p' s), F_k = k(p p' k + p r + p' s) + r s.
  for (long k = 0;; ++k) {
    bool any = false;
    const std::vector<long> ks = k == 0 ? std::vector<long>{0} : std::vector<long>{k, -k};
    for (long kk : ks) {
      const long E = kk * (p * pp * kk + p * r - pp * s);
      const long F = kk * (p * pp * kk + p * r + pp * s) + static_cast<long>(r) * s;
      if (E <= N) {
        add(E, +1);
        any = true;
      }
      if (F <= N) {
        add(F, -1);
        any = true;
      }
    }
    if (!any && k > 0) break;
  }
  return a;
}

}  // namespace

std::vector<BigInt> partition_numbers(long N) {
  if (N < 0) return {};
  std::vector<BigInt> P(static_cast<std::size_t>(N) + 1, BigInt(0));
  P[0] = 1;
  for (long n = 1; n <= N; ++n) {
    BigInt sum = 0;
    for (long j = 1;; ++j) {
      const long g1 = j * (3 * j - 1) / 2;
      if (g1 > n) break;
      const bool plus = (j % 2) == 1;
      if (plus)
        sum += P[n - g1];
      else
        sum -= P[n - g1];
      const long g2 = j * (3 * j + 1) / 2;
      if (g2 <= n) {
        if (plus)
          sum += P[n - g2];
        else
          sum -= P[n - g2];
      }
    }
    P[n] = sum;
  }
  return P;
}

CharacterSeries character_coeffs(const MinimalModel& model, const Sector& sector, long N) {
  if (N < 0) throw Error(ErrorKind::InvalidArgument, "cutoff must be >= 0");
  const auto P = partition_numbers(N);
  return CharacterSeries{sector.r, sector.s, sector.h, model.c,
                         coeffs_from_partitions(model.m, sector.r, sector.s, N, P)};
}

std::vector<CharacterSeries> all_characters(const MinimalModel& model, long N) {
  if (N < 0) throw Error(ErrorKind::InvalidArgument, "cutoff must be >= 0");
  const auto P = partition_numbers(N);
  std::vector<CharacterSeries> out;
  out.reserve(model.size());
  for (const auto& sec : model.sectors)
    out.push_back(CharacterSeries{sec.r, sec.s, sec.h, model.c,
                                  coeffs_from_partitions(model.m, sec.r, sec.s, N, P)});
  return out;
}

Real default_tolerance() {
  const long digits = static_cast<long>(working_digits());
  return pow(Real(10), -(digits > 16 ? digits - 8 : 8));
}

Evaluation evaluate(const CharacterSeries& series, const Real& t, bool shifted, const Real& tol) {
  if (!(t > 0)) throw Error(ErrorKind::InvalidArgument, "t must be > 0");
  const Rational offset = shifted ? Rational(series.h - series.c / 24) : series.h;
  const Real prefactor = exp(-2 * pi() * t * to_real(offset));
  const Real x = exp(-2 * pi() * t);

  // The series part Sum a_k x^k; the tail check starts once f is decreasing.
  const long N = series.cutoff();
  const Real kstart = 1 / (24 * t * t);
  Real partial(0);
  Real xk(1);
  Real tail(0);
  bool done = false;
  long k = 0;
  for (; k <= N; ++k) {
    if (series.coeffs[k] != 0) partial += Real(series.coeffs[k]) * xk;
    xk *= x;
    if (series.finite) continue;
    if (Real(k + 1) > kstart && ((k & 7) == 7 || k == N)) {
      const Real b = tail_bound(t, k + 1);
      if (b >= 0 && b <= tol * partial) {
        tail = b;
        done = true;
        ++k;
        break;
      }
    }
  }
  if (!series.finite && !done) {
    long need = N + 1;
    for (;; ++need) {
      const Real b = tail_bound(t, need);
      if (b >= 0 && b <= tol * partial) break;
      if (need > 100000000L) break;
    }
    throw InsufficientCutoff("cutoff " + std::to_string(N) + " too small at t = " +
                                 to_decimal(t, 10) + "; need " + std::to_string(need - 1),
                             need - 1);
  }
  Evaluation out;
  out.value = prefactor * partial;
  out.error = prefactor * (tail + rounding_bound(partial, k));
  return out;
}

Evaluation evaluate_small_t(const ModularData& md, const std::vector<CharacterSeries>& series,
                            std::size_t rho, const Real& t, bool shifted, const Real& tol) {
  if (!(t > 0) || t > 1) throw Error(ErrorKind::InvalidArgument, "small-t path needs 0 < t <= 1");
  if (rho >= series.size() || series.size() != md.size())
    throw Error(ErrorKind::InvalidArgument, "sector index out of range");
  if (t == 1) return evaluate(series[rho], t, shifted, tol);

  const Real dual = 1 / t;
  Evaluation out{Real(0), Real(0)};
  for (std::size_t nu = 0; nu < series.size(); ++nu) {
    if (md.S[rho][nu] == 0) continue;
    const Evaluation e = evaluate(series[nu], dual, true, tol);
    out.value += md.S[rho][nu] * e.value;
    out.error += abs(md.S[rho][nu]) * e.error;
  }
  out.error += rounding_bound(abs(out.value), static_cast<long>(series.size()));
  if (!shifted) {
    const Real f = exp(-2 * pi() * t * to_real(series[rho].c / 24));
    out.value *= f;
    out.error *= f;
  }
  return out;
}

Real s_transform_residual(const ModularData& md, const std::vector<CharacterSeries>& series,
                          const std::vector<Real>& grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "grid must be nonempty");
  Real worst(0);
  for (const auto& t : grid) {
    std::vector<Real> direct;
    for (const auto& ser : series) direct.push_back(evaluate(ser, t, true).value);
    for (std::size_t rho = 0; rho < series.size(); ++rho) {
      const Real lhs = evaluate(series[rho], 1 / t, true).value;
      Real rhs(0);
      for (std::size_t nu = 0; nu < series.size(); ++nu) rhs += md.S[rho][nu] * direct[nu];
      worst = std::max(worst, Real(abs(lhs - rhs)));
    }
  }
  return worst;
}

BigInt count_states(const CharacterSeries& series, const Real& lambda) {
  const Real h = to_real(series.h);
  if (lambda < h) return BigInt(0);
  const Real levels = floor(lambda - h);
  if (levels > series.cutoff()) {
    const long need = levels.convert_to<long>();
    throw InsufficientCutoff("lambda beyond series cutoff; need " + std::to_string(need), need);
  }
  const long K = levels.convert_to<long>();
  BigInt n = 0;
  for (long k = 0; k <= K; ++k) n += series.coeffs[k];
  return n;
}

void write_csv(std::ostream& os, const CharacterSeries& series, const std::vector<Real>& grid,
               bool shifted) {
  os << "t,value,error\n";
  for (const auto& t : grid) {
    const Evaluation e = evaluate(series, t, shifted);
    os << to_decimal(t) << ',' << to_decimal(e.value) << ',' << to_decimal(e.error, 6) << '\n';
  }
}

void write_coefficients(std::ostream& os, const CharacterSeries& series) {
  for (const auto& a : series.coeffs) os << a << '\n';
}

}  // namespace cftspec::chars
