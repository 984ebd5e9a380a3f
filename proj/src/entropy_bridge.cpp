#include "cftspec/entropy_bridge.hpp"

#include "cftspec/errors.hpp"

namespace cftspec::bh {

namespace {

// Quantum dimensions computed from S-matrix ratios can land just below 1.
bool below_one(const Real& x) {
  return x < 1 - pow(Real(10), -static_cast<int>(working_digits()) + 10);
}

}  // namespace

BlackHoleParams BlackHoleParams::schwarzschild(const Real& M) {
  if (!(M > 0)) throw Error(ErrorKind::InvalidArgument, "mass must be > 0");
  return BlackHoleParams{16 * pi() * M * M, 1 / (4 * M), M};
}

BlackHoleParams BlackHoleParams::make(const Real& A, const Real& kappa, const Real& M) {
  if (!(A > 0) || !(kappa > 0) || !(M > 0))
    throw Error(ErrorKind::InvalidArgument, "area, surface gravity and mass must be > 0");
  return BlackHoleParams{A, kappa, M};
}

Thermo hawking_and_bekenstein(const BlackHoleParams& p) {
  return Thermo{2 * pi() / p.kappa, p.A / 4, 3 * p.A / (2 * pi())};
}

Real area_from_central_charge(const Real& c) { return 2 * pi() * c / 3; }

AlphaReport verify_alpha_quarter(const Real& M, const Real& dM, const Real& alpha) {
  if (!(M > 0) || !(dM > 0) || !(dM < M))
    throw Error(ErrorKind::InvalidArgument, "need 0 < dM < M");
  auto S = [&](const Real& m, const Real& a) { return a * 16 * pi() * m * m; };
  const Real beta = 8 * pi() * M;
  const Real dS = (S(M + dM, alpha) - S(M - dM, alpha)) / (2 * dM);
  AlphaReport r;
  r.alpha = alpha;
  // dS/dM is linear in alpha: solve with the unit-alpha difference quotient.
  r.extracted = beta / ((S(M + dM, Real(1)) - S(M - dM, Real(1))) / (2 * dM));
  r.residual = abs(dS - beta) / beta;
  r.pass = r.residual <= Real("1e-9");
  return r;
}

CellEntropy cell_entropy(const std::vector<std::pair<long, long>>& cells, const Real& C) {
  CellEntropy out{BigInt(1), Real(0)};
  for (const auto& [k, n] : cells) {
    if (k < 1 || n < 0) throw Error(ErrorKind::InvalidArgument, "cells need k >= 1 and n >= 0");
    BigInt p;
    mpz_ui_pow_ui(p.backend().data(), static_cast<unsigned long>(k), static_cast<unsigned long>(n));
    out.degrees *= p;
    out.entropy += C * n * log(Real(k));
  }
  return out;
}

Real cell_increment(long k, const Real& C) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  return C * log(Real(k));
}

FreeEnergyIncrement incremental_free_energy(const Real& d_rho, const Real& d_sigma,
                                            const Real& kappa, const std::optional<Real>& a1_rho,
                                            const std::optional<Real>& a1_sigma) {
  if (below_one(d_rho) || below_one(d_sigma)) throw Error(ErrorKind::InvalidArgument, "dimensions must be >= 1");
  if (!(kappa > 0)) throw Error(ErrorKind::InvalidArgument, "surface gravity must be > 0");
  FreeEnergyIncrement out;
  const Real dlog = log(d_rho) - log(d_sigma);
  out.dF = 2 * pi() / kappa * dlog;
  if (a1_rho && a1_sigma) {
    out.chi_rho = 12 * *a1_rho;
    out.chi_sigma = 12 * *a1_sigma;
    out.dF_from_chi = pi() / (6 * kappa) * (*out.chi_rho - *out.chi_sigma);
    out.cross_check = abs((*a1_rho - *a1_sigma) - dlog);
    out.consistent = *out.cross_check <= Real("1e-3");
    if (!out.consistent)
      out.warning = "a1 difference misses log d_rho - log d_sigma by " +
                    to_decimal(*out.cross_check, 6) + "; the net may not be modular";
  }
  return out;
}

MuFreeEnergy mu_free_energy(const Real& mu, const Real& d, long n) {
  if (below_one(mu) || below_one(d) || n < 1)
    throw Error(ErrorKind::InvalidArgument, "need mu >= 1, d >= 1 and n >= 1");
  MuFreeEnergy f;
  const Real lmu = log(mu);
  f.log_Z = Real(n - 1) / 2 * lmu + log(d);
  f.F_n = -Real(n - 1) / (4 * pi()) * lmu - log(d) / (2 * pi());
  f.F_mean = -lmu / (4 * pi());
  f.a0 = lmu / 2;
  f.a1_log_mu = lmu;
  f.a1_formula = "log(mu) - lim_n S(phi_hat_n | phi'_n) / n";
  return f;
}

Real cardy_reference_log_density(const Real& c, const Real& lambda) {
  const Real x = c * (lambda - c / 24) / 6;
  if (x < 0) throw Error(ErrorKind::InvalidArgument, "lambda below c/24");
  return 2 * pi() * sqrt(x);
}

nlohmann::json summary(const BlackHoleParams& p, const Real& mu) {
  const Thermo t = hawking_and_bekenstein(p);
  const MuFreeEnergy f = mu_free_energy(mu, Real(1), 1);
  const Real F_chiral = 2 * pi() * t.c / 24;
  const Real F_mean = 2 * F_chiral;
  return nlohmann::json{{"A", to_decimal(p.A)},
                        {"kappa", to_decimal(p.kappa)},
                        {"M", to_decimal(p.M)},
                        {"beta", to_decimal(t.beta)},
                        {"S", to_decimal(t.S)},
                        {"c", to_decimal(t.c)},
                        {"F_mean", to_decimal(F_mean)},
                        {"F_mean_chiral", to_decimal(F_chiral)},
                        {"S_equals_F_mean", abs(t.S - F_mean) <= Real("1e-40") * t.S},
                        {"mu", to_decimal(mu)},
                        {"F_mean_mu", to_decimal(f.F_mean)}};
}

}  // namespace cftspec::bh
