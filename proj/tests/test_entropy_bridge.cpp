#include "cftspec/entropy_bridge.hpp"
#include "cftspec/errors.hpp"
#include "cftspec/spectral_invariants.hpp"
#include "cftspec/virasoro.hpp"

#include <doctest.h>

#include <random>

using namespace cftspec;
using namespace cftspec::bh;

namespace {

bool close(const Real& a, const Real& b, const char* tol) { return abs(a - b) <= Real(tol); }

}  // namespace

TEST_SUITE("entropy_bridge") {

TEST_CASE("Schwarzschild thermodynamics") {
  const auto p = BlackHoleParams::schwarzschild(Real(1));
  CHECK(close(p.kappa, Real("0.25"), "1e-45"));
  CHECK(close(p.A, 16 * pi(), "1e-45"));
  const auto t = hawking_and_bekenstein(p);
  CHECK(close(t.beta, 8 * pi(), "1e-45"));
  CHECK(close(t.S, 4 * pi(), "1e-45"));
  CHECK(close(t.c, Real(24), "1e-45"));

  const auto q = BlackHoleParams::make(Real(1), 2 * pi(), Real(1));
  CHECK(close(hawking_and_bekenstein(q).beta, Real(1), "1e-45"));

  CHECK_THROWS_AS(BlackHoleParams::schwarzschild(Real(0)), Error);
  CHECK_THROWS_AS(BlackHoleParams::make(Real(1), Real(-1), Real(1)), Error);
}

TEST_CASE("area and central charge round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (int i = 0; i < 50; ++i) {
    const Real A(u(rng));
    const auto t = hawking_and_bekenstein(BlackHoleParams::make(A, Real(1), Real(1)));
    CHECK(abs(area_from_central_charge(t.c) - A) <= Real("1e-12") * A);
    CHECK(abs(t.S - A / 4) <= Real("1e-12") * A);
  }
  // c fed back: S = pi c / 6, which is the two-dimensional a0 = 2 pi c / 12.
  const Real c("0.5");
  const auto t = hawking_and_bekenstein(
      BlackHoleParams::make(area_from_central_charge(c), Real(1), Real(1)));
  CHECK(close(t.S, pi() * c / 6, "1e-45"));
  const auto f = vir::free_energy(Rational(1, 2), 1, true);
  CHECK(close(t.S, f.fmean, "1e-45"));
}

TEST_CASE("alpha one quarter") {
  const auto r = verify_alpha_quarter(Real(1), Real("1e-6"));
  CHECK(r.pass);
  CHECK(r.residual <= Real("1e-9"));
  for (const char* M : {"0.001", "1", "37.5", "1e6"}) {
    const auto s = verify_alpha_quarter(Real(M), Real(M) * Real("1e-6"));
    CHECK(abs(s.extracted - Real("0.25")) <= Real("1e-8"));
    CHECK(s.pass);
  }
  const auto bad = verify_alpha_quarter(Real(1), Real("1e-6"), Real("0.5"));
  CHECK_FALSE(bad.pass);
  CHECK(close(bad.residual, Real(1), "1e-9"));
  CHECK_THROWS_AS(verify_alpha_quarter(Real(1), Real(2)), Error);
}

TEST_CASE("cell counting") {
  const auto one = cell_entropy({{2, 10}});
  CHECK(one.degrees == 1024);
  CHECK(close(one.entropy, 10 * log(Real(2)), "1e-45"));
  const auto two = cell_entropy({{2, 3}, {3, 2}});
  CHECK(two.degrees == 72);
  CHECK(close(two.entropy, log(Real(72)), "1e-45"));
  CHECK(close(cell_increment(2), log(Real(2)), "1e-45"));
  CHECK(close(cell_entropy({{2, 11}}).entropy - one.entropy, cell_increment(2), "1e-45"));

  // degrees == exp(entropy / C) with big integers on one side
  const Real C("1.5");
  const auto big = cell_entropy({{7, 40}, {12, 33}, {1, 5}}, C);
  const Real lhs = to_real(big.degrees);
  CHECK(abs(exp(big.entropy / C) - lhs) <= Real("1e-10") * lhs);

  CHECK(cell_entropy({}).degrees == 1);
  CHECK_THROWS_AS(cell_entropy({{0, 1}}), Error);
  CHECK_THROWS_AS(cell_entropy({{2, -1}}), Error);
}

TEST_CASE("incremental free energy") {
  const Real d_sigma = sqrt(Real(2));
  const auto r = incremental_free_energy(d_sigma, Real(1), Real(1));
  CHECK(close(r.dF, pi() * log(Real(2)), "1e-45"));
  CHECK(abs(r.dF - Real("2.1776")) < Real("1e-4"));
  CHECK(incremental_free_energy(d_sigma, d_sigma, Real(1)).dF == 0);

  // additivity over three sectors
  const Real a = sqrt(Real(3)), b = (1 + sqrt(Real(5))) / 2, c = Real(1);
  const Real kappa("0.3");
  const Real sum = incremental_free_energy(a, b, kappa).dF + incremental_free_energy(b, c, kappa).dF;
  CHECK(close(sum, incremental_free_energy(a, c, kappa).dF, "1e-45"));

  CHECK_THROWS_AS(incremental_free_energy(Real("0.5"), Real(1), Real(1)), Error);
  CHECK_THROWS_AS(incremental_free_energy(Real(1), Real(1), Real(0)), Error);
}

TEST_CASE("incremental free energy from fitted a1") {
  auto d = std::make_shared<const spectral::ChiralData>(spectral::make_chiral(3));
  const auto vac = spectral::fit_invariants(spectral::log_trace(d, 0), spectral::default_grid(),
                                        spectral::leading_gap(*d, 0));
  const auto sig = spectral::fit_invariants(spectral::log_trace(d, 1), spectral::default_grid(),
                                        spectral::leading_gap(*d, 1));
  const auto r = incremental_free_energy(d->md.dims[1], d->md.dims[0], Real(1), sig.a1, vac.a1);
  REQUIRE(r.dF_from_chi);
  CHECK(r.consistent);
  CHECK(r.warning.empty());
  CHECK(abs(*r.dF_from_chi - r.dF) <= Real("1e-3"));
  CHECK(close(*r.chi_rho, 12 * sig.a1, "1e-45"));

  const auto off = incremental_free_energy(d->md.dims[1], d->md.dims[0], Real(1), vac.a1, vac.a1);
  CHECK_FALSE(off.consistent);
  CHECK_FALSE(off.warning.empty());
}

TEST_CASE("mu free energy") {
  const Real mu(4), d = sqrt(Real(2));
  const auto f = mu_free_energy(mu, d, 3);
  CHECK(close(f.log_Z, log(Real(4)) + log(d), "1e-45"));
  CHECK(close(f.F_n, -2 / (4 * pi()) * log(Real(4)) - log(d) / (2 * pi()), "1e-45"));
  CHECK(close(f.F_mean, -log(Real(4)) / (4 * pi()), "1e-45"));
  CHECK(abs(f.F_mean + Real("0.1103")) < Real("1e-4"));
  CHECK(close(f.a0, log(Real(2)), "1e-45"));
  CHECK(close(f.a1_log_mu, log(Real(4)), "1e-45"));
  CHECK_FALSE(f.a1_formula.empty());

  const auto z = mu_free_energy(Real(1), Real(1), 5);
  CHECK(z.log_Z == 0);
  CHECK(z.F_n == 0);
  CHECK(z.F_mean == 0);
  CHECK(z.a0 == 0);

  for (long n : {1L, 2L, 10L, 100L, 1000L}) {
    const auto g = mu_free_energy(mu, d, n);
    CHECK(abs(g.F_n / n - g.F_mean) <= (log(mu) + 2 * log(d)) / (4 * pi() * n));
  }
  CHECK_THROWS_AS(mu_free_energy(Real("0.5"), Real(1), 1), Error);
  CHECK_THROWS_AS(mu_free_energy(Real(4), Real(1), 0), Error);
}

TEST_CASE("Cardy reference curve and summary") {
  CHECK(close(cardy_reference_log_density(Real(24), Real(1)), Real(0), "1e-45"));
  CHECK_THROWS_AS(cardy_reference_log_density(Real(24), Real("0.5")), Error);

  const auto j = summary(BlackHoleParams::schwarzschild(Real(1)), Real(4));
  for (const char* k : {"A", "beta", "S", "c", "F_mean", "F_mean_mu"}) CHECK(j.contains(k));
  CHECK(j["S"].get<std::string>().rfind("1.25663706143591729", 0) == 0);
  CHECK(j["S_equals_F_mean"] == true);
}

}  // TEST_SUITE
