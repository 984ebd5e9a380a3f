#include "cftspec/errors.hpp"
#include "cftspec/spectral_invariants.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace cftspec;
using namespace cftspec::spectral;

namespace {

std::shared_ptr<const ChiralData> chiral(int m, long cutoff = 400) {
  return std::make_shared<const ChiralData>(make_chiral(m, cutoff));
}

LogTraceFn synthetic(const Real& C, const Real& power) {
  return [C, power](const Real& t) { return Evaluation{C / pow(t, power), Real(0)}; };
}

}  // namespace

TEST_SUITE("spectral_invariants") {

TEST_CASE("Ising vacuum invariants on the fixed grid") {
  const auto d = chiral(3);
  const auto fit = fit_invariants(log_trace(d, 0), default_grid(), leading_gap(*d, 0));
  CHECK(abs(fit.a0 - pi() / 24) <= Real("1e-6"));
  CHECK(abs(fit.a1 + log(Real(2))) <= Real("1e-4"));
  CHECK(abs(fit.a2 + pi() / 24) <= Real("1e-2"));
  CHECK(fit.a0 > Real("0.13089969"));
  CHECK(fit.a0 < Real("0.13089970"));
}

TEST_CASE("Ising sigma sector a1") {
  const auto d = chiral(3);
  const auto fit = fit_invariants(log_trace(d, 1), default_grid(), leading_gap(*d, 1));
  CHECK(abs(fit.a1 + log(Real(2)) / 2) <= Real("1e-4"));
}

TEST_CASE("plain three-term fit on the fixed grid is limited by the sigma correction") {
  // sqrt(2) exp(-pi/(8t)) is 5e-4 at t = 0.05, so the uncorrected a0 is off
  // by about 1.5e-5 for the vacuum; the sigma sector (gap 1/2) is not.
  const auto d = chiral(3);
  const auto plain = fit_invariants(log_trace(d, 0), default_grid());
  CHECK(abs(plain.a0 - pi() / 24) > Real("1e-6"));
  CHECK(abs(plain.a0 - pi() / 24) < Real("1e-4"));
  const auto sigma = fit_invariants(log_trace(d, 1), default_grid());
  CHECK(abs(sigma.a1 + log(Real(2)) / 2) <= Real("1e-4"));
}

TEST_CASE("degenerate and out-of-regime inputs are rejected") {
  LogTraceFn zero = [](const Real&) { return Evaluation{Real(0), Real(0)}; };
  try {
    fit_invariants(zero, default_grid());
    FAIL("expected non-elliptic error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonElliptic);
  }
  const auto d = chiral(3);
  std::vector<Real> far{Real("0.5"), Real("1.5"), Real("2.5"), Real("3.5")};
  try {
    fit_invariants(log_trace(d, 0), far);
    FAIL("expected non-elliptic error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonElliptic);
  }
  CHECK_THROWS_AS(fit_invariants(log_trace(d, 0), {Real("0.01"), Real("0.02")}), Error);
}

TEST_CASE("every sector of m = 3..6 on the auto grid") {
  for (int m = 3; m <= 6; ++m) {
    const auto d = chiral(m);
    const auto grid = auto_grid(d->model);
    for (std::size_t rho = 0; rho < d->series.size(); ++rho) {
      CAPTURE(m);
      CAPTURE(rho);
      const auto fit = fit_invariants(log_trace(d, rho), grid);
      const auto tg = modular_targets(*d, rho);
      CHECK(abs(fit.a0 - tg.a0) <= Real("1e-6"));
      CHECK(abs(fit.a1 - tg.a1) <= Real("1e-4"));
      CHECK(abs(fit.a2 - tg.a2) <= Real("1e-2"));
      CHECK(abs(fit.a2 + fit.a0) <= Real("1e-2"));
      const auto vac = fit_invariants(log_trace(d, 0), grid);
      CHECK(abs((fit.a1 - vac.a1) - log(d->md.dims[rho])) <= Real("1e-3"));
    }
  }
}

TEST_CASE("dimension estimates") {
  const auto d = chiral(3);
  const auto est = dimension_estimate(log_trace(d, 0), Real("1e-3"));
  CHECK(abs(est.slope - 2) <= Real("0.1"));
  CHECK(est.literal < Real("1.9"));
  CHECK(abs(dimension_estimate(synthetic(Real(3), Real(2)), Real("0.01")).slope - 4) < Real("0.2"));
  CHECK(abs(dimension_estimate(synthetic(Real(3), Real("0.5")), Real("0.01")).slope - 1) <
        Real("0.05"));
  try {
    dimension_estimate(synthetic(Real("0.001"), Real("0.5")), Real("0.04"));
    FAIL("expected undefined dimension");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndefinedDimension);
  }
}

TEST_CASE("Kac-Wakimoto ratios") {
  for (int m : {3, 4}) {
    const auto d = chiral(m);
    for (std::size_t r = 0; r < d->series.size(); ++r)
      for (std::size_t s = 0; s < d->series.size(); ++s) {
        const Real ratio = kw_ratio(*d, r, s, Real("0.01"));
        CHECK(abs(ratio - d->md.dims[r] / d->md.dims[s]) <= Real("1e-6"));
      }
  }
  const auto d = chiral(3);
  CHECK(kw_ratio(*d, 1, 1, Real("0.01")) == 1);
  CHECK(abs(kw_ratio(*d, 1, 0, Real("0.01")) - sqrt(Real(2))) <= Real("1e-6"));
  CHECK(abs(kw_ratio(*d, 2, 0, Real("0.01")) - 1) <= Real("1e-6"));
}

TEST_CASE("normalized index from the spectral density") {
  const auto d = chiral(3);
  CHECK(abs(index_density_derivative(*d, 0, Real("0.02")) + log(Real(2))) <= Real("1e-3"));
  CHECK(abs(index_density_derivative(*d, 1, Real("0.02")) + log(Real(2)) / 2) <= Real("1e-3"));
  chars::CharacterSeries trivial{1, 1, Rational(0), Rational(0), {BigInt(1)}, true};
  auto f = [&](const Real& t) { return log(chars::evaluate(trivial, t / (2 * pi()), false).value); };
  CHECK(abs(index_density_derivative(f, Real("0.02"))) <= Real("1e-6"));
}

TEST_CASE("log-elliptic comparison") {
  const auto d = chiral(3);
  const auto vac = fit_invariants(log_trace(d, 0), default_grid(), leading_gap(*d, 0));
  const auto sig = fit_invariants(log_trace(d, 1), default_grid(), leading_gap(*d, 1));
  const auto cmp = compare_log_elliptic(sig, vac, sqrt(Real(2)));
  CHECK(cmp.same_dimension);
  CHECK(cmp.a1_dev <= Real("1e-3"));
  CHECK(cmp.pass);
  const auto same = compare_log_elliptic(vac, vac, Real(1));
  CHECK(same.a1_dev == 0);
  AsymptoticFit a = vac, b = vac;
  a.n_dim = Real(2);
  b.n_dim = Real(4);
  CHECK_THROWS_AS(compare_log_elliptic(a, b, Real(1)), Error);
  CHECK(compare_log_elliptic(a, b, Real(0)).pass);
}

TEST_CASE("Cardy slope from exact state counting") {
  const auto model = modular::build_minimal_model(3);
  const auto vac = chars::character_coeffs(model, model.sectors[0], 10000);
  const auto r = cardy_count_check(vac, 1000, 5000);
  CHECK(std::abs(r.target - 1.8137993642) < 1e-9);
  CHECK(r.rel_dev <= 0.05);
  CHECK(r.integrity);
  CHECK(r.pass);
  const auto r2 = cardy_count_check(vac, 2000, 10000);
  CHECK(std::abs(r2.slope - r.slope) / r.slope < 0.02);

  chars::CharacterSeries flat{1, 1, Rational(0), Rational(1, 2),
                              std::vector<BigInt>(5001, BigInt(1)), false};
  const auto bad = cardy_count_check(flat, 1000, 5000);
  CHECK_FALSE(bad.integrity);
  CHECK_FALSE(bad.pass);

  CHECK_THROWS_AS(cardy_count_check(vac, 1000, 3000), Error);
  CHECK_THROWS_AS(cardy_count_check(chars::character_coeffs(model, model.sectors[0], 100), 10, 200),
                  InsufficientCutoff);
}

TEST_CASE("flat Weyl demo") {
  const Real L = 2 * pi();
  CHECK(abs(flat_heat_trace(Manifold::Circle, L, Real("0.01")) - sqrt(pi() / Real("0.01"))) <
        Real("0.01"));
  const auto circle = weyl_heat_demo(Manifold::Circle, L, default_grid());
  CHECK(abs(circle.volume - L) <= Real("1e-3"));
  CHECK(circle.rel_dev <= Real("1e-3"));
  CHECK(abs(circle.a1) <= Real("1e-6"));
  const auto torus = weyl_heat_demo(Manifold::Torus, L, default_grid());
  CHECK(abs(torus.volume - L * L) <= Real("1e-2"));
  CHECK(torus.rel_dev <= Real("1e-3"));
}

TEST_CASE("two-dimensional combinations") {
  const auto d = chiral(3);
  std::vector<std::vector<long>> diag{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto spec = make_two_dim(diag, d, d);
  CHECK(abs(spec.mu2d - 1) < Real("1e-40"));
  CHECK(spec.c_avg == Rational(1, 2));
  const auto grid = auto_grid(d->model);
  const auto fit = combine_2d(spec, grid);
  CHECK(abs(fit.a0 - pi() / 12) <= Real("1e-6"));
  CHECK(abs(fit.a1) <= Real("1e-3"));
  CHECK(abs(fit.a2 + fit.a0) <= Real("1e-2"));
  const auto chiral_fit = fit_invariants(log_trace(d, 0), grid);
  CHECK(abs(fit.a0 - 2 * chiral_fit.a0) <= Real("1e-6"));

  std::vector<std::vector<long>> single{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  const auto spec1 = make_two_dim(single, d, d);
  CHECK(abs(spec1.mu2d - 16) < Real("1e-40"));
  const auto fit1 = combine_2d(spec1, grid);
  CHECK(abs(fit1.a1 + log(Real(16)) / 2) <= Real("1e-3"));
  CHECK(abs(fit1.a2 + fit1.a0) <= Real("1e-2"));

  CHECK_THROWS_AS(make_two_dim({{0, 0, 0}, {0, 1, 0}, {0, 0, 1}}, d, d), Error);
  CHECK_THROWS_AS(make_two_dim({{1, -1, 0}, {0, 1, 0}, {0, 0, 1}}, d, d), Error);
}

TEST_CASE("fit report and CSV") {
  const auto d = chiral(3);
  const auto fit = fit_invariants(log_trace(d, 0), default_grid(), leading_gap(*d, 0));
  const auto j = fit_report("vacuum", fit, modular_targets(*d, 0));
  CHECK(j["sector"] == "vacuum");
  CHECK(j.contains("abs_dev"));
  CHECK(j["targets"].contains("a1"));
  std::ostringstream os;
  write_fit_csv(os, log_trace(d, 0), default_grid());
  CHECK(os.str().rfind("t,t_log_tr\n", 0) == 0);
}

}
