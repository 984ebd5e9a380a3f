#include "cftspec/errors.hpp"
#include "cftspec/fock_traces.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace cftspec;
using namespace cftspec::fock;

namespace {

OneParticleOperator random_contraction(std::mt19937_64& rng, double lmax) {
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> lam(0.0, lmax);
  std::vector<Real> ev;
  const int d = dim(rng);
  for (int i = 0; i < d; ++i) ev.emplace_back(lam(rng));
  return OneParticleOperator::contraction(ev);
}

// Fermi oracle: all 2^d subsets, product over occupied modes.
Real subset_sum(const std::vector<Real>& ev) {
  Real s(0);
  const unsigned d = static_cast<unsigned>(ev.size());
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    Real p(1);
    for (unsigned i = 0; i < d; ++i)
      if (mask & (1u << i)) p *= ev[i];
    s += p;
  }
  return s;
}

}  // namespace

TEST_SUITE("fock_traces") {

TEST_CASE("closed forms on small spectra") {
  CHECK(abs(gamma_trace(OneParticleOperator::contraction({Real("0.5")}), Statistics::Bose) - 2) < Real("1e-45"));
  CHECK(abs(gamma_trace(OneParticleOperator::contraction({Real("0.5"), Real("0.25")}), Statistics::Bose) -
            Real(8) / 3) < Real("1e-45"));
  CHECK(abs(gamma_trace(OneParticleOperator::contraction({Real("0.5"), Real(1) / 3}), Statistics::Fermi) - 2) <
        Real("1e-45"));
  const auto empty = OneParticleOperator::contraction({});
  CHECK(gamma_trace(empty, Statistics::Bose) == 1);
  CHECK(gamma_trace(empty, Statistics::Fermi) == 1);
}

TEST_CASE("brute force examples") {
  const auto f = gamma_trace_bruteforce(OneParticleOperator::contraction({Real("0.5"), Real(1) / 3}),
                                        Statistics::Fermi, 60);
  CHECK(f.terms == 4);
  CHECK(abs(f.value - 2) < Real("1e-17"));
  const auto b = gamma_trace_bruteforce(OneParticleOperator::contraction({Real("0.5")}), Statistics::Bose, 60);
  CHECK(abs(b.value - 2) < Real("1e-17"));
  CHECK(abs(b.value - 2) <= b.tail_bound);
  for (auto st : {Statistics::Bose, Statistics::Fermi}) {
    const auto e = gamma_trace_bruteforce(OneParticleOperator::contraction({}), st, 10);
    CHECK(e.value == 1);
    CHECK(e.terms == 1);
  }
}

TEST_CASE("determinant formula against occupation sums on 100 random spectra") {
  std::mt19937_64 rng(42);
  int bose_ok = 0, fermi_ok = 0;
  for (int k = 0; k < 100; ++k) {
    const auto a = random_contraction(rng, 0.8);
    const long K = bruteforce_cutoff(a.eigenvalues.size());
    const auto bb = gamma_trace_bruteforce(a, Statistics::Bose, K);
    if (abs(gamma_trace(a, Statistics::Bose) - bb.value) <= bb.tail_bound) ++bose_ok;
    const auto fb = gamma_trace_bruteforce(a, Statistics::Fermi, K);
    if (abs(gamma_trace(a, Statistics::Fermi) - fb.value) <= fb.tail_bound) ++fermi_ok;
    CHECK(abs(gamma_trace(a, Statistics::Fermi) - subset_sum(a.eigenvalues)) < Real("1e-40"));
  }
  CHECK(bose_ok == 100);
  CHECK(fermi_ok == 100);
}

TEST_CASE("log form follows the determinant, the flipped sign does not") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_contraction(rng, 0.9);
    for (auto st : {Statistics::Bose, Statistics::Fermi}) {
      CHECK(abs(log_gamma_trace(a, st) - log(gamma_trace(a, st))) < Real("1e-40"));
    }
  }
  const auto a = OneParticleOperator::contraction({Real("0.5")});
  CHECK(abs(log_gamma_trace(a, Statistics::Bose, true) - log(gamma_trace(a, Statistics::Bose))) > Real("0.1"));
  CHECK(abs(log_gamma_trace(a, Statistics::Fermi, true) - log(gamma_trace(a, Statistics::Fermi))) > Real("0.1"));
}

TEST_CASE("monotone in each eigenvalue") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 30; ++k) {
    auto a = random_contraction(rng, 0.8);
    for (auto st : {Statistics::Bose, Statistics::Fermi}) {
      const Real before = gamma_trace(a, st);
      auto b = a;
      b.eigenvalues[0] += Real("0.1");
      CHECK(gamma_trace(b, st) > before);
    }
  }
}

TEST_CASE("kind checks") {
  const auto h = OneParticleOperator::positive({Real(1), Real(2)});
  CHECK_THROWS_AS(gamma_trace(h, Statistics::Bose), Error);
  CHECK_THROWS_AS(OneParticleOperator::contraction({Real(1)}), Error);
  CHECK_THROWS_AS(OneParticleOperator::positive({Real(0)}), Error);
  const auto a = OneParticleOperator::contraction({Real("0.5")});
  try {
    fermi_ratio_scan(a, {Real("0.5")});
    FAIL("expected kind mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::KindMismatch);
  }
  CHECK_THROWS_AS(fermi_ratio_scan(h, {Real("0.1"), Real("0.5")}), Error);
  CHECK_THROWS_AS(fermi_ratio_scan(h, {Real("1.5")}), Error);
}

TEST_CASE("Fermi ratio of the linear spectrum") {
  std::vector<Real> ev;
  for (int k = 1; k <= 5000; ++k) ev.emplace_back(k);
  const auto rows = fermi_ratio_scan(OneParticleOperator::positive(ev), {Real("0.01")});
  const Real target = pi() * pi() / 12;
  CHECK(abs(rows[0].ratio - target) < Real("0.01"));
  std::ostringstream os;
  write_ratio_csv(os, rows);
  CHECK(os.str().rfind("t,numerator,denominator,ratio\n", 0) == 0);
}

TEST_CASE("Fermi ratio bounds on random spectra") {
  std::mt19937_64 rng(3);
  std::vector<Real> grid;
  for (int k = 0; k <= 30; ++k) grid.push_back(pow(Real(10), Real(-k) / 10));
  std::uniform_real_distribution<double> lam(0.01, 50.0);
  for (int s = 0; s < 20; ++s) {
    std::vector<Real> ev;
    for (int i = 0; i < 40; ++i) ev.emplace_back(lam(rng));
    const auto rows = fermi_ratio_scan(OneParticleOperator::positive(ev), grid);
    for (const auto& r : rows) {
      CHECK(r.ratio >= log(Real(2)) - Real("1e-9"));
      CHECK(r.ratio <= 1 + Real("1e-9"));
    }
  }
  // single mode, large t: ratio tends to 1
  const auto one = fermi_ratio_scan(OneParticleOperator::positive({Real(30)}), {Real(1)});
  CHECK(abs(one[0].ratio - 1) < Real("1e-12"));
}

}
