#include "cftspec/errors.hpp"
#include "cftspec/modular_lab.hpp"

#include <doctest.h>

#include <cmath>

using namespace cftspec;
using namespace cftspec::lab;

namespace {

using Q = Quad;
using M = Mat<Q>;

Q qnorm(const M& x) { return x.norm(); }

M diag(std::initializer_list<double> v) {
  M m = M::Zero(static_cast<int>(v.size()), static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) m(i, i) = Q(x), ++i;
  return m;
}

M random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  M a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Cx<Q>(Q(g(rng)), Q(g(rng)));
  return (a + a.adjoint()) / Q(2);
}

// xi = sum_ab (rho^{1/2})_ab e_a (x) e_b: state rho on the left, rho^T on the right.
Vec<Q> purification(const M& rho) {
  const M root = matrix_power<Q>(rho, Q(1) / 2);
  const int d = static_cast<int>(rho.rows());
  Vec<Q> xi(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) xi(a * d + b) = root(a, b);
  return xi;
}

}  // namespace

TEST_SUITE("modular_theory_lab") {

TEST_CASE("spatial derivative of a product split") {
  auto rng = case_rng(1, 0);
  const Split split{2, 3, Side::Left};
  const M rho = random_density<Q>(2, rng);
  const M rhop = random_density<Q>(3, rng);
  const M D = spatial_derivative<Q>(rho, rhop, split);
  CHECK(qnorm(M(D - kron<Q>(rho, M(rhop.inverse())))) < Q("1e-28"));
  const auto c = check_spatial_derivative<Q>(D, rho, rhop, split, Q("0.83"));
  CHECK(c.modular_R <= Q("1e-20"));
  CHECK(c.modular_S <= Q("1e-20"));
  CHECK(c.inverse <= Q("1e-20"));

  const M tracial = spatial_derivative<Q>(maximally_mixed<Q>(3), maximally_mixed<Q>(3), Split{3, 3, Side::Left});
  CHECK(qnorm(M(tracial - M::Identity(9, 9))) < Q("1e-30"));

  CHECK_THROWS_AS(spatial_derivative<Q>(diag({1.0, 0.0}), rhop, split), Error);
  try {
    spatial_derivative<Q>(diag({1.0, 0.0}), rhop, split);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSeparating);
  }
}

TEST_CASE("spatial derivative implements both modular groups on 50 random states") {
  Q worst(0);
  for (int k = 0; k < 50; ++k) {
    auto rng = case_rng(5, k);
    std::uniform_int_distribution<int> leg(1, 4);
    const Split split{leg(rng), leg(rng), k % 2 ? Side::Right : Side::Left};
    const M phi = random_density<Q>(split.dim_R(), rng);
    const M psi = random_density<Q>(split.dim_S(), rng);
    const auto c = check_spatial_derivative<Q>(spatial_derivative<Q>(phi, psi, split), phi, psi, split,
                                               Q(k) / 10 - 2);
    worst = std::max({worst, c.modular_R, c.modular_S, c.inverse});
  }
  CHECK(worst <= Q("1e-18"));
}

TEST_CASE("Connes cocycle") {
  auto rng = case_rng(2, 0);
  const Split split{2, 3, Side::Left};
  const M phi = random_density<Q>(2, rng);
  const M psi = random_density<Q>(3, rng);
  const M psi0 = random_density<Q>(3, rng);
  const M psi1 = random_density<Q>(3, rng);

  const auto same = connes_cocycle<Q>(psi, psi, split, Q("0.7"), phi);
  CHECK(qnorm(M(same.u - M::Identity(3, 3))) < Q("1e-28"));

  const auto c = check_cocycle<Q>(psi, psi0, phi, split, Q("0.7"), Q("-0.4"));
  CHECK(c.reconstruction <= Q("1e-16"));
  CHECK(c.unitarity <= Q("1e-18"));
  CHECK(c.membership <= Q("1e-18"));
  CHECK(c.cocycle <= Q("1e-16"));

  const M a = connes_cocycle<Q>(psi, psi0, split, Q("0.7"), phi).u;
  const M b = connes_cocycle<Q>(psi0, psi1, split, Q("0.7"), phi).u;
  const M ab = connes_cocycle<Q>(psi, psi1, split, Q("0.7"), phi).u;
  CHECK(qnorm(M(a * b - ab)) <= Q("1e-16"));
  // independent of the reference state on R
  const M other = connes_cocycle<Q>(psi, psi0, split, Q("0.7")).u;
  CHECK(qnorm(M(other - a)) <= Q("1e-16"));
}

TEST_CASE("weight mass from a vector state") {
  auto rng = case_rng(3, 0);
  const M rho = random_density<Q>(3, rng);
  const Split split{3, 3, Side::Left};
  const auto phi = VectorState<Q>::make(purification(rho), split);
  CHECK(qnorm(M(phi.rho_R - rho)) < Q("1e-28"));

  // modular generator plus a constant: xi is an eigenvector with eigenvalue c
  const Q c("0.3");
  const M K = kron<Q>(matrix_log<Q>(rho), M::Identity(3, 3)) -
              kron<Q>(M::Identity(3, 3), matrix_log<Q>(M(rho.transpose()))) + c * M::Identity(9, 9);
  const auto flow = FlowGenerator<Q>::from(K);
  CHECK(abs(weight_total_mass<Q>(flow, phi) - exp(-c)) < Q("1e-28"));

  // K = 0 with a tracial state
  const auto tr = VectorState<Q>::make(purification(maximally_mixed<Q>(3)), split);
  CHECK(abs(weight_total_mass<Q>(FlowGenerator<Q>::from(M::Zero(9, 9)), tr) - 1) < Q("1e-30"));

  // any generator log rho (x) 1 + 1 (x) k: vector route equals the continued cocycle
  for (int k = 0; k < 5; ++k) {
    const M ks = random_hermitian(3, rng);
    const auto f = FlowGenerator<Q>::from(M(kron<Q>(matrix_log<Q>(rho), M::Identity(3, 3)) +
                                            kron<Q>(M::Identity(3, 3), ks)));
    const Q vec_mass = weight_total_mass<Q>(f, phi);
    const Q coc_mass = weight_total_mass<Q>(f, 1, phi.rho_R, phi.rho_S, split);
    CHECK(abs(vec_mass - coc_mass) <= Q("1e-24") * vec_mass);
  }

  // wrong flow
  const M other = random_density<Q>(3, rng);
  const auto bad = FlowGenerator<Q>::from(kron<Q>(matrix_log<Q>(other), M::Identity(3, 3)));
  try {
    weight_total_mass<Q>(bad, phi);
    FAIL("expected hypothesis violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolation);
  }
  CHECK_THROWS_AS(VectorState<Q>::make(Vec<Q>::Unit(9, 0), split), Error);
}

TEST_CASE("index product") {
  auto rng = case_rng(4, 0);
  const Triple tr{2, 3, 2};
  const M rho1 = random_density<Q>(2, rng);
  const M rho3 = random_density<Q>(2, rng);
  const auto flow = product_flow<Q>(tr, rho1, rho3, Q("0.4"));
  const auto r = index_product<Q>(tr, rho1, rho3, flow, random_density<Q>(6, rng), random_density<Q>(6, rng));
  CHECK(abs(r.product - 9) <= Q("1e-8"));
  CHECK(r.hypothesis <= Q("1e-20"));
  CHECK(abs(r.psi1 - 3 * exp(Q("0.4"))) <= Q("1e-20"));

  const Triple triv{3, 1, 2};
  const M a = random_density<Q>(3, rng);
  const M b = random_density<Q>(2, rng);
  CHECK(abs(index_product<Q>(triv, a, b, product_flow<Q>(triv, a, b)).product - 1) <= Q("1e-8"));

  // symmetric split: each factor is d2
  const auto sym = product_flow<Q>(tr, rho1, rho1);
  const M U = swap_outer<Q>(tr);
  CHECK(qnorm(M(U * sym.K * U.adjoint() + sym.K)) <= Q("1e-25"));
  const auto s = index_product<Q>(tr, rho1, rho1, sym, random_density<Q>(6, rng), random_density<Q>(6, rng));
  CHECK(abs(s.psi1 - 3) <= Q("1e-8"));
  CHECK(abs(s.psi2 - 3) <= Q("1e-8"));

  // the flow hypothesis is enforced
  CHECK_THROWS_AS(index_product<Q>(tr, rho3, rho1, flow), Error);
}

TEST_CASE("a middle-leg term in K raises the product above d2^2") {
  // N1' contains B(H2): the flow is not unique and only K without a middle
  // term gives the index of the trace-preserving expectation.
  auto rng = case_rng(9, 0);
  const Triple tr{2, 2, 2};
  const M rho1 = random_density<Q>(2, rng);
  const M rho3 = random_density<Q>(2, rng);
  const M k2 = diag({0.5, -0.2});
  const M mid = kron<Q>(kron<Q>(M(M::Identity(2, 2)), k2), M(M::Identity(2, 2)));
  const auto flow = FlowGenerator<Q>::from(M(product_flow<Q>(tr, rho1, rho3).K + mid));
  const auto r = index_product<Q>(tr, rho1, rho3, flow);
  const Q expected = (exp(Q(0.5)) + exp(Q(-0.2))) * (exp(Q(-0.5)) + exp(Q(0.2)));
  CHECK(abs(r.product - expected) <= Q("1e-20"));
  CHECK(r.product > 4);
}

TEST_CASE("Araki relative entropy") {
  const M r1 = diag({0.5, 0.5});
  const M r2 = diag({0.75, 0.25});
  CHECK(abs(araki_relative_entropy<Q>(r1, r1)) < Q("1e-30"));
  const Q oracle = (log(Q(2) / 3) + log(Q(2))) / 2;
  CHECK(abs(araki_relative_entropy<Q>(r1, r2) - oracle) <= Q("1e-12"));
  CHECK_THROWS_AS(araki_relative_entropy<Q>(r1, diag({1.0, 0.0})), Error);
  const auto b = entropy_battery(17, 100, 6);
  CHECK(b.pass);
  CHECK(b.report["max_abs_dev"].get<double>() <= 1e-12);
  CHECK(b.report["min_value"].get<double>() >= 0);
}

TEST_CASE("Pimsner-Popa entropy") {
  CHECK(std::fabs(pimsner_popa_entropy(Triple{2, 3, 2}) - std::log(9.0)) < 1e-15);
  CHECK(pimsner_popa_entropy(Triple{4, 1, 2}) == 0);
  auto rng = case_rng(6, 0);
  const Triple tr{1, 3, 2};
  const M a = random_density<Q>(1, rng);
  const M b = random_density<Q>(2, rng);
  const auto r = index_product<Q>(tr, a, b, product_flow<Q>(tr, a, b, Q("-0.2")));
  CHECK(std::fabs(pimsner_popa_entropy(tr) - 2 * std::log(std::sqrt(to_double(r.product)))) < 1e-8);
}

TEST_CASE("derivative identity of t log Z") {
  auto rng = case_rng(8, 0);
  const Triple tr{2, 3, 2};
  const M rho = random_density<Q>(2, rng);
  const M omega2 = random_density<Q>(3, rng);
  const auto r = entropy_derivative_identity<Q>(tr, rho, kron<Q>(omega2, rho));
  CHECK(abs(r.z_at_1 - 3) <= Q("1e-20"));
  CHECK(r.deviation <= Q("1e-6"));
  CHECK(r.s_rel > Q("0.01"));
  CHECK(r.printed_deviation > Q("0.01"));  // the -S form fails off the tracial point
  CHECK(r.generator_residual <= Q("1e-16"));
  CHECK(r.generator_restriction <= Q("1e-16"));
  CHECK(r.flipped_restriction > Q("1e-6"));

  const auto t = entropy_derivative_identity<Q>(tr, maximally_mixed<Q>(2), maximally_mixed<Q>(6));
  CHECK(abs(t.s_rel) < Q("1e-30"));
  CHECK(abs(t.derivative - log(Q(9))) < Q("1e-12"));

  const Triple one{2, 1, 2};
  const auto u = entropy_derivative_identity<Q>(one, rho, rho);
  CHECK(abs(u.z_at_1 - 1) < Q("1e-28"));
  CHECK(abs(u.derivative) < Q("1e-12"));
  CHECK(abs(u.s_rel) < Q("1e-28"));

  CHECK_THROWS_AS(entropy_derivative_identity<Q>(Triple{2, 3, 1}, rho, omega2), Error);
}

TEST_CASE("batteries are deterministic and pass") {
  const auto a = index_battery(7, 3, 3);
  CHECK(a.pass);
  CHECK(a.report.dump() == index_battery(7, 3, 3).report.dump());
  const auto c = cocycle_battery(7, 10, 3);
  CHECK(c.pass);
  const auto d = derivative_battery(7);
  CHECK(d.pass);
  const auto s = symmetric_battery(7, 2, 2);
  CHECK(s.pass);
}

}
