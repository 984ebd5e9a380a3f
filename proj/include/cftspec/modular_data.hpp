#pragma once

// Virasoro minimal models M(m+1, m): Kac-table sectors, modular S and T
// matrices, quantum dimensions, Verlinde fusion and the mu-index.

#include "cftspec/numeric.hpp"

#include <json.hpp>

#include <cstddef>
#include <vector>

namespace cftspec::modular {

struct Sector {
  int r = 1;
  int s = 1;
  Rational h;  // conformal weight, exact
  Real d;      // quantum dimension S_{i0}/S_{00}
};

/// Minimal model with central charge c = 1 - 6/(m(m+1)). Sectors are the
/// Kac-table fundamental domain ordered lexicographically by (h, r, s), so
/// the vacuum is always sectors[0].
struct MinimalModel {
  int m = 3;
  Rational c;
  std::vector<Sector> sectors;

  std::size_t size() const { return sectors.size(); }
};

using RealMatrix = std::vector<std::vector<Real>>;

struct ModularData {
  RealMatrix S;
  std::vector<Rational> t_exponent;  // T_i = exp(2 pi i t_exponent[i])
  std::vector<Complex> T;
  Real mu;
  std::vector<Real> dims;

  std::size_t size() const { return dims.size(); }
};

/// Throws Error(InvalidModel) for m < 3.
MinimalModel build_minimal_model(int m);

ModularData modular_matrices(const MinimalModel& model);

/// N[i][j][k] = N_{ij}^k from the Verlinde formula. Throws
/// Error(FusionIntegrality) if any entry is farther than 1e-8 from a
/// nonnegative integer before rounding.
using FusionTensor = std::vector<std::vector<std::vector<long>>>;
FusionTensor verlinde_fusion(const ModularData& md);

struct MuIndex {
  Real index;  // d^2 mu^(n-1)
  Real root;   // index^(1/n), tends to mu as n grows
};

MuIndex mu_n_index(const Real& d, const Real& mu, int n);

/// Max-abs residuals of the SL(2,Z) relations for a computed ModularData.
struct RelationResiduals {
  Real symmetry;        // |S - S^T|
  Real orthogonality;   // |S S^T - 1|
  Real s_squared;       // distance of S^2 from the nearest permutation matrix
  Real st_cubed;        // |(ST)^3 - S^2|
  Real mu_consistency;  // |S00 - mu^(-1/2)|
};

RelationResiduals sl2z_residuals(const ModularData& md);

/// {"m","c","sectors":[{"r","s","h","d"}],"S","mu"} with decimal strings.
nlohmann::json to_json(const MinimalModel& model, const ModularData& md);

}  // namespace cftspec::modular
