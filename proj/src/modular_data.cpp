#include "cftspec/modular_data.hpp"

#include "cftspec/errors.hpp"

#include <algorithm>
#include <tuple>

namespace cftspec::modular {

namespace {

// Kac weight with r paired to p = m+1 and s paired to p' = m.
Rational kac_weight(int m, int r, int s) {
  const long x = static_cast<long>(r) * (m + 1) - static_cast<long>(s) * m;
  return Rational(x * x - 1, 4L * m * (m + 1));
}

// Standard minimal-model S-matrix entry before the overall sign fix.
Real s_entry(int m, const Sector& a, const Sector& b) {
  const Real p(m + 1);
  const Real pp(m);
  const Real pref = 2 * sqrt(Real(2) / (p * pp));
  const int parity = 1 + a.s * b.r + a.r * b.s;
  const Real sign = (parity % 2 == 0) ? Real(1) : Real(-1);
  return pref * sign * sin(pi() * p / pp * a.r * b.r) * sin(pi() * pp / p * a.s * b.s);
}

Real max_abs(const RealMatrix& a) {
  Real out(0);
  for (const auto& row : a)
    for (const auto& x : row) out = std::max(out, Real(abs(x)));
  return out;
}

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
  const std::size_t n = a.size();
  RealMatrix c(n, std::vector<Real>(n, Real(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

using ComplexMatrix = std::vector<std::vector<Complex>>;

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.size();
  ComplexMatrix c(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

}  // namespace

MinimalModel build_minimal_model(int m) {
  if (m < 3) throw Error(ErrorKind::InvalidModel, "m must be >= 3");

  MinimalModel model;
  model.m = m;
  model.c = Rational(1) - Rational(6, static_cast<long>(m) * (m + 1));

  for (int r = 1; r <= m - 1; ++r)
    for (int s = 1; s <= m; ++s) {
      // (r,s) ~ (m-r, m+1-s); keep the representative with r(m+1) - s m > 0.
      if (static_cast<long>(r) * (m + 1) - static_cast<long>(s) * m <= 0) continue;
      model.sectors.push_back(Sector{r, s, kac_weight(m, r, s), Real(0)});
    }

  std::sort(model.sectors.begin(), model.sectors.end(), [](const Sector& a, const Sector& b) {
    return std::tie(a.h, a.r, a.s) < std::tie(b.h, b.r, b.s);
  });

  const Sector& vac = model.sectors.front();
  const Real s00 = s_entry(m, vac, vac);
  for (auto& sec : model.sectors) sec.d = s_entry(m, sec, vac) / s00;
  return model;
}

ModularData modular_matrices(const MinimalModel& model) {
  const std::size_t n = model.size();
  ModularData md;
  md.S.assign(n, std::vector<Real>(n, Real(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      md.S[i][j] = s_entry(model.m, model.sectors[i], model.sectors[j]);
      md.S[j][i] = md.S[i][j];
    }
  // Characters are positive on the imaginary axis, so S_00 > 0 fixes the sign.
  if (md.S[0][0] < 0)
    for (auto& row : md.S)
      for (auto& x : row) x = -x;

  const Rational c24 = model.c / 24;
  for (const auto& sec : model.sectors) {
    Rational e = sec.h - c24;
    md.t_exponent.push_back(e);
    md.T.push_back(Complex::polar(Real(1), 2 * pi() * to_real(e)));
  }

  md.mu = Real(0);
  for (std::size_t i = 0; i < n; ++i) {
    md.dims.push_back(md.S[i][0] / md.S[0][0]);
    md.mu += md.dims.back() * md.dims.back();
  }
  md.dims[0] = Real(1);
  return md;
}

FusionTensor verlinde_fusion(const ModularData& md) {
  const std::size_t n = md.size();
  FusionTensor N(n, std::vector<std::vector<long>>(n, std::vector<long>(n, 0)));
  const Real tol("1e-8");
  RealMatrix B(n, std::vector<Real>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) B[k][l] = md.S[k][l] / md.S[0][l];
  std::vector<Real> w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) w[l] = md.S[i][l] * md.S[j][l];
      for (std::size_t k = 0; k < n; ++k) {
        Real sum(0);
        for (std::size_t l = 0; l < n; ++l) sum += w[l] * B[k][l];
        const Real nearest = round(sum);
        if (abs(sum - nearest) > tol || nearest < 0)
          throw Error(ErrorKind::FusionIntegrality,
                      "Verlinde coefficient N_{" + std::to_string(i) + "," + std::to_string(j) +
                          "}^" + std::to_string(k) + " = " + to_decimal(sum, 20) +
                          " is not a nonnegative integer");
        N[i][j][k] = N[j][i][k] = nearest.convert_to<long>();
      }
    }
  return N;
}

MuIndex mu_n_index(const Real& d, const Real& mu, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (d < 1 || mu < 1) throw Error(ErrorKind::InvalidArgument, "d and mu must be >= 1");
  MuIndex out;
  out.index = d * d * boost::multiprecision::pow(mu, n - 1);
  out.root = boost::multiprecision::pow(out.index, Real(1) / n);
  return out;
}

RelationResiduals sl2z_residuals(const ModularData& md) {
  const std::size_t n = md.size();
  RelationResiduals res;

  RealMatrix st(n, std::vector<Real>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) st[i][j] = md.S[j][i];

  RealMatrix diff(n, std::vector<Real>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) diff[i][j] = md.S[i][j] - st[i][j];
  res.symmetry = max_abs(diff);

  RealMatrix sst = multiply(md.S, st);
  for (std::size_t i = 0; i < n; ++i) sst[i][i] -= 1;
  res.orthogonality = max_abs(sst);

  const RealMatrix s2 = multiply(md.S, md.S);
  res.s_squared = Real(0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
      if (abs(s2[i][j]) > abs(s2[i][best])) best = j;
    for (std::size_t j = 0; j < n; ++j) {
      const Real target = (j == best) ? Real(1) : Real(0);
      res.s_squared = std::max(res.s_squared, Real(abs(s2[i][j] - target)));
    }
  }

  ComplexMatrix m(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = Complex(md.S[i][j]) * md.T[j];
  const ComplexMatrix m3 = multiply(multiply(m, m), m);
  res.st_cubed = Real(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      res.st_cubed = std::max(res.st_cubed, abs(m3[i][j] - Complex(s2[i][j])));

  res.mu_consistency = abs(md.S[0][0] - 1 / sqrt(md.mu));
  return res;
}

nlohmann::json to_json(const MinimalModel& model, const ModularData& md) {
  nlohmann::json j;
  j["m"] = model.m;
  j["c"] = to_string(model.c);
  j["sectors"] = nlohmann::json::array();
  for (const auto& sec : model.sectors)
    j["sectors"].push_back(
        {{"r", sec.r}, {"s", sec.s}, {"h", to_string(sec.h)}, {"d", to_decimal(sec.d)}});
  j["S"] = nlohmann::json::array();
  for (const auto& row : md.S) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : row) r.push_back(to_decimal(x));
    j["S"].push_back(r);
  }
  j["mu"] = to_decimal(md.mu);
  return j;
}

}  // namespace cftspec::modular
