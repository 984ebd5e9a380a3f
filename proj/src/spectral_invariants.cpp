#include "cftspec/spectral_invariants.hpp"

#include "cftspec/errors.hpp"

#include <gmp.h>

#include <cmath>
#include <ostream>

namespace cftspec::spectral {

namespace {

struct LinearFit {
  std::vector<Real> coeffs;
  Real residual;
};

// Ordinary least squares through the normal equations; at 50 digits the
// conditioning of a 5-point grid is harmless. rows[i] holds the basis
// functions evaluated at the i-th grid point.
LinearFit least_squares(const std::vector<std::vector<Real>>& rows, const std::vector<Real>& y) {
  const std::size_t n = rows.front().size();
  std::vector<std::vector<Real>> A(n, std::vector<Real>(n + 1, Real(0)));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) A[r][c] += rows[i][r] * rows[i][c];
      A[r][n] += rows[i][r] * y[i];
    }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(A[r][col]) > abs(A[piv][col])) piv = r;
    std::swap(A[piv], A[col]);
    if (A[col][col] == 0) throw Error(ErrorKind::NonElliptic, "singular least-squares system");
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Real f = A[r][col] / A[col][col];
      for (std::size_t c = col; c <= n; ++c) A[r][c] -= f * A[col][c];
    }
  }
  LinearFit out;
  for (std::size_t r = 0; r < n; ++r) out.coeffs.push_back(A[r][n] / A[r][r]);
  out.residual = Real(0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Real fit(0);
    for (std::size_t k = 0; k < n; ++k) fit += out.coeffs[k] * rows[i][k];
    out.residual = std::max(out.residual, Real(abs(fit - y[i])));
  }
  return out;
}

LinearFit polyfit(const std::vector<Real>& x, const std::vector<Real>& y, int degree) {
  std::vector<std::vector<Real>> rows;
  for (const auto& t : x) {
    std::vector<Real> row{Real(1)};
    for (int k = 1; k <= degree; ++k) row.push_back(row.back() * t);
    rows.push_back(std::move(row));
  }
  return least_squares(rows, y);
}

double log_bigint(const BigInt& z) {
  long e = 0;
  const double d = mpz_get_d_2exp(&e, z.backend().data());
  return std::log(d) + static_cast<double>(e) * std::log(2.0);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
                std::size_t hi) {
  const double n = static_cast<double>(hi - lo);
  double sx = 0, sy = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

ChiralData make_chiral(int m, long cutoff) {
  ChiralData d;
  d.model = modular::build_minimal_model(m);
  d.md = modular::modular_matrices(d.model);
  d.series = chars::all_characters(d.model, cutoff);
  return d;
}

LogTraceFn log_trace(std::shared_ptr<const ChiralData> data, std::size_t rho) {
  if (rho >= data->series.size()) throw Error(ErrorKind::InvalidArgument, "sector index out of range");
  return [data = std::move(data), rho](const Real& t) {
    const Evaluation e = chars::evaluate_small_t(data->md, data->series, rho, t, false);
    return Evaluation{log(e.value), e.error / e.value};
  };
}

std::vector<Real> default_grid() {
  std::vector<Real> g;
  for (int i = 1; i <= 5; ++i) g.push_back(Real(i) / 100);
  return g;
}

std::vector<Real> auto_grid(const modular::MinimalModel& model) {
  Rational hmin(0);
  for (const auto& sec : model.sectors)
    if (sec.h > 0 && (hmin == 0 || sec.h < hmin)) hmin = sec.h;
  const Real tmax = 2 * pi() * to_real(hmin) / log(Real("1e10"));
  std::vector<Real> g;
  for (int i = 1; i <= 5; ++i) g.push_back(tmax * i / 5);
  return g;
}

Real fit_residual_floor() { return Real("1e-5"); }

AsymptoticFit fit_invariants(const LogTraceFn& trace_fn, const std::vector<Real>& grid,
                             const std::vector<Real>& correction_gaps) {
  if (grid.size() < 4) throw Error(ErrorKind::InvalidArgument, "fit needs at least 4 grid points");
  for (const auto& t : grid) {
    if (!(t > 0)) throw Error(ErrorKind::InvalidArgument, "grid points must be > 0");
    if (t > Real("0.1"))
      throw Error(ErrorKind::NonElliptic,
                  "grid point t = " + to_decimal(t, 6) + " lies outside the asymptotic regime t <= 0.1");
  }
  std::vector<Real> y;
  Real eval_err(0);
  for (const auto& t : grid) {
    const Evaluation e = trace_fn(t);
    y.push_back(t * e.value);
    eval_err = std::max(eval_err, Real(t * e.error));
  }
  if (grid.size() < 4 + correction_gaps.size())
    throw Error(ErrorKind::InvalidArgument, "too few grid points for the requested correction terms");
  std::vector<std::vector<Real>> rows;
  for (const auto& t : grid) {
    std::vector<Real> row{Real(1), t, t * t};
    for (const auto& g : correction_gaps) row.push_back(t * exp(-2 * pi() * g / t));
    rows.push_back(std::move(row));
  }
  const LinearFit pf = least_squares(rows, y);

  AsymptoticFit fit;
  fit.a0 = pf.coeffs[0];
  fit.a1 = pf.coeffs[1];
  fit.a2 = pf.coeffs[2];
  fit.residual = pf.residual;
  fit.threshold = std::max(Real(10 * eval_err), fit_residual_floor());
  fit.grid = grid;
  fit.correction_gaps = correction_gaps;
  for (std::size_t k = 3; k < pf.coeffs.size(); ++k) fit.correction_coeffs.push_back(pf.coeffs[k]);
  if (fit.residual > fit.threshold)
    throw Error(ErrorKind::NonElliptic, "fit residual " + to_decimal(fit.residual, 6) +
                                            " exceeds " + to_decimal(fit.threshold, 6));
  if (abs(fit.a0) <= fit.threshold)
    throw Error(ErrorKind::NonElliptic, "leading coefficient a0 vanishes; data is not log-elliptic");

  Real tmin = grid.front();
  for (const auto& t : grid) tmin = std::min(tmin, t);
  try {
    fit.n_dim = dimension_estimate(trace_fn, tmin).slope;
  } catch (const Error&) {
    fit.n_dim = Real(0);
  }
  return fit;
}

std::vector<Real> leading_gap(const ChiralData& data, std::size_t rho) {
  const Real tiny("1e-30");
  Rational best(0);
  for (std::size_t nu = 1; nu < data.md.size(); ++nu) {
    if (abs(data.md.S.at(rho)[nu]) < tiny) continue;
    const Rational h = data.model.sectors[nu].h;
    if (best == 0 || h < best) best = h;
  }
  if (best == 0) return {};
  return {to_real(best)};
}

Targets modular_targets(const ChiralData& data, std::size_t rho) {
  const Real c = to_real(data.model.c);
  Targets t;
  t.a0 = pi() * c / 12;
  t.a1 = log(data.md.dims.at(rho)) - log(data.md.mu) / 2;
  t.a2 = -t.a0;
  return t;
}

DimensionEstimate dimension_estimate(const LogTraceFn& trace_fn, const Real& t) {
  if (!(t > 0)) throw Error(ErrorKind::InvalidArgument, "t must be > 0");
  const Real L = trace_fn(t).value;
  if (L <= 1)
    throw Error(ErrorKind::UndefinedDimension,
                "log Tr = " + to_decimal(L, 8) + " <= 1 at t = " + to_decimal(t, 6));
  const Real h("0.01");
  const Real Lp = trace_fn(t * exp(h)).value;
  const Real Lm = trace_fn(t * exp(-h)).value;
  if (Lp <= 0 || Lm <= 0)
    throw Error(ErrorKind::UndefinedDimension, "log Tr not positive near t = " + to_decimal(t, 6));
  DimensionEstimate d;
  d.slope = -2 * (log(Lp) - log(Lm)) / (2 * h);
  d.literal = -2 * log(L) / log(t);
  return d;
}

Real kw_ratio(const ChiralData& data, std::size_t rho, std::size_t sigma, const Real& t) {
  if (rho >= data.series.size() || sigma >= data.series.size())
    throw Error(ErrorKind::InvalidArgument, "sector index out of range");
  if (rho == sigma) return Real(1);
  const Real u = t / (2 * pi());
  const Real a = chars::evaluate_small_t(data.md, data.series, rho, u, false).value;
  const Real b = chars::evaluate_small_t(data.md, data.series, sigma, u, false).value;
  return a / b;
}

Real index_density_derivative(const std::function<Real(const Real&)>& log_tr, const Real& t,
                              const Real& step) {
  const Real h = step > 0 ? step : t / 10;
  auto g = [&](const Real& s) { return s * log_tr(s); };
  auto D = [&](const Real& hh) { return (g(t + hh) - g(t - hh)) / (2 * hh); };
  const Real coarse = D(h);
  const Real fine = D(h / 2);
  return (4 * fine - coarse) / 3;
}

Real index_density_derivative(const ChiralData& data, std::size_t rho, const Real& t,
                              const Real& step) {
  auto f = [&](const Real& s) {
    return log(chars::evaluate_small_t(data.md, data.series, rho, s / (2 * pi()), false).value);
  };
  return index_density_derivative(f, t, step);
}

Comparison compare_log_elliptic(const AsymptoticFit& a, const AsymptoticFit& b,
                                const Real& ratio_limit) {
  Comparison c;
  const Real scale = std::max(abs(a.n_dim), abs(b.n_dim));
  c.same_dimension = abs(a.n_dim - b.n_dim) <= Real("0.05") * scale;
  if (!c.same_dimension) {
    if (ratio_limit != 0)
      throw Error(ErrorKind::Inconsistency,
                  "dimensions " + to_decimal(a.n_dim, 6) + " and " + to_decimal(b.n_dim, 6) +
                      " differ but the trace ratio has a finite nonzero limit");
    c.a0_dev = Real(0);
    c.log_ratio = Real(0);
    c.a1_diff = Real(0);
    c.a1_dev = Real(0);
    c.pass = true;
    return c;
  }
  if (!(ratio_limit > 0))
    throw Error(ErrorKind::Inconsistency, "equal dimensions require a positive ratio limit");
  c.a0_dev = abs(a.a0 - b.a0);
  c.log_ratio = log(ratio_limit);
  c.a1_diff = a.a1 - b.a1;
  c.a1_dev = abs(c.log_ratio - c.a1_diff);
  c.pass = c.a0_dev <= Real("1e-6") && c.a1_dev <= Real("1e-3");
  return c;
}

CardyReport cardy_count_check(const CharacterSeries& series, long lo, long hi) {
  if (lo < 1 || hi < 4 * lo)
    throw Error(ErrorKind::WindowTooSmall, "window needs 1 <= lo and hi >= 4 lo");
  const Real h = to_real(series.h);
  if (Real(hi) - h > series.cutoff()) {
    const long need = (Real(hi) - h).convert_to<long>() + 1;
    throw InsufficientCutoff("series cutoff below the window end; need " + std::to_string(need),
                             need);
  }
  // Running count over the integer points of the window.
  std::vector<double> x, y;
  BigInt running = 0;
  long level = 0;
  for (long lam = lo; lam <= hi; ++lam) {
    while (level <= series.cutoff() && h + level <= lam) running += series.coeffs[level++];
    if (running == 0) continue;
    x.push_back(std::sqrt(static_cast<double>(lam)));
    y.push_back(log_bigint(running));
  }
  CardyReport r;
  r.points = static_cast<long>(x.size());
  const double c = to_real(series.c).convert_to<double>();
  r.target = 2 * M_PI * std::sqrt(c / 6);
  r.slope = ls_slope(x, y, 0, x.size());
  r.lower_slope = ls_slope(x, y, 0, x.size() / 2);
  r.upper_slope = ls_slope(x, y, x.size() / 2, x.size());
  r.rel_dev = std::abs(r.slope - r.target) / r.target;
  r.integrity = std::abs(r.lower_slope - r.upper_slope) <= 0.1 * std::abs(r.slope);
  r.pass = r.integrity && r.rel_dev <= 0.05;
  return r;
}

Real flat_heat_trace(Manifold manifold, const Real& L, const Real& t) {
  const Real w = 2 * pi() / L;
  const Real eps = pow(Real(10), -static_cast<long>(working_digits()));
  Real sum(1);
  for (long k = 1;; ++k) {
    const Real term = 2 * exp(-t * w * w * k * k);
    sum += term;
    if (term < eps * sum) break;
  }
  return manifold == Manifold::Circle ? sum : sum * sum;
}

WeylReport weyl_heat_demo(Manifold manifold, const Real& L, const std::vector<Real>& grid) {
  if (grid.size() < 2) throw Error(ErrorKind::InvalidArgument, "Weyl demo needs at least 2 points");
  WeylReport r;
  r.n = manifold == Manifold::Circle ? 1 : 2;
  r.grid = grid;
  std::vector<Real> y;
  for (const auto& t : grid) {
    const Real tr = flat_heat_trace(manifold, L, t);
    r.traces.push_back(tr);
    y.push_back(pow(4 * pi() * t, Real(r.n) / 2) * tr);
  }
  const LinearFit pf = polyfit(grid, y, 1);
  r.volume = pf.coeffs[0];
  r.a1 = pf.coeffs[1];
  r.analytic_volume = manifold == Manifold::Circle ? L : L * L;
  r.rel_dev = abs(r.volume - r.analytic_volume) / r.analytic_volume;
  return r;
}

TwoDimSpec make_two_dim(std::vector<std::vector<long>> Z, std::shared_ptr<const ChiralData> left,
                        std::shared_ptr<const ChiralData> right) {
  if (!left || !right) throw Error(ErrorKind::InvalidArgument, "both chiral halves are required");
  const std::size_t nl = left->md.size(), nr = right->md.size();
  if (Z.size() != nl) throw Error(ErrorKind::InvalidArgument, "Z row count must match left sectors");
  for (const auto& row : Z) {
    if (row.size() != nr) throw Error(ErrorKind::InvalidArgument, "Z column count must match right sectors");
    for (long z : row)
      if (z < 0) throw Error(ErrorKind::InvalidArgument, "Z entries must be nonnegative");
  }
  if (Z[0][0] != 1) throw Error(ErrorKind::InvalidArgument, "Z_00 must be 1");
  TwoDimSpec spec;
  spec.inclusion_index = Real(0);
  for (std::size_t i = 0; i < nl; ++i)
    for (std::size_t j = 0; j < nr; ++j)
      if (Z[i][j] != 0) spec.inclusion_index += Z[i][j] * left->md.dims[i] * right->md.dims[j];
  spec.mu2d = left->md.mu * right->md.mu / (spec.inclusion_index * spec.inclusion_index);
  spec.c_avg = (left->model.c + right->model.c) / 2;
  spec.Z = std::move(Z);
  spec.left = std::move(left);
  spec.right = std::move(right);
  return spec;
}

LogTraceFn log_trace_2d(const TwoDimSpec& spec) {
  return [spec](const Real& t) {
    const auto& L = *spec.left;
    const auto& R = *spec.right;
    std::vector<Evaluation> lt, rt;
    for (std::size_t i = 0; i < L.series.size(); ++i)
      lt.push_back(chars::evaluate_small_t(L.md, L.series, i, t, false));
    for (std::size_t j = 0; j < R.series.size(); ++j)
      rt.push_back(chars::evaluate_small_t(R.md, R.series, j, t, false));
    // Fixed (i, j) order keeps the sum reproducible.
    Real tr(0), err(0);
    for (std::size_t i = 0; i < lt.size(); ++i)
      for (std::size_t j = 0; j < rt.size(); ++j) {
        const long z = spec.Z[i][j];
        if (z == 0) continue;
        tr += z * lt[i].value * rt[j].value;
        err += z * (lt[i].error * rt[j].value + lt[i].value * rt[j].error + lt[i].error * rt[j].error);
      }
    return Evaluation{log(tr), err / tr};
  };
}

AsymptoticFit combine_2d(const TwoDimSpec& spec, const std::vector<Real>& grid,
                         const std::vector<Real>& correction_gaps) {
  return fit_invariants(log_trace_2d(spec), grid, correction_gaps);
}

Targets two_dim_targets(const TwoDimSpec& spec) {
  Targets t;
  t.a0 = 2 * pi() * to_real(spec.c_avg) / 12;
  t.a1 = -log(spec.mu2d) / 2;
  t.a2 = -t.a0;
  return t;
}

nlohmann::json fit_report(const std::string& sector, const AsymptoticFit& fit,
                          const Targets& targets) {
  nlohmann::json j;
  j["sector"] = sector;
  j["a0"] = to_decimal(fit.a0);
  j["a1"] = to_decimal(fit.a1);
  j["a2"] = to_decimal(fit.a2);
  j["n_dim"] = to_decimal(fit.n_dim, 12);
  j["targets"] = {{"a0", to_decimal(targets.a0)},
                  {"a1", to_decimal(targets.a1)},
                  {"a2", to_decimal(targets.a2)}};
  j["abs_dev"] = {{"a0", to_decimal(abs(fit.a0 - targets.a0), 6)},
                  {"a1", to_decimal(abs(fit.a1 - targets.a1), 6)},
                  {"a2", to_decimal(abs(fit.a2 - targets.a2), 6)}};
  j["residual"] = to_decimal(fit.residual, 6);
  j["threshold"] = to_decimal(fit.threshold, 6);
  nlohmann::json g = nlohmann::json::array();
  for (const auto& t : fit.grid) g.push_back(to_decimal(t, 12));
  j["grid"] = g;
  return j;
}

void write_fit_csv(std::ostream& os, const LogTraceFn& trace_fn, const std::vector<Real>& grid) {
  os << "t,t_log_tr\n";
  for (const auto& t : grid) os << to_decimal(t) << ',' << to_decimal(t * trace_fn(t).value) << '\n';
}

}  // namespace cftspec::spectral
