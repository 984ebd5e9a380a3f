#include "cftspec/virasoro.hpp"

#include "cftspec/errors.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

namespace cftspec::vir {

namespace {

void add_term(std::map<long, Rational>& terms, long k, const Rational& q) {
  if (q == 0) return;
  auto it = terms.find(k);
  if (it == terms.end()) {
    terms.emplace(k, q);
    return;
  }
  it->second += q;
  if (it->second == 0) terms.erase(it);
}

Rational anomaly(long n) { return Rational(n * n - 1, 24 * n); }

}  // namespace

VirElement VirElement::L(long k, const Rational& q) {
  VirElement x;
  add_term(x.terms, k, q);
  return x;
}

VirElement VirElement::C(const Rational& q) {
  VirElement x;
  x.central = q;
  return x;
}

VirElement& VirElement::operator+=(const VirElement& o) {
  for (const auto& [k, q] : o.terms) add_term(terms, k, q);
  central += o.central;
  return *this;
}

VirElement& VirElement::operator-=(const VirElement& o) {
  for (const auto& [k, q] : o.terms) add_term(terms, k, -q);
  central -= o.central;
  return *this;
}

VirElement& VirElement::operator*=(const Rational& q) {
  if (q == 0) {
    terms.clear();
    central = 0;
    return *this;
  }
  for (auto& [k, v] : terms) v *= q;
  central *= q;
  return *this;
}

VirElement operator+(VirElement a, const VirElement& b) { return a += b; }
VirElement operator-(VirElement a, const VirElement& b) { return a -= b; }
VirElement operator*(const Rational& q, VirElement a) { return a *= q; }

bool operator==(const VirElement& a, const VirElement& b) {
  return a.terms == b.terms && a.central == b.central;
}

VirElement bracket(const VirElement& x, const VirElement& y) {
  VirElement out;
  for (const auto& [m, p] : x.terms)
    for (const auto& [n, q] : y.terms) {
      const Rational pq = p * q;
      add_term(out.terms, m + n, pq * (m - n));
      if (m == -n) out.central += pq * Rational(m * m * m - m, 12);
    }
  return out;
}

VirElement rescale_embed(const VirElement& x, long n, bool drop_anomaly) {
  if (n <= 0) throw Error(ErrorKind::InvalidCover, "cover degree n must be >= 1");
  VirElement out;
  for (const auto& [k, q] : x.terms) {
    add_term(out.terms, n * k, q / n);
    if (k == 0 && !drop_anomaly) out.central += q * anomaly(n);
  }
  out.central += x.central * n;
  return out;
}

EmbeddingReport verify_embedding(long n, long range, bool drop_anomaly) {
  if (n <= 0) throw Error(ErrorKind::InvalidCover, "cover degree n must be >= 1");
  if (range < 1) throw Error(ErrorKind::InvalidArgument, "index range must be >= 1");
  EmbeddingReport r;
  r.n = n;
  r.range = range;
  auto E = [&](long k) { return rescale_embed(VirElement::L(k), n, drop_anomaly); };
  for (long s = 0; s <= 2 * range; ++s)
    for (long i = range; i >= -range; --i) {
      const long rest = s - std::labs(i);
      if (rest < 0 || rest > range) continue;
      for (long j : {rest, -rest}) {
        const VirElement lhs = bracket(E(i), E(j));
        const VirElement rhs = rescale_embed(bracket(VirElement::L(i), VirElement::L(j)), n,
                                             drop_anomaly);
        ++r.pairs_checked;
        if (!(lhs == rhs))
          throw EmbeddingViolation("embedding fails at (" + std::to_string(i) + ", " +
                                       std::to_string(j) + "): " + to_string(lhs) +
                                       " != " + to_string(rhs),
                                   static_cast<int>(i), static_cast<int>(j));
        if (rest == 0) break;
      }
    }
  // sl(2): [L1, L-1] = 2 L0, [L1, L0] = L1, [L-1, L0] = -L-1 for the images.
  const bool a = bracket(E(1), E(-1)) == Rational(2) * E(0);
  const bool b = bracket(E(1), E(0)) == E(1);
  const bool c = bracket(E(-1), E(0)) == Rational(-1) * E(-1);
  r.sl2_ok = a && b && c;
  if (!a) throw EmbeddingViolation("sl(2) relation fails at (1, -1)", 1, -1);
  if (!b) throw EmbeddingViolation("sl(2) relation fails at (1, 0)", 1, 0);
  if (!c) throw EmbeddingViolation("sl(2) relation fails at (-1, 0)", -1, 0);
  return r;
}

std::string to_string(const VirElement& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rational& q, const std::string& what) {
    Rational v = q;
    if (first) {
      if (v < 0) {
        os << "-";
        v = -v;
      }
    } else {
      os << (v < 0 ? " - " : " + ");
      if (v < 0) v = -v;
    }
    first = false;
    if (denominator(v) == 1)
      os << numerator(v);
    else
      os << numerator(v) << '/' << denominator(v);
    os << "·" << what;
  };
  for (const auto& [k, q] : x.terms) emit(q, "L_{" + std::to_string(k) + "}");
  if (x.central != 0) emit(x.central, "c");
  return os.str();
}

void write_embedding_report(std::ostream& os, const EmbeddingReport& r) {
  os << "n " << r.n << "\n"
     << "range " << r.range << " (|i|, |j| <= " << r.range << ")\n"
     << "pairs " << r.pairs_checked << "\n"
     << "sl2 " << (r.sl2_ok ? "ok" : "fail") << "\n";
}

MoebiusMap MoebiusMap::su11(const Complex& alpha, const Complex& beta) {
  const Real det = norm(alpha) - norm(beta);
  if (abs(det - 1) > Real("1e-30"))
    throw Error(ErrorKind::InvalidArgument, "SU(1,1) map needs |alpha|^2 - |beta|^2 = 1");
  return MoebiusMap{alpha, beta, conj(beta), conj(alpha)};
}

MoebiusMap MoebiusMap::rotation(const Real& theta) {
  return su11(Complex::polar(Real(1), theta / 2), Complex());
}

MoebiusMap MoebiusMap::identity() { return MoebiusMap{Complex(Real(1)), Complex(), Complex(), Complex(Real(1))}; }

void MoebiusMap::validate() const {
  const Complex det = a * d - b * c;
  if (abs(det - Complex(Real(1))) > Real("1e-20"))
    throw Error(ErrorKind::InvalidArgument, "Moebius map must have ad - bc = 1");
  for (int k = 0; k < 16; ++k) {
    const Complex z = Complex::polar(Real(1), 2 * pi() * k / 16 + Real("0.1"));
    if (abs(abs((*this)(z)) - 1) > Real("1e-20"))
      throw Error(ErrorKind::InvalidArgument, "Moebius map does not preserve the unit circle");
  }
}

Complex MoebiusMap::operator()(const Complex& z) const { return (a * z + b) / (c * z + d); }

MoebiusMap compose(const MoebiusMap& h, const MoebiusMap& g) {
  return MoebiusMap{h.a * g.a + h.b * g.c, h.a * g.b + h.b * g.d, h.c * g.a + h.d * g.c,
                    h.c * g.b + h.d * g.d};
}

namespace {

Real wrap(const Real& x) {
  // into (-pi, pi]
  const Real two_pi = 2 * pi();
  Real y = x - two_pi * floor(x / two_pi);
  if (y > pi()) y -= two_pi;
  return y;
}

}  // namespace

CoverLift cover_action(const MoebiusMap& g, long n, const Complex& z, const Complex& seed_z,
                       const Complex& seed_w) {
  if (n <= 0) throw Error(ErrorKind::InvalidCover, "cover degree n must be >= 1");
  g.validate();
  const Real tol("1e-25");
  if (abs(abs(z) - 1) > tol || abs(abs(seed_z) - 1) > tol || abs(abs(seed_w) - 1) > tol)
    throw Error(ErrorKind::InvalidArgument, "points must lie on the unit circle");
  if (abs(pow(seed_w, static_cast<int>(n)) - g(pow(seed_z, static_cast<int>(n)))) > tol)
    throw Error(ErrorKind::InvalidCover, "branch seed does not satisfy w^n = g(z^n)");

  const Real start = arg(seed_z);
  const Real total = wrap(arg(z) - start);
  const Real spacing = 2 * pi() / n;
  // |d arg g / d arg zeta| <= (|a| + |b|)^2 on the circle, so this step moves
  // the root by at most spacing/8 and the nearest root is the continuation.
  const Real K = (abs(g.a) + abs(g.b)) * (abs(g.a) + abs(g.b));
  const Real max_step = std::min(Real(pi() / (4 * n)), Real(spacing / (8 * K)));

  CoverLift out;
  Real phi = arg(seed_w);
  Real done(0);
  Real step = max_step;
  const Real min_step = max_step * pow(Real(2), -40);
  while (abs(total - done) > 0) {
    Real h = std::min(step, Real(abs(total - done)));
    if (total < 0) h = -h;
    const Complex zz = Complex::polar(Real(1), start + done + h);
    const Real theta = arg(g(pow(zz, static_cast<int>(n))));
    // Root angles (theta + 2 pi k)/n; take the one nearest the previous phi.
    const Real base = theta / n;
    const Real k = round((phi - base) / spacing);
    const Real candidate = base + k * spacing;
    const Real dist = abs(wrap(candidate - phi));
    if (dist > spacing / 4) {
      step /= 2;
      if (step < min_step)
        throw Error(ErrorKind::RefinePath, "nth-root branch cannot be tracked near arg z = " +
                                               to_decimal(start + done, 12));
      continue;
    }
    phi = candidate;
    done += h;
    ++out.steps;
  }
  out.w = Complex::polar(Real(1), phi);
  out.square_residual = abs(pow(out.w, static_cast<int>(n)) - g(pow(z, static_cast<int>(n))));
  if (out.square_residual > tol)
    throw Error(ErrorKind::IdentityViolation,
                "commuting square residual " + to_decimal(out.square_residual, 6));
  return out;
}

FreeEnergy free_energy(const Rational& c, long n, bool two_dim) {
  if (n < 1) throw Error(ErrorKind::InvalidCover, "cover degree n must be >= 1");
  const Rational factor = two_dim ? Rational(2) : Rational(1);
  FreeEnergy f;
  f.fn_over_2pi = factor * c / 24 * anomaly(n) * 24;
  f.fmean_over_2pi = factor * c / 24;
  f.fn = 2 * pi() * to_real(f.fn_over_2pi);
  f.fmean = 2 * pi() * to_real(f.fmean_over_2pi);
  return f;
}

Rational a2_shift_over_2pi(const Rational& c, long n) {
  if (n < 1) throw Error(ErrorKind::InvalidCover, "cover degree n must be >= 1");
  return -(c / 24) * anomaly(n) * 24;
}

}  // namespace cftspec::vir
