#pragma once

// Formal Virasoro algebra over the rationals, the n-cover embedding
// L_m -> L_{nm}/n, its lift of Moebius maps to the n-fold cover of the
// circle, and the resulting free energy.

#include "cftspec/numeric.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace cftspec::vir {

/// Sum_k terms[k] L_k + central * c, with zero coefficients never stored.
struct VirElement {
  std::map<long, Rational> terms;
  Rational central;

  static VirElement L(long k, const Rational& q = Rational(1));
  static VirElement C(const Rational& q = Rational(1));

  bool is_zero() const { return terms.empty() && central == 0; }

  VirElement& operator+=(const VirElement& o);
  VirElement& operator-=(const VirElement& o);
  VirElement& operator*=(const Rational& q);
};

VirElement operator+(VirElement a, const VirElement& b);
VirElement operator-(VirElement a, const VirElement& b);
VirElement operator*(const Rational& q, VirElement a);
bool operator==(const VirElement& a, const VirElement& b);

/// [L_m, L_n] = (m - n) L_{m+n} + c/12 (m^3 - m) delta_{m,-n}, c central.
VirElement bracket(const VirElement& x, const VirElement& y);

/// L_m -> L_{nm}/n (m != 0), L_0 -> L_0/n + c (n^2 - 1)/(24 n), c -> n c.
/// drop_anomaly removes the c (n^2 - 1)/(24 n) shift (negative control).
/// Throws Error(InvalidCover) for n <= 0.
VirElement rescale_embed(const VirElement& x, long n, bool drop_anomaly = false);

struct EmbeddingReport {
  long n = 1;
  long range = 1;
  long pairs_checked = 0;
  bool sl2_ok = false;
};

/// Checks bracket(embed L_i, embed L_j) == embed(bracket(L_i, L_j)) exactly
/// for |i|, |j| <= range, in order of |i| + |j| and then descending i, j,
/// plus the sl(2) relations of L_{-1}, L_0, L_1 images. Throws
/// EmbeddingViolation naming the first failing pair.
EmbeddingReport verify_embedding(long n, long range, bool drop_anomaly = false);

/// "q1·L_{k1} + q2·L_{k2} + qc·c"; "0" for the zero element.
std::string to_string(const VirElement& x);

void write_embedding_report(std::ostream& os, const EmbeddingReport& r);

/// z -> (a z + b)/(c z + d) with ad - bc = 1, preserving the unit circle.
struct MoebiusMap {
  Complex a, b, c, d;

  /// (alpha z + beta)/(conj(beta) z + conj(alpha)); requires
  /// |alpha|^2 - |beta|^2 = 1.
  static MoebiusMap su11(const Complex& alpha, const Complex& beta);
  static MoebiusMap rotation(const Real& theta);
  static MoebiusMap identity();

  /// Throws Error(InvalidArgument) unless ad - bc = 1 and |M(z)| = 1 on
  /// sample points of the circle to 1e-20.
  void validate() const;

  Complex operator()(const Complex& z) const;
};

/// h o g
MoebiusMap compose(const MoebiusMap& h, const MoebiusMap& g);

struct CoverLift {
  Complex w;
  Real square_residual;  // |w^n - g(z^n)|
  long steps = 0;
};

/// w with w^n = g(z^n), continued along the shorter arc from the branch seed
/// (seed_z, seed_w) in steps of at most pi/(4n), halved where the nearest
/// root is not clearly separated. Throws Error(RefinePath) if tracking fails
/// and Error(InvalidCover) if the seed is not a branch point pair.
CoverLift cover_action(const MoebiusMap& g, long n, const Complex& z, const Complex& seed_z,
                       const Complex& seed_w);

struct FreeEnergy {
  Rational fn_over_2pi;     // F_n / (2 pi)
  Rational fmean_over_2pi;  // F_mean / (2 pi)
  Real fn;
  Real fmean;
};

/// F_n = 2 pi (c/24)(n^2 - 1)/n and F_mean = 2 pi c/24 for a chiral net;
/// two_dim doubles both (left and right movers).
FreeEnergy free_energy(const Rational& c, long n, bool two_dim = false);

/// a2 of log Tr exp(-2 pi t L_0^(n)) minus a2 of log Tr exp(-2 pi t L_0/n),
/// as a rational multiple of 2 pi: the constant shift enters as -2 pi t shift,
/// so this equals -F_n / (2 pi).
Rational a2_shift_over_2pi(const Rational& c, long n);

}  // namespace cftspec::vir
