#pragma once

// Number types shared by every module.
//
// Exact quantities (Kac weights, central charges, character coefficients,
// Virasoro structure constants) use GMP integers and rationals. Analytic
// quantities use MPFR reals whose precision is set per scope, 50 decimal
// digits by default.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace cftspec {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultDigits = 50;

/// Sets the default MPFR precision (decimal digits) for the lifetime of the
/// object and restores the previous value on destruction.
class PrecisionScope {
public:
  explicit PrecisionScope(unsigned digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
  unsigned previous_;
};

unsigned working_digits();

Real pi();
Real to_real(const Rational& q);
Real to_real(const BigInt& z);

/// Full-precision scientific decimal string. digits == 0 means "all digits
/// of the current working precision".
std::string to_decimal(const Real& x, unsigned digits = 0);
std::string to_string(const Rational& q);

/// Complex number over Real; just enough arithmetic for phases, Moebius
/// maps on the circle and small matrix products.
struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r, Real i = Real(0)) : re(std::move(r)), im(std::move(i)) {}

  static Complex polar(const Real& radius, const Real& angle);

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(Complex a, const Complex& b);
Complex operator/(Complex a, const Complex& b);
Complex operator-(const Complex& a);
Complex conj(const Complex& a);
Real norm(const Complex& a);  // |a|^2
Real abs(const Complex& a);
Real arg(const Complex& a);
Complex pow(const Complex& a, int n);

}  // namespace cftspec
