#include "cftspec/numeric.hpp"

#include <sstream>

namespace cftspec {

namespace {
// Boost starts MPFR numbers at 20 digits; the library works at 50.
const bool precision_initialised = [] {
  Real::default_precision(kDefaultDigits);
  return true;
}();
}  // namespace

PrecisionScope::PrecisionScope(unsigned digits)
    : previous_(Real::default_precision()) {
  Real::default_precision(digits);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(previous_); }

unsigned working_digits() { return Real::default_precision(); }

Real pi() {
  Real p;
  mpfr_const_pi(p.backend().data(), MPFR_RNDN);
  return p;
}

Real to_real(const Rational& q) {
  return Real(numerator(q)) / Real(denominator(q));
}

Real to_real(const BigInt& z) { return Real(z); }

std::string to_decimal(const Real& x, unsigned digits) {
  if (digits == 0) digits = x.precision();
  return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q) << '/' << denominator(q);
  return os.str();
}

Complex Complex::polar(const Real& radius, const Real& angle) {
  return {radius * cos(angle), radius * sin(angle)};
}

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real den = o.re * o.re + o.im * o.im;
  Real r = (re * o.re + im * o.im) / den;
  Real i = (im * o.re - re * o.im) / den;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator/(Complex a, const Complex& b) { return a /= b; }
Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
Complex conj(const Complex& a) { return {a.re, -a.im}; }
Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
Real abs(const Complex& a) { return sqrt(norm(a)); }
Real arg(const Complex& a) { return atan2(a.im, a.re); }

Complex pow(const Complex& a, int n) {
  Complex result(Real(1));
  Complex base = a;
  bool invert = n < 0;
  unsigned e = static_cast<unsigned>(invert ? -n : n);
  while (e != 0) {
    if (e & 1u) result *= base;
    base *= base;
    e >>= 1;
  }
  return invert ? Complex(Real(1)) / result : result;
}

}  // namespace cftspec
