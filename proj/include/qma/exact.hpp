#pragma once

// Scalar types for the symbolic layer: exact Gaussian rationals and the
// floating fallback std::complex<double>, with the small set of free
// functions (conj, is_zero, to_complex) the polynomial templates rely on.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <ostream>
#include <sstream>
#include <string>

namespace qma {

using Rational = boost::multiprecision::cpp_rational;

/// re + im * i with rational parts.
class ExactComplex {
 public:
  ExactComplex() = default;
  ExactComplex(int re) : re_(re) {}  // NOLINT: implicit, matches std::complex(double)
  ExactComplex(Rational re) : re_(std::move(re)) {}  // NOLINT
  ExactComplex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static ExactComplex i() { return {Rational(0), Rational(1)}; }

  /// p / 2^k; the corpus generators only produce dyadic values.
  static ExactComplex dyadic(long long re_num, long long im_num, unsigned shift) {
    const Rational den = Rational(boost::multiprecision::cpp_int(1) << shift);
    return {Rational(re_num) / den, Rational(im_num) / den};
  }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  ExactComplex& operator+=(const ExactComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ExactComplex& operator*=(const ExactComplex& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
  }

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  friend ExactComplex conj(const ExactComplex& a) { return {a.re_, -a.im_}; }

  friend std::ostream& operator<<(std::ostream& os, const ExactComplex& a) {
    if (a.im_ == 0) return os << a.re_;
    if (a.re_ == 0) return os << a.im_ << "i";
    os << '(' << a.re_ << (a.im_ < 0 ? "-" : "+") << abs(a.im_) << "i)";
    return os;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline bool is_zero(const ExactComplex& a) { return a.real() == 0 && a.imag() == 0; }
inline bool is_zero(const std::complex<double>& a) { return a == std::complex<double>(0.0); }

inline std::complex<double> to_complex(const ExactComplex& a) {
  return {static_cast<double>(a.real()), static_cast<double>(a.imag())};
}
inline std::complex<double> to_complex(const std::complex<double>& a) { return a; }

template <class S>
S imaginary_unit();
template <>
inline ExactComplex imaginary_unit<ExactComplex>() { return ExactComplex::i(); }
template <>
inline std::complex<double> imaginary_unit<std::complex<double>>() { return {0.0, 1.0}; }

template <class S>
std::string scalar_to_string(const S& s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

}  // namespace qma
