#pragma once

#include <string>
#include <utility>

#include "holorecon/real.hpp"

namespace holorecon {

/// Complex scalar over Real; operand precisions promote like Real's.
class Cplx {
 public:
  explicit Cplx(prec_t bits = kDefaultPrecision)
      : re_(0.0, bits), im_(0.0, bits) {}

  Cplx(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}

  Cplx(double re, double im, prec_t bits) : re_(re, bits), im_(im, bits) {}

  static Cplx zero(prec_t bits) { return Cplx(bits); }
  static Cplx one(prec_t bits) { return Cplx(1.0, 0.0, bits); }

  const Real& re() const { return re_; }
  const Real& im() const { return im_; }

  prec_t precision() const {
    return re_.precision() > im_.precision() ? re_.precision() : im_.precision();
  }

  Cplx round_to(prec_t bits) const {
    return Cplx(re_.round_to(bits), im_.round_to(bits));
  }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_nan() const { return re_.is_nan() || im_.is_nan(); }

  friend Cplx operator+(const Cplx& a, const Cplx& b) {
    return Cplx(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend Cplx operator-(const Cplx& a, const Cplx& b) {
    return Cplx(a.re_ - b.re_, a.im_ - b.im_);
  }
  Cplx operator-() const { return Cplx(-re_, -im_); }

  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return Cplx(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend Cplx operator*(const Real& s, const Cplx& a) {
    return Cplx(s * a.re_, s * a.im_);
  }
  friend Cplx operator*(const Cplx& a, const Real& s) { return s * a; }

  friend Cplx operator/(const Cplx& a, const Cplx& b) {
    Real d = b.re_ * b.re_ + b.im_ * b.im_;
    return Cplx((a.re_ * b.re_ + a.im_ * b.im_) / d,
                (a.im_ * b.re_ - a.re_ * b.im_) / d);
  }
  friend Cplx operator/(const Cplx& a, const Real& s) {
    return Cplx(a.re_ / s, a.im_ / s);
  }

  Cplx& operator+=(const Cplx& o) { return *this = *this + o; }
  Cplx& operator-=(const Cplx& o) { return *this = *this - o; }
  Cplx& operator*=(const Cplx& o) { return *this = *this * o; }
  Cplx& operator/=(const Cplx& o) { return *this = *this / o; }

  friend bool operator==(const Cplx& a, const Cplx& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Cplx& a, const Cplx& b) { return !(a == b); }

  friend Cplx conj(const Cplx& a) { return Cplx(a.re_, -a.im_); }
  friend Real abs(const Cplx& a) { return hypot(a.re_, a.im_); }
  /// |a|^2, one rounding cheaper than abs().
  friend Real norm2(const Cplx& a) { return a.re_ * a.re_ + a.im_ * a.im_; }

  friend Cplx pow_ui(const Cplx& a, unsigned long e) {
    Cplx r = Cplx::one(a.precision());
    Cplx base = a;
    while (e > 0) {
      if (e & 1UL) r *= base;
      base *= base;
      e >>= 1UL;
    }
    return r;
  }

  std::string str() const {
    std::string im = im_.str();
    return re_.str() + (im[0] == '-' ? "" : "+") + im + "i";
  }

 private:
  Real re_, im_;
};

inline Real distance(const Cplx& a, const Cplx& b) { return abs(a - b); }

}  // namespace holorecon
