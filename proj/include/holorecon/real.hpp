#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace holorecon {

using prec_t = long;

inline constexpr prec_t kMinPrecision = 64;
inline constexpr prec_t kDefaultPrecision = 256;

/// Arbitrary-precision real backed by MPFR, round-to-nearest throughout.
///
/// Every value carries its own mantissa width (>= 64 bits). Binary
/// operations promote the result to the larger operand precision.
class Real {
 public:
  explicit Real(prec_t bits = kDefaultPrecision) {
    check_precision(bits);
    mpfr_init2(v_, bits);
    mpfr_set_nan(v_);
  }

  Real(double x, prec_t bits) {
    check_precision(bits);
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }

  Real(long x, prec_t bits) {
    check_precision(bits);
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }

  Real(int x, prec_t bits) : Real(static_cast<long>(x), bits) {}

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }

  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }

  ~Real() { mpfr_clear(v_); }

  static Real from_string(std::string_view s, prec_t bits) {
    Real r(bits);
    std::string z(s);
    if (mpfr_set_str(r.v_, z.c_str(), 10, MPFR_RNDN) != 0)
      throw std::invalid_argument("Real::from_string: unparsable '" + z + "'");
    return r;
  }

  static Real pi(prec_t bits) {
    Real r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  static Real nan(prec_t bits) { return Real(bits); }

  /// n! at the given precision.
  static Real factorial(unsigned long n, prec_t bits) {
    Real r(bits);
    mpfr_fac_ui(r.v_, n, MPFR_RNDN);
    return r;
  }

  /// 2^e exactly (e may be negative).
  static Real pow2(long e, prec_t bits) {
    Real r(1.0, bits);
    mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
  }

  prec_t precision() const { return mpfr_get_prec(v_); }

  /// Value rounded to a new mantissa width.
  Real round_to(prec_t bits) const {
    check_precision(bits);
    Real r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Decimal string with enough digits to read back to the same value.
  std::string str() const {
    if (is_nan()) return "nan";
    if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
    if (is_zero()) return mpfr_signbit(v_) ? "-0" : "0";
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, 0, v_, MPFR_RNDN);
    if (!s) throw std::runtime_error("Real::str: mpfr_get_str failed");
    std::string digits(s);
    mpfr_free_str(s);
    bool neg = digits[0] == '-';
    std::string mant = neg ? digits.substr(1) : digits;
    std::size_t last = mant.find_last_not_of('0');
    mant = mant.substr(0, std::max<std::size_t>(last + 1, 1));
    // value = 0.mant * 10^e  ->  d.ddd e (e-1)
    std::string out = neg ? "-" : "";
    out += mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    long exp10 = static_cast<long>(e) - 1;
    if (exp10 != 0) out += "e" + std::to_string(exp10);
    return out;
  }

  // -- arithmetic ------------------------------------------------------

  friend Real operator+(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& o) { return *this = *this + o; }
  Real& operator-=(const Real& o) { return *this = *this - o; }
  Real& operator*=(const Real& o) { return *this = *this * o; }
  Real& operator/=(const Real& o) { return *this = *this / o; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }

  friend int compare(const Real& a, double b) { return mpfr_cmp_d(a.v_, b); }

  // -- elementary functions --------------------------------------------

  friend Real abs(const Real& a) {
    Real r(a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real sqrt(const Real& a) {
    Real r(a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real exp(const Real& a) {
    Real r(a.precision());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real log(const Real& a) {
    Real r(a.precision());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real log2(const Real& a) {
    Real r(a.precision());
    mpfr_log2(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real sin(const Real& a) {
    Real r(a.precision());
    mpfr_sin(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real cos(const Real& a) {
    Real r(a.precision());
    mpfr_cos(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real hypot(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real pow_si(const Real& a, long e) {
    Real r(a.precision());
    mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  friend Real min(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_min(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real max(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_max(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend long ceil_long(const Real& a) {
    Real r(a.precision());
    mpfr_ceil(r.v_, a.v_);
    return mpfr_get_si(r.v_, MPFR_RNDZ);
  }
  friend long floor_long(const Real& a) {
    Real r(a.precision());
    mpfr_floor(r.v_, a.v_);
    return mpfr_get_si(r.v_, MPFR_RNDZ);
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  static void check_precision(prec_t bits) {
    if (bits < kMinPrecision)
      throw std::invalid_argument("precision_bits must be >= 64");
  }
  static prec_t join(const Real& a, const Real& b) {
    return a.precision() > b.precision() ? a.precision() : b.precision();
  }

  mpfr_t v_;
};

/// |a - b| relative to max(|b|, floor); floor guards near-zero values.
inline Real relative_discrepancy(const Real& a, const Real& b) {
  prec_t p = a.precision() > b.precision() ? a.precision() : b.precision();
  Real tiny = Real::pow2(-(a.precision() / 2), p);
  Real denom = max(abs(b), tiny);
  return abs(a - b) / denom;
}

}  // namespace holorecon
