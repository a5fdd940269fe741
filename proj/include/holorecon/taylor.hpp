#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "holorecon/complex.hpp"
#include "holorecon/errors.hpp"

namespace holorecon {

/// Truncated bivariate Taylor model: exact coefficient oracle a_{k,l},
/// optional finite degree, and a closed-form bound on the tail
/// sup_{|z1|,|z2|<=R} |sum_{k+l>=N} a_{k,l} z1^k z2^l|.
struct BivariateTaylor {
  std::string name;
  int degree_bound = -1;  // -1: entire, no finite degree
  std::function<Cplx(int k, int l, prec_t bits)> coeff;
  std::function<Real(const Real& radius, int N)> tail_bound;

  bool is_polynomial() const { return degree_bound >= 0; }
};

/// The conjugate kernel (conj(z)/(1+|z|^2))^q driving the convergence
/// criterion; |result| <= 1 for every z and q.
inline Cplx phi_kernel(const Cplx& zeta, unsigned long q) {
  prec_t p = zeta.precision();
  Cplx base = conj(zeta) / (Real(1.0, p) + norm2(zeta));
  return pow_ui(base, q);
}

/// sum_{k+l=m} a_{k,l} eta^k: the m-th Taylor coefficient of
/// v -> f(eta v, v), i.e. (1/m!) d^m/dv^m f(eta v, v)|_{v=0}.
inline Cplx line_derivative_sum(const BivariateTaylor& f, const Cplx& eta, int m,
                                prec_t bits) {
  // Horner in eta over the homogeneous layer k+l=m.
  Cplx acc = f.coeff(m, 0, bits);
  for (int k = m - 1; k >= 0; --k) acc = acc * eta + f.coeff(k, m - k, bits);
  return acc;
}

/// Dense coefficient matrix a_{k,l} for k+l <= degree, evaluated once.
class CoeffTable {
 public:
  CoeffTable(const BivariateTaylor& f, int degree, prec_t bits)
      : degree_(degree), bits_(bits) {
    rows_.reserve(degree + 1);
    for (int k = 0; k <= degree; ++k) {
      std::vector<Cplx> row;
      row.reserve(degree - k + 1);
      for (int l = 0; l + k <= degree; ++l) row.push_back(f.coeff(k, l, bits));
      rows_.push_back(std::move(row));
    }
  }

  const Cplx& at(int k, int l) const { return rows_[k][l]; }
  int degree() const { return degree_; }
  prec_t bits() const { return bits_; }

  /// line_derivative_sum from the cached table.
  Cplx line_sum(const Cplx& eta, int m) const {
    Cplx acc = rows_[m][0];
    for (int k = m - 1; k >= 0; --k) acc = acc * eta + rows_[k][m - k];
    return acc;
  }

 private:
  int degree_;
  prec_t bits_;
  std::vector<std::vector<Cplx>> rows_;
};

/// Horner-style evaluation of the truncation sum_{k+l<=M} a_{k,l} z1^k z2^l.
inline Cplx eval_taylor(const BivariateTaylor& f, const Cplx& z1, const Cplx& z2,
                        std::optional<int> truncation = std::nullopt,
                        prec_t bits = kDefaultPrecision) {
  int M;
  if (truncation)
    M = *truncation;
  else if (f.is_polynomial())
    M = f.degree_bound;
  else
    throw TruncationUnavailableError("eval_taylor: '" + f.name +
                                     "' has no finite degree and no truncation was given");
  // sum over k of z1^k * (inner Horner in z2).
  Cplx acc = Cplx::zero(bits);
  for (int k = M; k >= 0; --k) {
    Cplx inner = f.coeff(k, M - k, bits);
    for (int l = M - k - 1; l >= 0; --l) inner = inner * z2 + f.coeff(k, l, bits);
    acc = acc * z1 + inner;
  }
  return acc;
}

inline Cplx eval_taylor(const CoeffTable& t, const Cplx& z1, const Cplx& z2) {
  int M = t.degree();
  Cplx acc = Cplx::zero(t.bits());
  for (int k = M; k >= 0; --k) {
    Cplx inner = t.at(k, M - k);
    for (int l = M - k - 1; l >= 0; --l) inner = inner * z2 + t.at(k, l);
    acc = acc * z1 + inner;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Builtin catalog: monomials, rational-coefficient polynomials,
// exp(a z1 + b z2), exp(a z1 z2), each with exact oracles and closed-form
// tail bounds.
// ---------------------------------------------------------------------------

inline BivariateTaylor monomial(int k0, int l0) {
  BivariateTaylor f;
  f.name = "monomial(" + std::to_string(k0) + "," + std::to_string(l0) + ")";
  f.degree_bound = k0 + l0;
  f.coeff = [k0, l0](int k, int l, prec_t bits) {
    return (k == k0 && l == l0) ? Cplx::one(bits) : Cplx::zero(bits);
  };
  f.tail_bound = [k0, l0](const Real& R, int N) {
    if (N > k0 + l0) return Real(0.0, R.precision());
    return pow_si(R, k0 + l0);
  };
  return f;
}

struct PolyTerm {
  int k;
  int l;
  double c;  // dyadic doubles stay exact at every working precision
};

inline BivariateTaylor polynomial(std::string name, std::vector<PolyTerm> terms) {
  int deg = 0;
  for (const auto& t : terms) deg = std::max(deg, t.k + t.l);
  BivariateTaylor f;
  f.name = std::move(name);
  f.degree_bound = deg;
  auto shared = std::make_shared<std::vector<PolyTerm>>(std::move(terms));
  f.coeff = [shared](int k, int l, prec_t bits) {
    for (const auto& t : *shared)
      if (t.k == k && t.l == l) return Cplx(t.c, 0.0, bits);
    return Cplx::zero(bits);
  };
  f.tail_bound = [shared](const Real& R, int N) {
    Real s(0.0, R.precision());
    for (const auto& t : *shared)
      if (t.k + t.l >= N) s += Real(std::abs(t.c), R.precision()) * pow_si(R, t.k + t.l);
    return s;
  };
  return f;
}

/// Deterministic random polynomial of total degree <= deg; coefficients are
/// dyadic in [-1,1] so they are exact at any precision.
inline BivariateTaylor random_polynomial(int deg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PolyTerm> terms;
  for (int k = 0; k <= deg; ++k)
    for (int l = 0; k + l <= deg; ++l) {
      // 53-bit dyadic in [-1, 1]
      double c = static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
      terms.push_back({k, l, c});
    }
  return polynomial("random_poly(deg=" + std::to_string(deg) +
                        ",seed=" + std::to_string(seed) + ")",
                    std::move(terms));
}

/// exp(a z1 + b z2): a_{k,l} = a^k b^l / (k! l!).
/// Tail: sum_{m>=N} (|a|+|b|)^m R^m / m! <= x^N/N! e^x with x = (|a|+|b|)R.
inline BivariateTaylor exp_sum(long a, long b) {
  BivariateTaylor f;
  f.name = "exp(" + std::to_string(a) + "*z1+" + std::to_string(b) + "*z2)";
  f.degree_bound = -1;
  f.coeff = [a, b](int k, int l, prec_t bits) {
    Real num = pow_si(Real(a, bits), k) * pow_si(Real(b, bits), l);
    Real den = Real::factorial(k, bits) * Real::factorial(l, bits);
    return Cplx(num / den, Real(0.0, bits));
  };
  f.tail_bound = [a, b](const Real& R, int N) {
    prec_t p = R.precision();
    Real x = Real(std::abs(a) + std::abs(b), p) * abs(R);
    return pow_si(x, N) / Real::factorial(static_cast<unsigned long>(N), p) * exp(x);
  };
  return f;
}

/// exp(a z1 z2): a_{k,k} = a^k / k!, zero off the diagonal.
inline BivariateTaylor exp_prod(long a) {
  BivariateTaylor f;
  f.name = "exp(" + std::to_string(a) + "*z1*z2)";
  f.degree_bound = -1;
  f.coeff = [a](int k, int l, prec_t bits) {
    if (k != l) return Cplx::zero(bits);
    return Cplx(pow_si(Real(a, bits), k) / Real::factorial(k, bits), Real(0.0, bits));
  };
  f.tail_bound = [a](const Real& R, int N) {
    prec_t p = R.precision();
    int j = (N + 1) / 2;  // first diagonal index with 2k >= N
    Real x = Real(std::abs(a), p) * abs(R) * abs(R);
    return pow_si(x, j) / Real::factorial(static_cast<unsigned long>(j), p) * exp(x);
  };
  return f;
}

/// The standard test family quantifying over "all f" at desk scale.
inline std::vector<BivariateTaylor> builtin_catalog() {
  return {
      monomial(1, 1),
      polynomial("poly_demo", {{0, 0, 1.0}, {1, 0, -2.0}, {1, 2, 0.75}, {3, 0, 0.5}}),
      exp_sum(1, 1),
      exp_prod(1),
  };
}

/// Cauchy-estimate tail bound from a sup-norm sample:
/// ||f||_R * sum_{m>=N} (m+1) (rho/R)^m, finite for rho < R.
inline Real cauchy_tail_bound(const Real& f_norm_R, const Real& R, const Real& rho,
                              int N) {
  prec_t p = R.precision();
  Real x = rho / R;
  Real xN = pow_si(x, N);
  Real one(1.0, p);
  // sum_{m>=N} (m+1) x^m = x^N ((N+1) - N x) / (1-x)^2
  Real num = Real(static_cast<long>(N) + 1, p) - Real(static_cast<long>(N), p) * x;
  return f_norm_R * xN * num / ((one - x) * (one - x));
}

}  // namespace holorecon
