#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "holorecon/complex.hpp"
#include "holorecon/real.hpp"
#include "holorecon/taylor.hpp"

using namespace holorecon;

namespace {

// coefficients of v -> f(eta v, v) by DFT at roots of unity; independent of
// line_derivative_sum's coefficient-walk path
Cplx line_coeff_by_dft(const BivariateTaylor& f, const Cplx& eta, int m, int M,
                       prec_t bits) {
  int n = M + 1;
  Real two_pi = Real(2.0, bits) * Real::pi(bits);
  Cplx acc = Cplx::zero(bits);
  for (int j = 0; j < n; ++j) {
    Real t = two_pi * Real(static_cast<long>(j), bits) / Real(static_cast<long>(n), bits);
    Cplx w(cos(t), sin(t));
    Cplx g = eval_taylor(f, eta * w, w, M, bits);
    Real tm = t * Real(static_cast<long>(m), bits);
    acc += g * Cplx(cos(tm), -sin(tm));
  }
  return acc / Real(static_cast<long>(n), bits);
}

}  // namespace

TEST_CASE("precision floor and promotion", "[numerics]") {
  CHECK_THROWS_AS(Real(1.0, 32), std::invalid_argument);
  Real a(1.0, 128);
  Real b(3.0, 256);
  CHECK((a / b).precision() == 256);
  CHECK((b / a).precision() == 256);
  Cplx z(Real(1.0, 64), Real(2.0, 192));
  CHECK(z.precision() == 192);
}

TEST_CASE("dual precision agreement on well-conditioned ops", "[numerics]") {
  std::mt19937_64 rng(7);
  auto rnd = [&] { return static_cast<double>(rng() >> 11) * 0x1p-52 * 4.0 - 2.0; };
  Real tol = Real::pow2(-100, 128);
  for (int i = 0; i < 50; ++i) {
    Cplx a(rnd(), rnd(), 128), b(rnd(), rnd(), 128);
    Cplx a2 = a.round_to(256), b2 = b.round_to(256);
    Cplx lo = a * b + a / (b + Cplx::one(128));
    Cplx hi = a2 * b2 + a2 / (b2 + Cplx::one(256));
    CHECK(relative_discrepancy(abs(lo), abs(hi)) < tol);
  }
}

TEST_CASE("string round trip", "[numerics]") {
  Real a = Real(1.0, 256) / Real(7.0, 256);
  CHECK(Real::from_string(a.str(), 256) == a);
  Real b(-0.25, 128);
  CHECK(Real::from_string(b.str(), 128) == b);
}

TEST_CASE("phi kernel pinned values", "[numerics]") {
  prec_t B = 256;
  CHECK(phi_kernel(Cplx(0, 0, B), 1).is_zero());
  Cplx h = phi_kernel(Cplx(1, 0, B), 1);
  CHECK(h.re() == Real(0.5, B));
  CHECK(h.im().is_zero());
  Cplx m = phi_kernel(Cplx(0, 1, B), 2);  // (-i/2)^2 = -1/4
  CHECK(abs(m - Cplx(-0.25, 0.0, B)) < Real::pow2(-200, B));
}

TEST_CASE("phi kernel magnitude never exceeds 1", "[numerics]") {
  prec_t B = 128;
  std::mt19937_64 rng(11);
  std::vector<Cplx> pts;
  for (int i = 0; i < 200; ++i) {
    double x = static_cast<double>(rng() >> 11) * 0x1p-52 * 20.0 - 10.0;
    double y = static_cast<double>(rng() >> 11) * 0x1p-52 * 20.0 - 10.0;
    pts.emplace_back(x, y, B);
  }
  pts.emplace_back(0.0, 0.0, B);
  pts.emplace_back(1.0, 0.0, B);
  pts.emplace_back(1e6, 0.0, B);
  pts.emplace_back(0.0, -1e6, B);
  Real one(1.0, B);
  for (const auto& z : pts)
    for (unsigned long q : {1UL, 2UL, 5UL, 9UL}) CHECK(abs(phi_kernel(z, q)) <= one);
}

TEST_CASE("eval_taylor examples", "[numerics]") {
  prec_t B = 256;
  auto m = monomial(1, 1);
  CHECK(eval_taylor(m, Cplx(2, 0, B), Cplx(3, 0, B), std::nullopt, B) ==
        Cplx(6, 0, B));
  auto f = exp_sum(1, 1);
  CHECK(eval_taylor(f, Cplx::zero(B), Cplx::zero(B), 30, B) == Cplx::one(B));
  Cplx e2 = eval_taylor(f, Cplx::one(B), Cplx::one(B), 30, B);
  Real expect = exp(Real(2.0, B));
  CHECK(abs(e2.re() - expect) < Real(1e-12, B));
  CHECK_THROWS_AS(eval_taylor(f, Cplx::one(B), Cplx::one(B), std::nullopt, B),
                  TruncationUnavailableError);
}

TEST_CASE("line derivative sum examples", "[numerics]") {
  prec_t B = 256;
  auto z2 = monomial(0, 1);
  CHECK(line_derivative_sum(z2, Cplx(3, 4, B), 1, B) == Cplx::one(B));
  auto z1sq = monomial(2, 0);
  CHECK(line_derivative_sum(z1sq, Cplx(2, 0, B), 2, B) == Cplx(4, 0, B));
  auto f = exp_sum(1, 1);
  Cplx v = line_derivative_sum(f, Cplx::one(B), 3, B);  // 2^3/3! = 4/3
  CHECK(abs(v - Cplx(Real(4.0, B) / Real(3.0, B), Real(0.0, B))) < Real::pow2(-240, B));
}

TEST_CASE("line derivative sum equals univariate coefficient extraction", "[numerics]") {
  prec_t B = 256;
  Real tol(1e-50, B);
  std::vector<Cplx> etas = {Cplx(1, 0, B), Cplx(0.5, -0.25, B), Cplx(-2, 1, B)};
  for (const auto& f : builtin_catalog())
    for (const auto& eta : etas)
      for (int m = 0; m <= 10; ++m) {
        int M = f.is_polynomial() ? f.degree_bound : 24;
        if (m > M) continue;
        Cplx direct = line_derivative_sum(f, eta, m, B);
        Cplx dft = line_coeff_by_dft(f, eta, m, M, B);
        CHECK(abs(direct - dft) < tol * (Real(1.0, B) + abs(direct)));
      }
}

TEST_CASE("tail bounds dominate brute-force tails", "[numerics]") {
  prec_t B = 256;
  const int M = 40;
  for (const auto& f : builtin_catalog()) {
    CoeffTable tab(f, M, B);
    for (double rad : {0.5, 1.0, 2.0}) {
      Real R(rad, B);
      for (int N : {2, 5, 9}) {
        // brute force on the circle product grid, |z1| = |z2| = rad
        Real worst(0.0, B);
        Real two_pi = Real(2.0, B) * Real::pi(B);
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j) {
            Real t1 = two_pi * Real(static_cast<long>(i), B) / Real(6, B);
            Real t2 = two_pi * Real(static_cast<long>(j), B) / Real(6, B);
            Cplx z1 = Cplx(cos(t1), sin(t1)) * R;
            Cplx z2 = Cplx(cos(t2), sin(t2)) * R;
            std::vector<Cplx> p1{Cplx::one(B)}, p2{Cplx::one(B)};
            for (int k = 1; k <= M; ++k) {
              p1.push_back(p1.back() * z1);
              p2.push_back(p2.back() * z2);
            }
            Cplx tail = Cplx::zero(B);
            for (int m = N; m <= M; ++m)
              for (int k = 0; k <= m; ++k) tail += tab.at(k, m - k) * p1[k] * p2[m - k];
            worst = max(worst, abs(tail));
          }
        CHECK(worst <= f.tail_bound(R, N) + Real(1e-30, B));
      }
    }
  }
}

TEST_CASE("cauchy tail bound shape", "[numerics]") {
  prec_t B = 128;
  // ||f||_R = 1, rho/R = 1/8: sum (m+1) x^m from N
  Real b = cauchy_tail_bound(Real(1.0, B), Real(8.0, B), Real(1.0, B), 3);
  Real x(0.125, B);
  Real brute(0.0, B);
  for (int m = 3; m < 200; ++m)
    brute += Real(static_cast<long>(m + 1), B) * pow_si(x, m);
  CHECK(abs(b - brute) < Real(1e-20, B));
}
