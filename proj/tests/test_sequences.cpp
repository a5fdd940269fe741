#include <catch2/catch_amalgamated.hpp>

#include "holorecon/sequence.hpp"

using namespace holorecon;

namespace {
prec_t B = 256;
Cplx pt(double re, double im) { return Cplx(re, im, B); }
}  // namespace

TEST_CASE("theta generator pinned prefix", "[sequences]") {
  auto s1 = gen_theta(1, B);
  CHECK(s1.pts == std::vector<Cplx>{pt(0, 1)});
  auto s4 = gen_theta(4, B);
  CHECK(s4.pts == std::vector<Cplx>{pt(0, 1), pt(-0.5, 0), Cplx(Real(0, B), Real(-1, B) / Real(3, B)), pt(0.25, 0)});
  CHECK(s4.min_gap() > Real(0.0, B));
}

TEST_CASE("kappa generator values and range", "[sequences]") {
  auto s = gen_kappa(50, B);
  // 3 + sin 1 to high precision
  Real expect = Real(3.0, B) + sin(Real(1.0, B));
  CHECK(s.pts[0].re() == expect);
  CHECK(abs(s.pts[0].re() - Real(3.8414709848, B)) < Real(1e-9, B));
  for (const auto& z : s.pts) {
    CHECK(z.im().is_zero());
    CHECK(z.re() >= Real(2.0, B));
    CHECK(z.re() <= Real(4.0, B));
  }
  // min over j,k <= 50 of |theta_j - kappa_k| >= 1
  auto th = gen_theta(50, B);
  CHECK(clipped_set_distance(th, s) >= Real(1.0, B));
}

TEST_CASE("square net pinned enumeration", "[sequences]") {
  auto s = gen_square_net(25, B);
  CHECK(s.pts[0] == pt(0, 0));
  CHECK(s.pts[1] == pt(1, 0));
  CHECK(s.pts[2] == pt(1, 1));
  CHECK(s.pts[3] == pt(0, 1));
  CHECK(s.pts[4] == pt(0.5, 0));
  CHECK(s.pts[5] == pt(0, 0.5));
  CHECK(s.pts[6] == pt(0.5, 0.5));
  CHECK(s.pts[7] == pt(1, 0.5));
  CHECK(s.pts[8] == pt(0.5, 1));
  CHECK(square_net_level_count(2) == 25);
}

TEST_CASE("square net level spacing is exact and levels nest", "[sequences]") {
  // integer-lattice check: points of A_r at scale 2^r, pairwise distance >= 1
  for (int r = 0; r <= 6; ++r) {
    std::size_t n = square_net_level_count(r);
    auto s = gen_square_net(n, B);
    long den = 1L << r;
    std::vector<std::pair<long, long>> ints;
    ints.reserve(n);
    for (const auto& z : s.pts) {
      double x = z.re().to_double() * den, y = z.im().to_double() * den;
      long a = std::lround(x), b = std::lround(y);
      REQUIRE(a == x);  // exactness of the rational construction
      REQUIRE(b == y);
      ints.emplace_back(a, b);
    }
    // distinct lattice points are automatically >= 1 apart; verify distinct
    std::sort(ints.begin(), ints.end());
    CHECK(std::adjacent_find(ints.begin(), ints.end()) == ints.end());
    // nestedness: the first (2^(r-1)+1)^2 points have even coordinates at scale r
    if (r >= 1) {
      std::size_t prev = square_net_level_count(r - 1);
      for (std::size_t i = 0; i < prev; ++i) {
        double x = s.pts[i].re().to_double() * den;
        CHECK(std::lround(x) % 2 == 0);
      }
    }
  }
}

TEST_CASE("interleave places kappa odd, theta even", "[sequences]") {
  DirectionSequence a{{pt(5, 0)}, "a"};                 // theta-role
  DirectionSequence b{{pt(0, 5), pt(1, 5)}, "b"};       // kappa-role
  auto s = interleave(a, b);
  CHECK(s.pts == std::vector<Cplx>{pt(0, 5), pt(5, 0), pt(1, 5)});
  DirectionSequence empty{{}, "e"};
  CHECK(interleave(empty, DirectionSequence{{pt(1, 1)}, "k"}).pts ==
        std::vector<Cplx>{pt(1, 1)});
  auto th = gen_theta(20, B);
  auto ka = gen_kappa(20, B);
  auto il = interleave(th, ka);
  REQUIRE(il.size() == 40);
  for (std::size_t j = 1; j <= 40; ++j)
    CHECK(il.at(j) == (j % 2 ? ka.at((j + 1) / 2) : th.at(j / 2)));
  CHECK_THROWS_AS(interleave(a, a), OverlapError);
}

TEST_CASE("homography pinned values and inverse round trip", "[sequences]") {
  Cplx u(3, 0, B);
  DirectionSequence s{{pt(0, 0), pt(0, 1)}, "x"};
  auto h = homography(s, u);
  // u=3, zeta=0 -> -1/3
  CHECK(abs(h.pts[0] - Cplx(Real(-1, B) / Real(3, B), Real(0, B))) < Real::pow2(-250, B));
  // u=3, zeta=i -> (1+3i)/(i-3)
  Cplx expect = Cplx(1, 3, B) / Cplx(-3, 1, B);
  CHECK(abs(h.pts[1] - expect) < Real::pow2(-250, B));
  auto th = gen_theta(30, B);
  auto round = homography_inverse(homography(th, Cplx(5, 2, B)), Cplx(5, 2, B));
  Real tol = Real::pow2(-(B - 16), B);
  for (std::size_t i = 0; i < th.size(); ++i) {
    Real denom = max(abs(th.pts[i]), Real(1.0, B));
    CHECK(abs(round.pts[i] - th.pts[i]) / denom < tol);
  }
  CHECK_THROWS_AS(homography(s, pt(0, 1), 1e-3), PoleTooCloseError);
}

TEST_CASE("delete_subsequence keeps relative order", "[sequences]") {
  auto th = gen_theta(10, B);
  auto ka = gen_kappa(10, B);
  auto il = interleave(th, ka);
  auto kept = delete_subsequence(il, [](std::size_t j) { return j % 2 == 0; });
  REQUIRE(kept.size() == 10);
  for (std::size_t j = 1; j <= 10; ++j) CHECK(kept.at(j) == ka.at(j));  // odd = kappa
  auto same = delete_subsequence(il, [](std::size_t) { return false; });
  CHECK(same.pts == il.pts);
  auto prefix = delete_subsequence(il, [](std::size_t j) { return j > 3; });
  CHECK(prefix.pts == std::vector<Cplx>{il.at(1), il.at(2), il.at(3)});
}

TEST_CASE("apply_permutation basics", "[sequences]") {
  auto th = gen_theta(8, B);
  auto id = apply_permutation(th, Permutation::identity(8), 8);
  CHECK(id.pts == th.pts);
  auto sw = apply_permutation(th, Permutation::transposition(8, 1, 2), 8);
  CHECK(sw.at(1) == th.at(2));
  CHECK(sw.at(2) == th.at(1));
  CHECK(sw.at(3) == th.at(3));
  Permutation big({12}, "big");
  CHECK_THROWS_AS(apply_permutation(th, big, 1), IndexOverflowError);
}

TEST_CASE("permutation surjectivity frontier", "[sequences]") {
  Permutation p({2, 1, 5, 3}, "gap");  // 4 missing
  CHECK(p.injective_prefix());
  CHECK(p.surjectivity_frontier() == 3);
}
