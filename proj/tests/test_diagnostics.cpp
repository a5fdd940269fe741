#include <catch2/catch_amalgamated.hpp>

#include "holorecon/diagnostics.hpp"

using namespace holorecon;

namespace {
prec_t B = 256;
}

TEST_CASE("square-net product bound: pinned small cases", "[diagnostics]") {
  // p=1, nodes {0, 1}: both leave-one-out products are 1 >= exp(-16)
  auto sq = gen_square_net(9, B);
  Real p0 = distance(sq.at(1), sq.at(2));
  CHECK(p0 == Real(1.0, B));
  // p=8 over the 9-point A_1 prefix: min product far above exp(-128)
  Real worst(1e300, B);
  for (int q = 0; q < 9; ++q) {
    Real prod(1.0, B);
    for (int j = 0; j < 9; ++j)
      if (j != q) prod *= distance(sq.pts[q], sq.pts[j]);
    worst = min(worst, prod);
  }
  CHECK(worst >= exp(Real(-128.0, B)));
}

TEST_CASE("square-net product bound holds from a small p_eta", "[diagnostics]") {
  auto sq = gen_square_net(81, B);
  auto rep = check_product_lower_bound(sq, 80, B);
  CHECK(rep.pass);
  CHECK(rep.details["p_eta"] <= 10.0);
  CHECK(rep.margin >= 0.0);
}

TEST_CASE("sigma_c annulus product fits are stable", "[diagnostics]") {
  DyadicDiagonalSource src;
  auto sc = build_sigma_c(src, 64);
  auto seq = materialize_sigma_c(src, sc, B);
  std::vector<int> Ns;
  for (int n = 8; n <= 64; n += 8) Ns.push_back(n);
  auto rep = check_annulus_products(seq, Ns, B);
  CHECK(rep.pass);
  CHECK(rep.details["B_hat"] > 0.0);
  CHECK(rep.details["stable"] == 1.0);
  // refit on a larger range moves the constants by < 10%
  std::vector<int> Ns2 = Ns;
  Ns2.push_back(72);
  Ns2.push_back(80);
  auto seq2 = materialize_sigma_c(src, build_sigma_c(src, 80), B);
  auto rep2 = check_annulus_products(seq2, Ns2, B);
  CHECK(rep2.details["B_hat"] <= 1.10 * rep.details["B_hat"] + 1e-12);
}

TEST_CASE("sigma_c net statistics report", "[diagnostics]") {
  DyadicDiagonalSource src;
  auto sc = build_sigma_c(src, 1024);
  auto seq = materialize_sigma_c(src, sc, B);
  auto rep = check_net_statistics(seq, {2, 3, 64, 256, 1024});
  CHECK(rep.pass);
  CHECK(rep.details["induc1_exact"] == 1.0);
  CHECK(rep.details["worst_count_deviation"] <= 0.25);
  CHECK(rep.details["worst_rN_offset"] <= 2.0);
}

TEST_CASE("criterion under homography", "[diagnostics]") {
  auto ka = gen_kappa(25, B);
  auto hc = criterion_under_homography(ka, {Cplx(0, 5, B)}, 24, 6, B);
  REQUIRE(hc.reports.size() == 3);  // identity, u = 5i, reciprocal
  CHECK(hc.combined == Verdict::kBounded);
  // the identity map reproduces criterion_matrix exactly
  auto direct = criterion_matrix(ka, 24, 6, B);
  for (int p = 0; p <= 24; ++p)
    for (int q = 0; q <= 6; ++q)
      CHECK(hc.reports[0].second.entries[p][q] == direct.entries[p][q]);

  auto th = gen_theta(25, B);
  auto ht = criterion_under_homography(th, {Cplx(5, 0, B)}, 24, 6, B);
  CHECK(ht.combined == Verdict::kGrowing);
  // the reciprocal family 1/theta_j = j / i^j is computed, unbounded or not
  CHECK(ht.reports.back().first == "h_inf(1/zeta)");
  CHECK_FALSE(ht.reports.back().second.entries.empty());
  // pole guard
  auto sq = gen_square_net(10, B);  // contains 0
  CHECK_THROWS_AS(reciprocal(sq), PoleTooCloseError);
}

TEST_CASE("integral anchors", "[diagnostics]") {
  auto a = riemann_constant_check(B);
  CHECK(a.pass);
  CHECK(a.err_t_ln_t <= 1e-12);
  CHECK(a.err_t_ln_t_over_3 <= 1e-12);
  // alpha = 1/4 + ln(3)/2
  Real alpha = Real(0.25, B) + log(Real(3.0, B)) / Real(2.0, B);
  CHECK(abs(a.t_ln_t_over_3 + alpha) < Real(1e-12, B));
}

TEST_CASE("riemann sums converge to the integrals", "[diagnostics]") {
  auto f = [](const Real& t) { return t * log(t); };
  Real target(-0.25, B);
  double prev = 1.0;
  for (int r = 4; r <= 12; r += 2) {
    double err = abs(riemann_sum_dyadic(f, r, B) - target).to_double();
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-6);
}
