#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "holorecon/netplan.hpp"

using namespace holorecon;

namespace {
prec_t B = 256;
}

TEST_CASE("annulus classification uses the half-open set difference", "[sigma_c]") {
  CHECK(annulus_of(0.0, 0.0) == 1);
  CHECK(annulus_of(1.0, -1.0) == 1);   // boundary -> inner annulus
  CHECK(annulus_of(1.0, -1.25) == 2);
  CHECK(annulus_of(2.0, 0.0) == 2);
  CHECK(annulus_of(-2.5, 1.0) == 3);
}

TEST_CASE("dyadic diagonal source is distinct and dense-ish", "[sigma_c]") {
  DyadicDiagonalSource src;
  REQUIRE(src.ensure(30'000));
  // pairwise distinct as exact coordinate pairs
  std::set<std::pair<double, double>> seen;
  bool all_new = true;
  for (std::size_t i = 0; i < 30'000; ++i) all_new &= seen.insert(src.pt(i)).second;
  CHECK(all_new);
  // coarse grid over [-2,2]^2 fully hit well within the prefix
  std::vector<bool> hit(64, false);
  int remaining = 64;
  for (std::size_t i = 0; i < 30'000 && remaining; ++i) {
    auto [x, y] = src.pt(i);
    if (x < -2 || x >= 2 || y < -2 || y >= 2) continue;
    int c = static_cast<int>((y + 2) / 0.5) * 8 + static_cast<int>((x + 2) / 0.5);
    if (!hit[c]) {
      hit[c] = true;
      --remaining;
    }
  }
  CHECK(remaining == 0);
}

TEST_CASE("sigma_c opening moves and exact counts", "[sigma_c]") {
  DyadicDiagonalSource src;
  auto res = build_sigma_c(src, 3);
  REQUIRE(res.annulus_of_output.size() == 3);
  CHECK(res.annulus_of_output[0] == 1);
  CHECK(res.annulus_of_output[1] == 1);
  CHECK(res.annulus_of_output[2] == 2);  // counts {C1: 2}, then {C1: 2, C2: 1}
}

TEST_CASE("sigma_c interleaving invariant exact at every prefix", "[sigma_c]") {
  DyadicDiagonalSource src;
  auto res = build_sigma_c(src, 1024);
  CHECK(res.perm.injective_prefix());
  std::vector<long> counts;
  for (std::size_t N = 1; N <= 1024; ++N) {
    int r = res.annulus_of_output[N - 1];
    if (static_cast<int>(counts.size()) < r) counts.resize(r, 0);
    ++counts[r - 1];
    for (std::size_t s = 0; s + 1 < counts.size(); ++s) {
      long cr = counts[s], cn = counts[s + 1];
      REQUIRE(2 * cn <= cr);
      REQUIRE(cr <= 2 * cn + 2);
    }
  }
  // counts ~ N/2^r within 25% for r <= 5 and r_N within 2 of log2 N
  for (int r = 1; r <= 5; ++r) {
    double expect = 1024.0 / (1 << r);
    CHECK(std::fabs(counts[r - 1] - expect) / expect <= 0.25);
  }
  int r_N = static_cast<int>(counts.size());
  CHECK(std::fabs(r_N - 10.0) <= 2.0);
}

TEST_CASE("square net plan levels partition the prefix", "[sigma_c]") {
  auto plan = square_net_plan(3);
  CHECK(plan.region == "square [0,1]^2");
  REQUIRE(plan.levels.size() == 4);
  CHECK(plan.levels[0].filled.size() == 4);    // A_0
  CHECK(plan.levels[1].filled.size() == 5);    // A_1 \ A_0
  CHECK(plan.levels[2].filled.size() == 16);   // A_2 \ A_1
  CHECK(plan.levels[3].filled.size() == 56);   // A_3 \ A_2
}

TEST_CASE("sigma_c net plans: spacing and nesting", "[sigma_c]") {
  DyadicDiagonalSource src;
  auto res = build_sigma_c(src, 512);
  REQUIRE_FALSE(res.plans.empty());
  for (const auto& plan : res.plans) {
    CHECK(plan.k_init >= 3);
    CHECK(plan.region.rfind("annulus C_", 0) == 0);
    std::vector<std::pair<double, double>> members;  // accumulated: N_k nests
    for (const auto& lvl : plan.levels) {
      double spacing = std::ldexp(1.0, -lvl.k);
      // ideal nodes of one level are >= 2^-k apart; realized points keep
      // half that after the 2^-(k+2) perturbation allowance
      for (std::size_t i = 0; i < lvl.nodes.size(); ++i) {
        if (lvl.filled[i] < 0) continue;
        auto [x, y] = src.pt(lvl.filled[i]);
        double nx = std::ldexp(double(lvl.nodes[i].first), -lvl.k);
        double ny = std::ldexp(double(lvl.nodes[i].second), -lvl.k);
        CHECK(std::hypot(x - nx, y - ny) <= spacing / 4 + 1e-15);
        members.emplace_back(x, y);
      }
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
          CHECK(std::hypot(members[i].first - members[j].first,
                           members[i].second - members[j].second) >= spacing / 2);
    }
  }
}

TEST_CASE("sigma_c over a materialized sequence", "[sigma_c]") {
  DyadicDiagonalSource raw;
  REQUIRE(raw.ensure(30'000));
  DirectionSequence seq;
  seq.provenance = "dense-prefix";
  for (std::size_t i = 0; i < 30'000; ++i) seq.pts.push_back(raw.pt_exact(i, B));
  auto res = build_sigma_c(seq, 64);
  CHECK(res.perm.injective_prefix());
  auto ordered = apply_permutation(seq, res.perm, 64);
  CHECK(annulus_of(ordered.at(1).re().to_double(), ordered.at(1).im().to_double()) == 1);
  CHECK(annulus_of(ordered.at(3).re().to_double(), ordered.at(3).im().to_double()) == 2);
}

TEST_CASE("density heuristic rejects bounded input", "[sigma_c]") {
  auto sq = gen_square_net(100, B);  // lives in [0,1]^2
  CHECK_THROWS_AS(build_sigma_c(sq, 16), DensityError);
  // override: accepted, but the interleave rule eventually needs C_2
  SigmaCOptions opts;
  opts.density_override = true;
  CHECK_THROWS_AS(build_sigma_c(sq, 16, opts), DensityError);
}
