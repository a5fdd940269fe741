#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "holorecon/divided.hpp"
#include "holorecon/sequence.hpp"

namespace holorecon {

// ---------------------------------------------------------------------------
// sigma_1: the permutation of interleave(theta, kappa) privileging kappa so
// that the criterion bound transfers from kappa to the whole sequence.
// Positions l_k + k carry theta_k, all other positions carry the kappas in
// order; l_k is the smallest integer >= k * max{1, log2(d / (2 phi_k R_kappa))}
// keeping (l_k) strictly increasing.
// ---------------------------------------------------------------------------

struct Sigma1Result {
  Permutation perm;        // values are 1-based indices into interleave(theta,kappa)
  std::vector<long> l_values;  // l_0, l_1, ... as materialized
  Real d_theta_kappa{kDefaultPrecision};
  std::size_t theta_used = 0;
};

inline Sigma1Result build_sigma1(const DirectionSequence& theta,
                                 const DirectionSequence& kappa, const Real& R_kappa,
                                 std::size_t n) {
  prec_t bits = std::max(theta.prec(), kappa.prec());
  if (R_kappa < Real(1.0, bits))
    throw std::invalid_argument("build_sigma1: R_kappa >= 1 required");
  Real d = clipped_set_distance(theta, kappa);
  if (d <= Real::pow2(-(bits / 2), bits))
    throw GapError("build_sigma1: dist(theta-set, kappa-set) is not positive");

  Sigma1Result res;
  res.d_theta_kappa = d;
  res.l_values.push_back(1);  // l_0

  // phi_K(theta_{K+1}) = min(1, min_{j<=K} |theta_{K+1}-theta_j|,
  //                          min_{i<j<=K} |theta_j - theta_i|)
  Real pairwise_min(1.0, bits);
  std::size_t pairwise_upto = 1;  // prefix size covered by pairwise_min
  auto phi_K = [&](std::size_t K) {
    if (K + 1 > theta.size())
      throw IndexOverflowError("build_sigma1: theta materialized to " +
                               std::to_string(theta.size()) + ", need " +
                               std::to_string(K + 1));
    while (pairwise_upto < K) {
      for (std::size_t j = 0; j < pairwise_upto; ++j)
        pairwise_min = min(pairwise_min, distance(theta.pts[pairwise_upto], theta.pts[j]));
      ++pairwise_upto;
    }
    Real m = min(Real(1.0, bits), pairwise_min);
    for (std::size_t j = 0; j < K; ++j) m = min(m, distance(theta.pts[K], theta.pts[j]));
    return m;
  };

  std::vector<std::uint64_t> fwd;
  fwd.reserve(n);
  std::size_t k = 0;          // thetas already placed
  long next_theta_pos = 0;    // l_{k+1} + (k+1)
  auto compute_next = [&]() {
    Real phi = phi_K(k + 1);
    Real ratio = log2(d / (Real(2.0, bits) * phi * R_kappa));
    Real raw = Real(static_cast<long>(k + 1), bits) * max(Real(1.0, bits), ratio);
    long lk = std::max(1L, ceil_long(raw));
    lk = std::max(lk, res.l_values.back() + 1);
    res.l_values.push_back(lk);
    next_theta_pos = lk + static_cast<long>(k + 1);
  };
  compute_next();  // l_1
  for (std::size_t j = 1; j <= n; ++j) {
    if (static_cast<long>(j) == next_theta_pos) {
      ++k;
      fwd.push_back(2 * k);  // theta_k sits at even interleave positions
      compute_next();
    } else {
      std::size_t m = j - k;  // kappa_m
      if (m > kappa.size())
        throw IndexOverflowError("build_sigma1: kappa materialized to " +
                                 std::to_string(kappa.size()) + ", need " +
                                 std::to_string(m));
      fwd.push_back(2 * m - 1);
    }
  }
  res.theta_used = k;
  res.perm = Permutation(std::move(fwd), "sigma1");
  return res;
}

// ---------------------------------------------------------------------------
// Divergence witnesses and sigma_2
// ---------------------------------------------------------------------------

struct DivergenceWitness {
  int p = 0;
  int q = 0;
  double log2_value = 0.0;
  bool precision_ok = true;  // false: dual-precision disagreement (warning)
};

/// All (p, q) within the budgets where |Delta_p[phi^q](eta_{p+1})| >= base^(p+q),
/// verified at (bits, 2*bits). Empty is a valid outcome: the search is
/// bounded, not complete.
inline std::vector<DivergenceWitness> find_divergence_witnesses(
    const std::vector<Cplx>& nodes, double growth_base, int p_budget, int q_budget,
    prec_t bits = kDefaultPrecision, int min_p = 1, int min_sum = 0) {
  if (p_budget < 1 || q_budget < 1)
    throw std::invalid_argument("find_divergence_witnesses: budgets >= 1");
  int P = std::min<int>(p_budget, static_cast<int>(nodes.size()) - 1);
  auto lo = detail::criterion_entries(nodes, P, q_budget, bits);
  auto hi = detail::criterion_entries(nodes, P, q_budget, 2 * bits);
  Real tol = Real::pow2(-64, 64);
  double lb = std::log2(growth_base);
  std::vector<DivergenceWitness> out;
  for (int p = std::max(1, min_p); p <= P; ++p)
    for (int q = 1; q <= q_budget; ++q) {
      if (p + q < min_sum) continue;
      if (hi[p][q].is_zero()) continue;
      double l2 = log2(hi[p][q]).to_double();
      if (l2 < (p + q) * lb) continue;
      DivergenceWitness w;
      w.p = p;
      w.q = q;
      w.log2_value = l2;
      w.precision_ok = relative_discrepancy(lo[p][q], hi[p][q]) <= tol;
      out.push_back(w);
    }
  return out;
}

inline std::vector<DivergenceWitness> find_divergence_witnesses(
    const DirectionSequence& seq, double growth_base, int p_budget, int q_budget,
    prec_t bits = kDefaultPrecision) {
  return find_divergence_witnesses(seq.pts, growth_base, p_budget, q_budget, bits);
}

/// sigma_2 from a witness list (p_r, q_r), r = 1..W: kappa_r is inserted at
/// position p_r + 2 of theta^(r-1); past the fixed prefix the remaining
/// thetas and kappas alternate. Preconditions: p_{r+1} >= p_r + 2 and
/// p_r + q_r strictly increasing.
inline Permutation build_sigma2(const DirectionSequence& theta,
                                const DirectionSequence& kappa,
                                const std::vector<std::pair<int, int>>& witnesses,
                                std::size_t n) {
  for (std::size_t r = 0; r < witnesses.size(); ++r) {
    if (witnesses[r].first < 1 || witnesses[r].second < 1)
      throw WitnessOrderError("witness p, q must be >= 1");
    if (r > 0) {
      if (witnesses[r].first < witnesses[r - 1].first + 2)
        throw WitnessOrderError("witness p_" + std::to_string(r + 1) +
                                " must be >= p_" + std::to_string(r) + " + 2");
      if (witnesses[r].first + witnesses[r].second <=
          witnesses[r - 1].first + witnesses[r - 1].second)
        throw WitnessOrderError("witness sums p_r + q_r must increase strictly");
    }
  }
  const long W = static_cast<long>(witnesses.size());
  std::vector<std::uint64_t> fwd;
  fwd.reserve(n);
  if (W == 0) {
    for (std::size_t j = 1; j <= n; ++j) fwd.push_back(j);
    return Permutation(std::move(fwd), "sigma2(identity: no witnesses)");
  }
  const long p_last = witnesses.back().first;
  const long p_max = p_last + 1;  // the last inserted kappa stays in the prefix
  // tokens: +k = theta_k, -m = kappa_m
  std::vector<long> prefix;
  prefix.reserve(p_max + 1);
  for (long k = 1; k <= p_max + 1; ++k) prefix.push_back(k);
  for (long r = 0; r < W; ++r) {
    long pos = witnesses[r].first + 2;  // 1-based insertion position
    prefix.insert(prefix.begin() + (pos - 1), -(r + 1));
    prefix.pop_back();
  }
  auto token_to_index = [&](long tok) -> std::uint64_t {
    return tok > 0 ? 2 * static_cast<std::uint64_t>(tok)
                   : 2 * static_cast<std::uint64_t>(-tok) - 1;
  };
  auto check_avail = [&](long tok) {
    if (tok > 0 && static_cast<std::size_t>(tok) > theta.size())
      throw IndexOverflowError("build_sigma2: theta materialized to " +
                               std::to_string(theta.size()) + ", need " +
                               std::to_string(tok));
    if (tok < 0 && static_cast<std::size_t>(-tok) > kappa.size())
      throw IndexOverflowError("build_sigma2: kappa materialized to " +
                               std::to_string(kappa.size()) + ", need " +
                               std::to_string(-tok));
  };
  for (std::size_t j = 1; j <= n; ++j) {
    long tok;
    if (j <= static_cast<std::size_t>(p_max + 1)) {
      tok = prefix[j - 1];
    } else {
      long off = static_cast<long>(j) - p_max;
      tok = (off % 2 == 0) ? (static_cast<long>(j) + p_max) / 2 - W + 1
                           : -((static_cast<long>(j) - p_max - 1) / 2 + W);
    }
    check_avail(tok);
    fwd.push_back(token_to_index(tok));
  }
  return Permutation(std::move(fwd), "sigma2(W=" + std::to_string(W) + ")");
}

struct Sigma2ChainResult {
  std::vector<std::pair<int, int>> witnesses;  // (p_r, q_r) on theta^(r-1)
  std::vector<DivergenceWitness> details;
  Permutation perm;
  bool any_precision_warning = false;
};

/// The insertion construction run with bounded budgets: witness r is searched
/// on the evolving theta^(r-1) (kappas already inserted), requiring
/// p_r >= p_{r-1} + 2 and p_r + q_r increasing; stops when the bounded
/// search comes back empty.
inline Sigma2ChainResult build_sigma2_chain(const DirectionSequence& theta,
                                            const DirectionSequence& kappa, int r_max,
                                            int p_budget, int q_budget,
                                            std::size_t n,
                                            prec_t bits = kDefaultPrecision) {
  std::vector<Cplx> cur(theta.pts.begin(), theta.pts.end());
  Sigma2ChainResult res;
  int prev_p = -1, prev_sum = 0;
  for (int r = 1; r <= r_max; ++r) {
    auto hits = find_divergence_witnesses(cur, static_cast<double>(r), p_budget,
                                          q_budget, bits, std::max(1, prev_p + 2),
                                          prev_sum + 1);
    if (hits.empty()) break;
    auto best = hits.front();
    for (const auto& h : hits)
      if (std::pair(h.p + h.q, h.p) < std::pair(best.p + best.q, best.p)) best = h;
    res.witnesses.emplace_back(best.p, best.q);
    res.details.push_back(best);
    res.any_precision_warning |= !best.precision_ok;
    if (static_cast<std::size_t>(r) > kappa.size())
      throw IndexOverflowError("build_sigma2_chain: kappa too short");
    cur.insert(cur.begin() + (best.p + 1), kappa.pts[r - 1]);
    prev_p = best.p;
    prev_sum = best.p + best.q;
  }
  res.perm = build_sigma2(theta, kappa, res.witnesses, n);
  return res;
}

}  // namespace holorecon
