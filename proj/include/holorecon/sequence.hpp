#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "holorecon/complex.hpp"
#include "holorecon/errors.hpp"

namespace holorecon {

/// Ordered family of pairwise-distinct finite directions eta_j defining the
/// lines {z1 = eta_j z2}. Points are a materialized prefix; provenance
/// records the generator and parameters.
struct DirectionSequence {
  std::vector<Cplx> pts;
  std::string provenance;

  std::size_t size() const { return pts.size(); }
  const Cplx& at(std::size_t j1) const { return pts.at(j1 - 1); }  // 1-based

  /// Min pairwise distance over the materialized prefix. O(n^2); capped so
  /// large sigma_c materializations stay usable.
  Real min_gap(std::size_t cap = 4096) const {
    std::size_t n = std::min(pts.size(), cap);
    if (n < 2) return Real(std::numeric_limits<double>::infinity(), prec());
    Real best = distance(pts[0], pts[1]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Real d = distance(pts[i], pts[j]);
        if (d < best) best = d;
      }
    return best;
  }

  prec_t prec() const { return pts.empty() ? kDefaultPrecision : pts[0].precision(); }
};

/// Lazily materializable permutation of N\{0}; values are 1-based indices.
class Permutation {
 public:
  Permutation() = default;
  Permutation(std::vector<std::uint64_t> forward, std::string provenance)
      : fwd_(std::move(forward)), provenance_(std::move(provenance)) {}

  static Permutation identity(std::size_t n) {
    std::vector<std::uint64_t> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = j + 1;
    return Permutation(std::move(v), "identity");
  }

  static Permutation transposition(std::size_t n, std::size_t a, std::size_t b) {
    Permutation p = identity(n);
    std::swap(p.fwd_[a - 1], p.fwd_[b - 1]);
    p.provenance_ = "transposition(" + std::to_string(a) + "," + std::to_string(b) + ")";
    return p;
  }

  std::size_t materialized() const { return fwd_.size(); }
  const std::string& provenance() const { return provenance_; }
  const std::vector<std::uint64_t>& forward() const { return fwd_; }

  std::uint64_t operator()(std::size_t j1) const {
    if (j1 == 0 || j1 > fwd_.size())
      throw IndexOverflowError("permutation index " + std::to_string(j1) +
                               " outside materialized prefix of " +
                               std::to_string(fwd_.size()));
    return fwd_[j1 - 1];
  }

  bool injective_prefix() const {
    std::vector<std::uint64_t> s(fwd_);
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
  }

  /// Largest m such that every index 1..m appears in the materialized image
  /// (the lazily witnessed part of surjectivity).
  std::uint64_t surjectivity_frontier() const {
    std::vector<std::uint64_t> s(fwd_);
    std::sort(s.begin(), s.end());
    std::uint64_t m = 0;
    for (std::uint64_t v : s) {
      if (v == m + 1)
        ++m;
      else if (v > m + 1)
        break;
    }
    return m;
  }

 private:
  std::vector<std::uint64_t> fwd_;
  std::string provenance_;
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// theta_j = i^j / j, j >= 1. Converges to 0 and is not interpolable by a
/// single real-analytic curve (points alternate between the axes).
inline DirectionSequence gen_theta(std::size_t n, prec_t bits = kDefaultPrecision) {
  DirectionSequence s;
  s.provenance = "theta(i^j/j,n=" + std::to_string(n) + ")";
  s.pts.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    Real inv = Real(1.0, bits) / Real(static_cast<long>(j), bits);
    switch (j % 4) {
      case 1: s.pts.emplace_back(Real(0.0, bits), inv); break;        // i^1
      case 2: s.pts.emplace_back(-inv, Real(0.0, bits)); break;       // i^2
      case 3: s.pts.emplace_back(Real(0.0, bits), -inv); break;       // i^3
      default: s.pts.emplace_back(inv, Real(0.0, bits)); break;       // i^4
    }
  }
  return s;
}

/// kappa_j = 3 + sin j: real, inside [2,4], pairwise distinct since pi is
/// irrational.
inline DirectionSequence gen_kappa(std::size_t n, prec_t bits = kDefaultPrecision) {
  DirectionSequence s;
  s.provenance = "kappa(3+sin j,n=" + std::to_string(n) + ")";
  s.pts.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    Real v = Real(3.0, bits) + sin(Real(static_cast<long>(j), bits));
    s.pts.emplace_back(v, Real(0.0, bits));
  }
  return s;
}

/// Square-net numeration of [0,1]+i[0,1]: for every r the first (2^r+1)^2
/// points are the 2^-r-net A_r = {(s+it)/2^r}. The first nine points follow
/// the explicit enumeration 0, 1, 1+i, i, 1/2, i/2, (1+i)/2, 1+i/2, 1/2+i;
/// later levels are filled lexicographically by (Im, Re).
inline DirectionSequence gen_square_net(std::size_t n, prec_t bits = kDefaultPrecision) {
  DirectionSequence s;
  s.provenance = "square-net(n=" + std::to_string(n) + ")";
  s.pts.reserve(n);
  auto push = [&](long num_re, long num_im, long den) {
    if (s.pts.size() >= n) return;
    s.pts.emplace_back(Real(num_re, bits) / Real(den, bits),
                       Real(num_im, bits) / Real(den, bits));
  };
  // A_0 corner walk
  push(0, 0, 1);
  push(1, 0, 1);
  push(1, 1, 1);
  push(0, 1, 1);
  for (long r = 1; s.pts.size() < n; ++r) {
    long den = 1L << r;
    for (long t = 0; t <= den && s.pts.size() < n; ++t)
      for (long ss = 0; ss <= den && s.pts.size() < n; ++ss)
        if ((ss % 2) || (t % 2)) push(ss, t, den);  // new at level r
  }
  return s;
}

/// Number of points of the level-r square net A_r: (1+2^r)^2.
inline std::size_t square_net_level_count(int r) {
  std::size_t side = (1ULL << r) + 1ULL;
  return side * side;
}

/// eta_j := theta_{j/2} (j even), kappa_{(j+1)/2} (j odd). If one side runs
/// out, the rest of the other follows in order.
inline DirectionSequence interleave(const DirectionSequence& a,
                                    const DirectionSequence& b) {
  for (const auto& pa : a.pts)
    for (const auto& pb : b.pts)
      if (pa == pb) throw OverlapError("interleave: sequences share the point " + pa.str());
  DirectionSequence s;
  s.provenance = "interleave(" + a.provenance + ";" + b.provenance + ")";
  std::size_t ia = 0, ib = 0;
  for (std::size_t j = 1; ia < a.size() || ib < b.size(); ++j) {
    if (j % 2 == 1) {
      if (ib < b.size())
        s.pts.push_back(b.pts[ib++]);
      else
        s.pts.push_back(a.pts[ia++]);
    } else {
      if (ia < a.size())
        s.pts.push_back(a.pts[ia++]);
      else
        s.pts.push_back(b.pts[ib++]);
    }
  }
  return s;
}

/// h_u(zeta) = (1 + conj(u) zeta) / (zeta - u) applied pointwise.
/// Throws PoleTooClose when some |eta_j - u| < delta.
inline DirectionSequence homography(const DirectionSequence& seq, const Cplx& u,
                                    double delta = 1e-6) {
  prec_t bits = seq.prec();
  Real dmin(delta, bits);
  DirectionSequence out;
  out.provenance = "homography(u=" + u.str() + ";" + seq.provenance + ")";
  out.pts.reserve(seq.size());
  Cplx one = Cplx::one(bits);
  for (const auto& z : seq.pts) {
    if (distance(z, u) < dmin)
      throw PoleTooCloseError("homography pole u=" + u.str() + " within " +
                              dmin.str() + " of point " + z.str());
    out.pts.push_back((one + conj(u) * z) / (z - u));
  }
  return out;
}

/// Algebraic inverse of h_u: zeta = (1 + u w) / (w - conj(u)).
inline DirectionSequence homography_inverse(const DirectionSequence& seq, const Cplx& u,
                                            double delta = 1e-6) {
  prec_t bits = seq.prec();
  Real dmin(delta, bits);
  DirectionSequence out;
  out.provenance = "homography_inv(u=" + u.str() + ";" + seq.provenance + ")";
  out.pts.reserve(seq.size());
  Cplx one = Cplx::one(bits);
  Cplx cu = conj(u);
  for (const auto& w : seq.pts) {
    if (distance(w, cu) < dmin)
      throw PoleTooCloseError("inverse homography pole at point " + w.str());
    out.pts.push_back((one + u * w) / (w - cu));
  }
  return out;
}

/// Reciprocal family 1/eta_j (the h_infty map of the dense-case criterion).
inline DirectionSequence reciprocal(const DirectionSequence& seq, double delta = 1e-12) {
  prec_t bits = seq.prec();
  Real dmin(delta, bits);
  DirectionSequence out;
  out.provenance = "reciprocal(" + seq.provenance + ")";
  out.pts.reserve(seq.size());
  Cplx one = Cplx::one(bits);
  for (const auto& z : seq.pts) {
    if (abs(z) < dmin) throw PoleTooCloseError("reciprocal of point too close to 0");
    out.pts.push_back(one / z);
  }
  return out;
}

/// Remove the points whose 1-based index satisfies the predicate, keeping
/// the rest in their original relative order.
inline DirectionSequence delete_subsequence(const DirectionSequence& seq,
                                            const std::function<bool(std::size_t)>& victim) {
  DirectionSequence out;
  out.provenance = "delete(" + seq.provenance + ")";
  for (std::size_t j = 1; j <= seq.size(); ++j)
    if (!victim(j)) out.pts.push_back(seq.pts[j - 1]);
  return out;
}

/// (eta_{sigma(1)}, ..., eta_{sigma(n)}).
inline DirectionSequence apply_permutation(const DirectionSequence& seq,
                                           const Permutation& sigma, std::size_t n) {
  if (n > sigma.materialized())
    throw IndexOverflowError("apply_permutation: sigma materialized to " +
                             std::to_string(sigma.materialized()) + " < n = " +
                             std::to_string(n));
  DirectionSequence out;
  out.provenance = sigma.provenance() + "(" + seq.provenance + ")";
  out.pts.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    std::uint64_t idx = sigma(j);
    if (idx == 0 || idx > seq.size())
      throw IndexOverflowError("apply_permutation: sigma(" + std::to_string(j) +
                               ") = " + std::to_string(idx) + " exceeds sequence length " +
                               std::to_string(seq.size()));
    out.pts.push_back(seq.pts[idx - 1]);
  }
  return out;
}

/// min(2, dist(A-set, B-set)) over the materialized prefixes, the d_{theta,kappa}
/// of the sigma_1 construction.
inline Real clipped_set_distance(const DirectionSequence& a, const DirectionSequence& b,
                                 std::size_t cap = 512) {
  prec_t bits = std::max(a.prec(), b.prec());
  Real best(2.0, bits);
  std::size_t na = std::min(a.size(), cap), nb = std::min(b.size(), cap);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      Real d = distance(a.pts[i], b.pts[j]);
      if (d < best) best = d;
    }
  return best;
}

}  // namespace holorecon
