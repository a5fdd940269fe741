#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "holorecon/sequence.hpp"

namespace holorecon {

/// Square annulus C_r = [-r,r]^2 \ [-(r-1),r-1]^2 of a point (C_1 is the
/// full square); boundary points belong to the inner annulus.
inline int annulus_of(double re, double im) {
  double m = std::max(std::fabs(re), std::fabs(im));
  if (m <= 1.0) return 1;
  return static_cast<int>(std::ceil(m));
}

// ---------------------------------------------------------------------------
// Dense input sources
// ---------------------------------------------------------------------------

/// Lazily materializable point stream feeding sigma_c. Screening coordinates
/// are doubles (exact for the dyadic default source).
class DenseSource {
 public:
  virtual ~DenseSource() = default;
  virtual std::size_t materialized() const = 0;
  /// Try to materialize at least n points; returns false once exhausted.
  virtual bool ensure(std::size_t n) = 0;
  virtual std::pair<double, double> pt(std::size_t i) const = 0;  // 0-based
  virtual Cplx pt_exact(std::size_t i, prec_t bits) const = 0;
  virtual std::string provenance() const = 0;
};

class SequenceSource final : public DenseSource {
 public:
  explicit SequenceSource(const DirectionSequence& seq) : seq_(&seq) {}
  std::size_t materialized() const override { return seq_->size(); }
  bool ensure(std::size_t n) override { return n <= seq_->size(); }
  std::pair<double, double> pt(std::size_t i) const override {
    return {seq_->pts[i].re().to_double(), seq_->pts[i].im().to_double()};
  }
  Cplx pt_exact(std::size_t i, prec_t bits) const override {
    return seq_->pts[i].round_to(bits);
  }
  std::string provenance() const override { return seq_->provenance; }

 private:
  const DirectionSequence* seq_;
};

/// Diagonal enumeration of the dyadic Gaussian rationals (a+ib)/2^k: stage t
/// covers all (k, s) with k+s = t, emitting reduced points whose sup-norm
/// lies in (2^(s-1), 2^s] (s = 0: <= 1). Dense in C, each point exactly once,
/// and both fine central points and coarse far points arrive early.
class DyadicDiagonalSource final : public DenseSource {
 public:
  DyadicDiagonalSource() = default;

  std::size_t materialized() const override { return pts_.size(); }

  bool ensure(std::size_t n) override {
    while (pts_.size() < n && stage_ <= kMaxStage) emit_stage(stage_++);
    return pts_.size() >= n;
  }

  std::pair<double, double> pt(std::size_t i) const override { return pts_[i]; }

  Cplx pt_exact(std::size_t i, prec_t bits) const override {
    return Cplx(pts_[i].first, pts_[i].second, bits);  // dyadic doubles are exact
  }

  std::string provenance() const override { return "dense-dyadic-diagonal"; }

 private:
  static constexpr int kMaxStage = 24;

  void emit_stage(int t) {
    for (int k = 0; k <= t; ++k) {
      int s = t - k;
      long outer = 1L << (s + k);                 // sup-norm bound, units 2^-k
      long inner = (s == 0) ? 0 : (1L << (s + k - 1));  // previous box
      double scale = std::ldexp(1.0, -k);
      for (long a = -outer; a <= outer; ++a)
        for (long b = -outer; b <= outer; ++b) {
          long m = std::max(std::labs(a), std::labs(b));
          if (m > outer || m <= inner) continue;
          if (k > 0 && (a % 2 == 0) && (b % 2 == 0)) continue;  // not reduced
          pts_.emplace_back(a * scale, b * scale);
        }
    }
  }

  int stage_ = 0;
  std::vector<std::pair<double, double>> pts_;
};

// ---------------------------------------------------------------------------
// Per-annulus nested perturbed nets and the sigma_c numeration
// ---------------------------------------------------------------------------

/// One 2^-k net level inside an annulus: the ideal dyadic nodes that are new
/// at this level and the input point filling each (-1: none found).
struct NetLevel {
  int k = 0;
  std::vector<std::pair<long, long>> nodes;  // numerators, denominator 2^k
  std::vector<std::int64_t> filled;          // 0-based input index or -1
};

struct NetPlan {
  std::string region;  // "annulus C_r" or "square [0,1]^2"
  int r = 0;           // annulus index (0 for the square)
  int k_init = 3;      // levels materialized when the annulus was opened
  std::vector<NetLevel> levels;
};

/// Level structure of the square-net numeration: level r holds the indices
/// of the points new in A_r (nested, spacing exactly 2^-r within A_r).
inline NetPlan square_net_plan(int r_max) {
  NetPlan plan;
  plan.region = "square [0,1]^2";
  plan.k_init = 0;
  std::size_t prev = 0;
  for (int r = 0; r <= r_max; ++r) {
    NetLevel lvl;
    lvl.k = r;
    std::size_t upto = square_net_level_count(r);
    for (std::size_t i = prev; i < upto; ++i) lvl.filled.push_back(static_cast<std::int64_t>(i));
    prev = upto;
    plan.levels.push_back(std::move(lvl));
  }
  return plan;
}

struct SigmaCOptions {
  bool density_override = false;    // skip the coarse-grid density heuristic
  std::size_t scan_budget = 2'000'000;  // max input points examined
  int max_level = 16;               // finest net level per annulus
};

struct SigmaCResult {
  Permutation perm;              // 1-based input indices
  std::vector<int> annulus_of_output;
  std::vector<NetPlan> plans;    // indexed by annulus-1 (materialized ones)
  std::size_t input_scanned = 0;
};

namespace detail {

struct PtKey {
  std::uint64_t a, b;
  bool operator==(const PtKey&) const = default;
};
// splitmix64 finalizer per word; dyadic doubles have highly structured bit
// patterns that defeat a single multiplicative mix
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
struct PtKeyHash {
  std::size_t operator()(const PtKey& k) const {
    return static_cast<std::size_t>(mix64(k.a) ^ mix64(~k.b));
  }
};
inline PtKey make_key(double x, double y) {
  PtKey k;
  static_assert(sizeof(double) == 8);
  std::memcpy(&k.a, &x, 8);
  std::memcpy(&k.b, &y, 8);
  return k;
}

class SigmaCBuilder {
 public:
  SigmaCBuilder(DenseSource& src, SigmaCOptions opts) : src_(src), opts_(opts) {}

  SigmaCResult run(std::size_t n) {
    if (!opts_.density_override) density_check();
    SigmaCResult res;
    std::vector<std::size_t> counts;  // per annulus, 1-based r at index r-1
    auto bump = [&](int r) {
      if (static_cast<int>(counts.size()) < r) counts.resize(r, 0);
      ++counts[r - 1];
    };
    for (std::size_t N = 0; N < n; ++N) {
      int target;
      if (N == 0) {
        target = 1;
      } else {
        int r_N = static_cast<int>(counts.size());
        while (r_N > 0 && counts[r_N - 1] == 0) --r_N;
        if (counts[r_N - 1] == 2) {
          target = r_N + 1;
        } else {
          target = 1;
          for (int s = r_N; s >= 2; --s)
            if (counts[s - 2] == 2 * counts[s - 1] + 2) {
              target = s;
              break;
            }
        }
      }
      std::size_t idx = emit_from(target);
      res.perm = Permutation();  // assembled below
      fwd_.push_back(idx + 1);
      res.annulus_of_output.push_back(target);
      bump(target);
    }
    res.perm = Permutation(std::move(fwd_), "sigma_c(" + src_.provenance() + ")");
    for (auto& st : annuli_)
      if (st) res.plans.push_back(st->plan);
    res.input_scanned = scanned_;
    return res;
  }

 private:
  struct Annulus {
    NetPlan plan;
    std::vector<std::pair<int, int>> order;  // (level idx, node idx)
    std::size_t emit_ptr = 0;
  };

  void density_check() {
    // prefix must hit every 0.5-cell of [-2,2]^2
    std::size_t probe = std::min<std::size_t>(opts_.scan_budget, 20'000);
    src_.ensure(probe);
    probe = std::min(probe, src_.materialized());
    std::vector<bool> hit(64, false);
    std::size_t remaining = 64;
    for (std::size_t i = 0; i < probe && remaining; ++i) {
      auto [x, y] = src_.pt(i);
      if (x < -2 || x >= 2 || y < -2 || y >= 2) continue;
      int cx = static_cast<int>((x + 2) / 0.5), cy = static_cast<int>((y + 2) / 0.5);
      std::size_t c = static_cast<std::size_t>(cy) * 8 + cx;
      if (!hit[c]) {
        hit[c] = true;
        --remaining;
      }
    }
    if (remaining)
      throw DensityError("input fails the density heuristic (" +
                         std::to_string(remaining) +
                         " cells of the coarse grid over [-2,2]^2 unhit); "
                         "pass the override to proceed anyway");
  }

  void scan_chunk() {
    std::size_t target = std::min(opts_.scan_budget,
                                  std::max<std::size_t>(scanned_ * 2, 4096));
    src_.ensure(target);
    std::size_t upto = std::min(src_.materialized(), opts_.scan_budget);
    for (; scanned_ < upto; ++scanned_) {
      auto [x, y] = src_.pt(scanned_);
      exact_.emplace(make_key(x, y), scanned_);
      int r = annulus_of(x, y);
      if (static_cast<int>(members_.size()) < r) members_.resize(r);
      members_[r - 1].push_back(scanned_);
    }
  }

  bool scan_exhausted() {
    return scanned_ >= opts_.scan_budget ||
           (scanned_ >= src_.materialized() && !src_.ensure(scanned_ + 1));
  }

  Annulus& annulus(int r) {
    if (static_cast<int>(annuli_.size()) < r) annuli_.resize(r);
    if (!annuli_[r - 1]) open_annulus(r);
    return *annuli_[r - 1];
  }

  void open_annulus(int r) {
    // first input point of the annulus fixes k_init >= 3
    while (static_cast<int>(members_.size()) < r || members_[r - 1].empty()) {
      if (scan_exhausted())
        throw DensityError("no input point found in annulus C_" + std::to_string(r) +
                           " within the scan budget");
      scan_chunk();
    }
    auto [x, y] = src_.pt(members_[r - 1].front());
    double dist_inner = std::max(std::fabs(x), std::fabs(y)) - (r == 1 ? 0.0 : r - 1.0);
    int k0 = 3;
    if (dist_inner > 0 && dist_inner < 1)
      k0 = std::max(3, static_cast<int>(std::ceil(-std::log2(dist_inner))));
    k0 = std::min(k0, opts_.max_level);
    auto st = std::make_unique<Annulus>();
    st->plan.region = "annulus C_" + std::to_string(r);
    st->plan.r = r;
    st->plan.k_init = k0;
    annuli_[r - 1] = std::move(st);
    for (int k = 1; k <= k0; ++k) add_level(r);
  }

  void add_level(int r) {
    Annulus& st = *annuli_[r - 1];
    int k = static_cast<int>(st.plan.levels.size()) + 1;
    if (k > opts_.max_level)
      throw DensityError("annulus C_" + std::to_string(r) + " exhausted at level " +
                         std::to_string(opts_.max_level));
    NetLevel lvl;
    lvl.k = k;
    long outer = static_cast<long>(r) << k;
    long inner_min = (r == 1) ? 0 : ((static_cast<long>(r) - 1) << k) + 1;
    for (long a = -outer; a <= outer; ++a)
      for (long b = -outer; b <= outer; ++b) {
        long m = std::max(std::labs(a), std::labs(b));
        if (m > outer || m < inner_min) continue;
        if (k > 1 && a % 2 == 0 && b % 2 == 0) continue;  // present one level up
        lvl.nodes.emplace_back(a, b);
      }
    lvl.filled.assign(lvl.nodes.size(), -1);
    int li = static_cast<int>(st.plan.levels.size());
    for (int i = 0; i < static_cast<int>(lvl.nodes.size()); ++i)
      st.order.emplace_back(li, i);
    st.plan.levels.push_back(std::move(lvl));
  }

  /// Earliest unused input point within 2^-(k+2) of the node, exact hits
  /// first; -1 when none is materialized yet.
  std::int64_t try_fill(int r, int k, long a, long b) {
    double scale = std::ldexp(1.0, -k);
    double nx = a * scale, ny = b * scale;
    auto it = exact_.find(make_key(nx, ny));
    if (it != exact_.end() && !used_.count(it->second)) return it->second;
    double tol = std::ldexp(1.0, -(k + 2));
    std::int64_t best = -1;
    double best_d = tol;
    if (static_cast<int>(members_.size()) >= r)
      for (std::size_t idx : members_[r - 1]) {
        if (used_.count(idx)) continue;
        auto [x, y] = src_.pt(idx);
        double d = std::hypot(x - nx, y - ny);
        if (d < best_d || (d == best_d && best >= 0 && idx < static_cast<std::size_t>(best))) {
          best = idx;
          best_d = d;
        }
      }
    return best;
  }

  std::size_t emit_from(int r) {
    Annulus& st = annulus(r);
    while (true) {
      if (st.emit_ptr == st.order.size()) {
        add_level(r);
        continue;
      }
      auto [li, ni] = st.order[st.emit_ptr];
      NetLevel& lvl = st.plan.levels[li];
      auto [a, b] = lvl.nodes[ni];
      std::int64_t got = try_fill(r, lvl.k, a, b);
      if (got < 0 && !scan_exhausted()) {
        scan_chunk();
        got = try_fill(r, lvl.k, a, b);
      }
      ++st.emit_ptr;
      if (got >= 0) {
        lvl.filled[ni] = got;
        used_.insert(static_cast<std::size_t>(got));
        return static_cast<std::size_t>(got);
      }
      // node unfillable within the budget: skip it
    }
  }

  DenseSource& src_;
  SigmaCOptions opts_;
  std::size_t scanned_ = 0;
  std::unordered_map<PtKey, std::size_t, PtKeyHash> exact_;
  std::vector<std::vector<std::size_t>> members_;  // per annulus input indices
  std::unordered_set<std::size_t> used_;
  std::vector<std::unique_ptr<Annulus>> annuli_;
  std::vector<std::uint64_t> fwd_;
};

}  // namespace detail

/// sigma_c over a lazily materialized dense source.
inline SigmaCResult build_sigma_c(DenseSource& src, std::size_t n,
                                  SigmaCOptions opts = {}) {
  return detail::SigmaCBuilder(src, opts).run(n);
}

/// sigma_c over an already materialized sequence.
inline SigmaCResult build_sigma_c(const DirectionSequence& seq, std::size_t n,
                                  SigmaCOptions opts = {}) {
  SequenceSource src(seq);
  return detail::SigmaCBuilder(src, opts).run(n);
}

/// Materialize the numbered points sigma_c produced.
inline DirectionSequence materialize_sigma_c(DenseSource& src, const SigmaCResult& res,
                                             prec_t bits = kDefaultPrecision) {
  DirectionSequence out;
  out.provenance = res.perm.provenance();
  out.pts.reserve(res.perm.materialized());
  for (std::size_t j = 1; j <= res.perm.materialized(); ++j)
    out.pts.push_back(src.pt_exact(res.perm(j) - 1, bits));
  return out;
}

}  // namespace holorecon
