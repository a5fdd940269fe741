#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "holorecon/sequence.hpp"
#include "holorecon/taylor.hpp"

namespace holorecon {

using ScalarOracle = std::function<Cplx(const Cplx&)>;

/// Nodes closer than 2^-(bits/2) leave no significant bits in Delta_p.
inline void check_distinct_nodes(const std::vector<Cplx>& nodes, prec_t bits) {
  Real thr = Real::pow2(-(bits / 2), bits);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (distance(nodes[i], nodes[j]) < thr)
        throw DuplicateNodeError("nodes " + std::to_string(i + 1) + " and " +
                                 std::to_string(j + 1) + " closer than 2^-" +
                                 std::to_string(bits / 2));
}

/// Delta_p by the defining recursion
/// Delta_p(h)(x) = [Delta_{p-1}(h)(x) - Delta_{p-1}(h)(eta_p)] / (x - eta_p).
/// nodes = (eta_1, ..., eta_{p+1}); the value is taken at eta_{p+1}.
inline Cplx delta_recursive(const ScalarOracle& h, const std::vector<Cplx>& nodes,
                            int p, prec_t bits) {
  if (p + 1 > static_cast<int>(nodes.size()))
    throw std::invalid_argument("delta_recursive: needs p+1 nodes");
  std::vector<Cplx> work(nodes.begin(), nodes.begin() + p + 1);
  check_distinct_nodes(work, bits);
  std::vector<Cplx> x;
  x.reserve(p + 1);
  for (const auto& z : work) x.push_back(z.round_to(bits));
  // row[j] = Delta_k(h)(x_{j}) over nodes x_0..x_{k-1}
  std::vector<Cplx> row;
  row.reserve(p + 1);
  for (const auto& z : x) row.push_back(h(z).round_to(bits));
  for (int k = 1; k <= p; ++k)
    for (int j = p; j >= k; --j) row[j] = (row[j] - row[k - 1]) / (x[j] - x[k - 1]);
  return row[p];
}

/// Delta_p by the symmetric closed form
/// sum_{q=1}^{p+1} h(theta_q) / prod_{j != q} (theta_q - theta_j).
inline Cplx delta_closed_form(const ScalarOracle& h, const std::vector<Cplx>& nodes,
                              int p, prec_t bits) {
  if (p + 1 > static_cast<int>(nodes.size()))
    throw std::invalid_argument("delta_closed_form: needs p+1 nodes");
  std::vector<Cplx> x(nodes.begin(), nodes.begin() + p + 1);
  check_distinct_nodes(x, bits);
  Cplx sum = Cplx::zero(bits);
  for (int q = 0; q <= p; ++q) {
    Cplx prod = Cplx::one(bits);
    for (int j = 0; j <= p; ++j)
      if (j != q) prod *= (x[q].round_to(bits) - x[j].round_to(bits));
    sum += h(x[q].round_to(bits)) / prod;
  }
  return sum;
}

/// Closed-form engine producing the whole diagonal Delta_0..Delta_P for one
/// node prefix in O(P^2); denominators are shared across kernels.
class DeltaEngine {
 public:
  DeltaEngine(const std::vector<Cplx>& nodes, int P, prec_t bits) : bits_(bits) {
    if (P + 1 > static_cast<int>(nodes.size()))
      throw std::invalid_argument("DeltaEngine: needs P+1 nodes");
    x_.reserve(P + 1);
    for (int s = 0; s <= P; ++s) x_.push_back(nodes[s].round_to(bits));
    check_distinct_nodes(x_, bits);
    // inv_[p][s] = 1 / prod_{j<=p, j!=s} (x_s - x_j)
    inv_.resize(P + 1);
    std::vector<Cplx> prods;
    prods.push_back(Cplx::one(bits));
    inv_[0] = {Cplx::one(bits)};
    for (int p = 1; p <= P; ++p) {
      Cplx fresh = Cplx::one(bits);
      for (int j = 0; j < p; ++j) {
        prods[j] *= (x_[j] - x_[p]);
        fresh *= (x_[p] - x_[j]);
      }
      prods.push_back(fresh);
      inv_[p].reserve(p + 1);
      for (int s = 0; s <= p; ++s) inv_[p].push_back(Cplx::one(bits) / prods[s]);
    }
  }

  prec_t bits() const { return bits_; }
  int P() const { return static_cast<int>(x_.size()) - 1; }
  const std::vector<Cplx>& nodes() const { return x_; }

  /// h given by its values at the nodes.
  Cplx delta(const std::vector<Cplx>& h_values, int p) const {
    Cplx sum = Cplx::zero(bits_);
    for (int s = 0; s <= p; ++s) sum += h_values[s] * inv_[p][s];
    return sum;
  }

  std::vector<Cplx> diagonal(const ScalarOracle& h) const {
    std::vector<Cplx> hv;
    hv.reserve(x_.size());
    for (const auto& z : x_) hv.push_back(h(z).round_to(bits_));
    std::vector<Cplx> out;
    out.reserve(x_.size());
    for (int p = 0; p <= P(); ++p) out.push_back(delta(hv, p));
    return out;
  }

 private:
  prec_t bits_;
  std::vector<Cplx> x_;
  std::vector<std::vector<Cplx>> inv_;
};

/// Triangular table of Delta_p[h](eta_{p+1}) at a dual precision pair, with
/// the recursion cross-checked against the closed form.
struct DeltaTable {
  std::vector<Cplx> nodes;
  std::string h_descriptor;
  prec_t bits_low = kDefaultPrecision;
  prec_t bits_high = 2 * kDefaultPrecision;
  std::vector<Cplx> diag_low;      // closed form at bits_low
  std::vector<Cplx> diag_high;     // closed form at bits_high
  std::vector<Cplx> diag_recursive;  // recursion at bits_low
  Real max_engine_discrepancy{kDefaultPrecision};
  Real max_dual_discrepancy{kDefaultPrecision};
};

inline DeltaTable build_delta_table(const ScalarOracle& h, std::string h_descriptor,
                                    const std::vector<Cplx>& nodes, int P,
                                    prec_t bits = kDefaultPrecision) {
  DeltaTable t;
  t.nodes.assign(nodes.begin(), nodes.begin() + P + 1);
  t.h_descriptor = std::move(h_descriptor);
  t.bits_low = bits;
  t.bits_high = 2 * bits;
  DeltaEngine lo(nodes, P, bits), hi(nodes, P, 2 * bits);
  t.diag_low = lo.diagonal(h);
  t.diag_high = hi.diagonal(h);
  t.diag_recursive.reserve(P + 1);
  Real eng(0.0, bits), dual(0.0, bits);
  for (int p = 0; p <= P; ++p) {
    t.diag_recursive.push_back(delta_recursive(h, nodes, p, bits));
    eng = max(eng, relative_discrepancy(abs(t.diag_recursive[p]), abs(t.diag_low[p])));
    dual = max(dual, relative_discrepancy(abs(t.diag_low[p]), abs(t.diag_high[p])));
  }
  t.max_engine_discrepancy = eng;
  t.max_dual_discrepancy = dual;
  return t;
}

// ---------------------------------------------------------------------------
// Lagrange / Newton interpolant of a scalar oracle
// ---------------------------------------------------------------------------

/// Degree <= N-1 interpolant of h at N nodes, evaluable in Lagrange form
/// L_N(h)(z) = sum_p (prod_{j != p} (z-x_j)/(x_p-x_j)) h(x_p) and in Newton
/// form sum_{p=0}^{N-1} (prod_{j<p} (z-x_j)) Delta_p[h](x_{p+1}).
class LagrangeInterpolant {
 public:
  LagrangeInterpolant(const ScalarOracle& h, const std::vector<Cplx>& nodes,
                      std::size_t N, prec_t bits)
      : bits_(bits), x_(nodes.begin(), nodes.begin() + N) {
    check_distinct_nodes(x_, bits);
    values_.reserve(N);
    for (const auto& z : x_) values_.push_back(h(z).round_to(bits));
    DeltaEngine eng(x_, static_cast<int>(N) - 1, bits);
    newton_ = eng.diagonal(h);
  }

  std::size_t degree_bound() const { return x_.size() - 1; }

  Cplx eval_lagrange(const Cplx& z) const {
    Cplx sum = Cplx::zero(bits_);
    for (std::size_t p = 0; p < x_.size(); ++p) {
      Cplx num = Cplx::one(bits_), den = Cplx::one(bits_);
      for (std::size_t j = 0; j < x_.size(); ++j) {
        if (j == p) continue;
        num *= (z - x_[j]);
        den *= (x_[p] - x_[j]);
      }
      sum += num / den * values_[p];
    }
    return sum;
  }

  Cplx eval_newton(const Cplx& z) const {
    Cplx sum = Cplx::zero(bits_);
    Cplx pref = Cplx::one(bits_);
    for (std::size_t p = 0; p < x_.size(); ++p) {
      sum += pref * newton_[p];
      pref *= (z - x_[p]);
    }
    return sum;
  }

  const std::vector<Cplx>& newton_coefficients() const { return newton_; }

 private:
  prec_t bits_;
  std::vector<Cplx> x_;
  std::vector<Cplx> values_;
  std::vector<Cplx> newton_;
};

// ---------------------------------------------------------------------------
// Criterion matrix |Delta_p[phi^q](eta_{p+1})| and growth-rate fit
// ---------------------------------------------------------------------------

enum class Verdict { kBounded, kGrowing, kInconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kBounded: return "BOUNDED";
    case Verdict::kGrowing: return "GROWING";
    default: return "INCONCLUSIVE";
  }
}

struct CriterionReport {
  int P = 0;
  int Q = 0;
  prec_t precision_bits = kDefaultPrecision;
  std::vector<std::vector<Real>> entries;  // (P+1) x (Q+1), |Delta_p[phi^q]|
  double r_hat = 1.0;
  Verdict verdict = Verdict::kInconclusive;
  double dual_max_discrepancy = 0.0;
  double root_growth_half = 0.0;   // relative growth of the root fit, top half
  double growth_slope = 0.0;       // LS slope of ln(max_q entry) over the top half
  bool stabilized_quarter = false;  // running fit moved < 5% over the last quarter
  std::string provenance;
};

namespace detail {

/// One (P+1)x(Q+1) table of |Delta_p[phi^q]| at a single precision.
/// The q = 0 column is exact: the constant kernel gives 1 then zeros.
inline std::vector<std::vector<Real>> criterion_entries(const std::vector<Cplx>& nodes,
                                                        int P, int Q, prec_t bits) {
  DeltaEngine eng(nodes, P, bits);
  std::vector<std::vector<Real>> m(P + 1);
  for (int p = 0; p <= P; ++p) {
    m[p].reserve(Q + 1);
    m[p].emplace_back(p == 0 ? 1.0 : 0.0, bits);
  }
  std::vector<Cplx> base;
  base.reserve(P + 1);
  for (const auto& z : eng.nodes()) base.push_back(phi_kernel(z, 1));
  std::vector<Cplx> pw(P + 1, Cplx::one(bits));
  for (int q = 1; q <= Q; ++q) {
    for (int s = 0; s <= P; ++s) pw[s] *= base[s];
    for (int p = 0; p <= P; ++p) m[p].push_back(abs(eng.delta(pw, p)));
  }
  return m;
}

/// The criterion holds iff the roots entry^(1/(p+q)) stay bounded: classify
/// by whether the running root fit r_run(p) (clamped to the p+q = 0 baseline
/// of 1) is still growing over the top half of the rows.
inline void fit_verdict(CriterionReport& r) {
  const int P = r.P, Q = r.Q;
  std::vector<double> r_run(P + 1, 1.0);
  double run = 1.0;
  int usable = 0;
  for (int p = 0; p <= P; ++p) {
    for (int q = 0; q <= Q; ++q) {
      if (p + q < 4 || r.entries[p][q].is_zero()) continue;
      ++usable;
      double l2 = log2(r.entries[p][q]).to_double();
      run = std::max(run, std::exp2(l2 / (p + q)));
    }
    r_run[p] = run;
  }
  r.r_hat = run;
  r.root_growth_half = (r_run[P] - r_run[P - P / 2]) / r_run[P];
  r.stabilized_quarter = (r_run[P] - r_run[P - P / 4]) / r_run[P] < 0.05;
  // reported diagnostic: LS slope of ln(max_q entry) vs p over the top half
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int p = (P + 1) / 2; p <= P; ++p) {
    Real rowmax(0.0, r.precision_bits);
    for (int q = 0; q <= Q; ++q) rowmax = max(rowmax, r.entries[p][q]);
    if (rowmax.is_zero()) continue;
    double y = log2(rowmax).to_double() * std::log(2.0);
    sx += p; sy += y; sxx += double(p) * p; sxy += double(p) * y;
    ++cnt;
  }
  if (cnt >= 2) {
    double d = cnt * sxx - sx * sx;
    if (d != 0.0) r.growth_slope = (cnt * sxy - sx * sy) / d;
  }
  if (P < 8 || usable < 3)
    r.verdict = Verdict::kInconclusive;
  else
    r.verdict = r.root_growth_half > 0.25 ? Verdict::kGrowing : Verdict::kBounded;
}

}  // namespace detail

/// Dual-precision criterion matrix driving the growth verdict.
/// Disagreement beyond 2^-64 escalates the precision pair up to 8x the
/// requested width before PrecisionFailure.
inline CriterionReport criterion_matrix(const DirectionSequence& seq, int P, int Q,
                                        prec_t bits = kDefaultPrecision) {
  if (static_cast<std::size_t>(P + 1) > seq.size())
    throw std::invalid_argument("criterion_matrix: sequence shorter than P+1");
  Real tol = Real::pow2(-64, 64);
  for (int attempt = 0; attempt < 3; ++attempt) {
    prec_t lo = bits << attempt;
    auto el = detail::criterion_entries(seq.pts, P, Q, lo);
    auto eh = detail::criterion_entries(seq.pts, P, Q, 2 * lo);
    Real disc(0.0, lo);
    for (int p = 0; p <= P; ++p)
      for (int q = 1; q <= Q; ++q)
        disc = max(disc, relative_discrepancy(el[p][q], eh[p][q]));
    if (disc <= tol || attempt == 2) {
      if (disc > tol)
        throw PrecisionFailureError(
            "criterion entries disagree at maximum precision (" +
            std::to_string(4 * bits) + "/" + std::to_string(8 * bits) +
            " bits): max relative discrepancy " + disc.str());
      CriterionReport r;
      r.P = P;
      r.Q = Q;
      r.precision_bits = lo;
      r.entries = std::move(el);
      r.dual_max_discrepancy = disc.to_double();
      r.provenance = seq.provenance;
      detail::fit_verdict(r);
      return r;
    }
  }
  throw PrecisionFailureError("unreachable");
}

}  // namespace holorecon
