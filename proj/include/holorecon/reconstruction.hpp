#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holorecon/divided.hpp"
#include "holorecon/sequence.hpp"
#include "holorecon/taylor.hpp"

namespace holorecon {

/// Axis-aligned polydisc |z1| <= r1, |z2| <= r2 sampled per coordinate on
/// the boundary circle (n_angles points) plus the center.
struct CompactGrid {
  double r1 = 0.5;
  double r2 = 0.5;
  int n_angles = 9;

  std::vector<std::pair<Cplx, Cplx>> points(prec_t bits) const {
    std::vector<Cplx> c1 = circle(r1, bits), c2 = circle(r2, bits);
    std::vector<std::pair<Cplx, Cplx>> out;
    out.reserve(c1.size() * c2.size());
    for (const auto& a : c1)
      for (const auto& b : c2) out.emplace_back(a, b);
    return out;
  }

 private:
  std::vector<Cplx> circle(double radius, prec_t bits) const {
    std::vector<Cplx> v;
    v.emplace_back(Cplx::zero(bits));
    Real r(radius, bits);
    Real two_pi = Real(2.0, bits) * Real::pi(bits);
    for (int k = 0; k < n_angles; ++k) {
      Real t = two_pi * Real(static_cast<long>(k), bits) / Real(static_cast<long>(n_angles), bits);
      v.emplace_back(r * cos(t), r * sin(t));
    }
    return v;
  }
};

struct ReconstructionRequest {
  const BivariateTaylor* f = nullptr;
  const DirectionSequence* seq = nullptr;
  int N = 1;
  std::vector<std::pair<Cplx, Cplx>> eval_points;
  int M = 40;  // inner-series truncation degree, M >= N
  prec_t bits = kDefaultPrecision;
};

struct ReconstructionResult {
  std::vector<Cplx> E_values;
  std::vector<Cplx> R_values;
  std::vector<Cplx> tail_values;
  std::vector<Cplx> f_values;  // truncation of f at M, the identity's left side
  Real identity_residual{kDefaultPrecision};
  Real truncation_estimate{kDefaultPrecision};  // coarse bound on the dropped m > M terms
};

namespace detail {

/// Shared z-independent state: line sums L[q][m], suffix denominator
/// products of E_N, leave-one-out denominators of R_N.
class InterpolationPlan {
 public:
  InterpolationPlan(const ReconstructionRequest& req)
      : N_(req.N), M_(req.M), bits_(req.bits), table_(*req.f, req.M, req.bits) {
    if (req.N < 1) throw std::invalid_argument("N >= 1 required");
    if (req.M < req.N) throw std::invalid_argument("M >= N required");
    if (static_cast<std::size_t>(req.N) > req.seq->size())
      throw IndexOverflowError("sequence shorter than N");
    nodes_.reserve(N_);
    for (int j = 0; j < N_; ++j) nodes_.push_back(req.seq->pts[j].round_to(bits_));
    check_distinct_nodes(nodes_, bits_);

    L_.resize(N_);
    for (int q = 0; q < N_; ++q) {
      L_[q].reserve(M_ + 1);
      for (int m = 0; m <= M_; ++m) L_[q].push_back(table_.line_sum(nodes_[q], m));
    }
    // conj(eta_q) and 1/(1+|eta_q|^2)
    for (int q = 0; q < N_; ++q) {
      conj_.push_back(conj(nodes_[q]));
      inv1n_.push_back(Real(1.0, bits_) / (Real(1.0, bits_) + norm2(nodes_[q])));
    }
    // E_N: inv_denom_[p][q-p] = 1 / prod_{j=p..N-1, j!=q} (x_q - x_j), 0-based
    // window [p, N-1]; c_[p][q-p] = (1 + x_p conj(x_q)) / (1+|x_q|^2).
    inv_denom_.resize(N_);
    c_.resize(N_);
    std::vector<Cplx> denom(N_, Cplx::one(bits_));
    for (int p = N_ - 1; p >= 0; --p) {
      // extend window with node p: denom[q] *= (x_q - x_p) for q > p
      Cplx fresh = Cplx::one(bits_);
      for (int q = p + 1; q < N_; ++q) {
        denom[q] *= (nodes_[q] - nodes_[p]);
        fresh *= (nodes_[p] - nodes_[q]);
      }
      denom[p] = fresh;
      inv_denom_[p].reserve(N_ - p);
      c_[p].reserve(N_ - p);
      for (int q = p; q < N_; ++q) {
        inv_denom_[p].push_back(Cplx::one(bits_) / denom[q]);
        c_[p].push_back((Cplx::one(bits_) + nodes_[p] * conj_[q]) * inv1n_[q]);
      }
    }
    // R_N: 1 / prod_{j != p} (x_p - x_j) over the full window
    for (int p = 0; p < N_; ++p) {
      Cplx d = Cplx::one(bits_);
      for (int j = 0; j < N_; ++j)
        if (j != p) d *= (nodes_[p] - nodes_[j]);
      inv_rden_.push_back(Cplx::one(bits_) / d);
    }
  }

  const CoeffTable& table() const { return table_; }
  prec_t bits() const { return bits_; }
  int N() const { return N_; }
  int M() const { return M_; }

  /// w_q = (z2 + conj(eta_q) z1) / (1 + |eta_q|^2)
  std::vector<Cplx> line_params(const Cplx& z1, const Cplx& z2) const {
    std::vector<Cplx> w;
    w.reserve(N_);
    for (int q = 0; q < N_; ++q) w.push_back((z2 + conj_[q] * z1) * inv1n_[q]);
    return w;
  }

  /// E_N(f)(z) by q-inner sums first, then p-products.
  Cplx eval_EN(const Cplx& z1, const Cplx& z2) const {
    std::vector<Cplx> w = line_params(z1, z2);
    // S[q] holds S_q(p) = sum_{m=N-p}^{M} w_q^{m-N+p} L_q(m), built up in p
    std::vector<Cplx> S(N_, Cplx::zero(bits_));
    for (int q = 0; q < N_; ++q) {
      Cplx acc = Cplx::zero(bits_);
      for (int m = M_; m >= N_; --m) acc = acc * w[q] + L_[q][m];  // S_q(0)
      S[q] = acc;
    }
    Cplx pre = Cplx::one(bits_);  // prod_{j=p+1..N-1} (z1 - x_j z2), built downward
    std::vector<Cplx> pres(N_, Cplx::one(bits_));
    for (int p = N_ - 2; p >= 0; --p) pres[p] = pres[p + 1] * (z1 - nodes_[p + 1] * z2);
    Cplx total = Cplx::zero(bits_);
    for (int p = 1; p <= N_; ++p) {  // 1-based p of the formula
      for (int q = p - 1; q < N_; ++q) S[q] = S[q] * w[q] + L_[q][N_ - p];
      Cplx inner = Cplx::zero(bits_);
      for (int q = p - 1; q < N_; ++q)
        inner += c_[p - 1][q - (p - 1)] * inv_denom_[p - 1][q - (p - 1)] * S[q];
      total += pres[p - 1] * inner;
    }
    return total;
  }

  /// R_N(f)(z): leave-one-out numerator products via prefix/suffix arrays.
  Cplx eval_RN(const Cplx& z1, const Cplx& z2) const {
    std::vector<Cplx> w = line_params(z1, z2);
    std::vector<Cplx> factors(N_, Cplx::zero(bits_));
    for (int j = 0; j < N_; ++j) factors[j] = z1 - nodes_[j] * z2;
    std::vector<Cplx> pref(N_ + 1, Cplx::one(bits_)), suf(N_ + 1, Cplx::one(bits_));
    for (int j = 0; j < N_; ++j) pref[j + 1] = pref[j] * factors[j];
    for (int j = N_ - 1; j >= 0; --j) suf[j] = suf[j + 1] * factors[j];
    Cplx total = Cplx::zero(bits_);
    for (int p = 0; p < N_; ++p) {
      Cplx inner = Cplx::zero(bits_);
      for (int m = M_; m >= N_; --m) inner = inner * w[p] + L_[p][m];
      inner *= w[p];  // exponent k+l-N+1 starts at 1
      total += pref[p] * suf[p + 1] * inv_rden_[p] * inner;
    }
    return total;
  }

  /// Homogeneous layers sum_{k+l=m} a_{k,l} z1^k z2^l for m = 0..M.
  std::vector<Cplx> hom_layers(const Cplx& z1, const Cplx& z2) const {
    std::vector<Cplx> p1(M_ + 1, Cplx::one(bits_)), p2(M_ + 1, Cplx::one(bits_));
    for (int k = 1; k <= M_; ++k) {
      p1[k] = p1[k - 1] * z1;
      p2[k] = p2[k - 1] * z2;
    }
    std::vector<Cplx> hom;
    hom.reserve(M_ + 1);
    for (int m = 0; m <= M_; ++m) {
      Cplx s = Cplx::zero(bits_);
      for (int k = 0; k <= m; ++k) s += table_.at(k, m - k) * p1[k] * p2[m - k];
      hom.push_back(s);
    }
    return hom;
  }

  const std::vector<Cplx>& nodes() const { return nodes_; }

 private:
  int N_, M_;
  prec_t bits_;
  CoeffTable table_;
  std::vector<Cplx> nodes_, conj_;
  std::vector<Real> inv1n_;
  std::vector<std::vector<Cplx>> L_;
  std::vector<std::vector<Cplx>> inv_denom_, c_;
  std::vector<Cplx> inv_rden_;
};

}  // namespace detail

struct TailResult {
  Cplx value{kDefaultPrecision};
  Real bound_beyond_M{kDefaultPrecision};  // tail_bound(max|z|, M+1)
};

/// Partial sum N <= k+l <= M of the Taylor tail at one point.
inline Cplx eval_tail(const BivariateTaylor& f, int N, const Cplx& z1, const Cplx& z2,
                      int M, prec_t bits = kDefaultPrecision) {
  if (M < N) return Cplx::zero(bits);
  CoeffTable t(f, M, bits);
  std::vector<Cplx> p1(M + 1, Cplx::one(bits)), p2(M + 1, Cplx::one(bits));
  for (int k = 1; k <= M; ++k) {
    p1[k] = p1[k - 1] * z1;
    p2[k] = p2[k - 1] * z2;
  }
  Cplx s = Cplx::zero(bits);
  for (int m = N; m <= M; ++m)
    for (int k = 0; k <= m; ++k) s += t.at(k, m - k) * p1[k] * p2[m - k];
  return s;
}

inline TailResult eval_tail_with_bound(const BivariateTaylor& f, int N, const Cplx& z1,
                                       const Cplx& z2, int M,
                                       prec_t bits = kDefaultPrecision) {
  TailResult r;
  r.value = eval_tail(f, N, z1, z2, M, bits);
  r.bound_beyond_M = f.tail_bound(max(abs(z1), abs(z2)), M + 1);
  return r;
}

inline std::vector<Cplx> eval_EN(const ReconstructionRequest& req) {
  detail::InterpolationPlan plan(req);
  std::vector<Cplx> out;
  out.reserve(req.eval_points.size());
  for (const auto& [z1, z2] : req.eval_points) out.push_back(plan.eval_EN(z1, z2));
  return out;
}

inline std::vector<Cplx> eval_RN(const ReconstructionRequest& req) {
  detail::InterpolationPlan plan(req);
  std::vector<Cplx> out;
  out.reserve(req.eval_points.size());
  for (const auto& [z1, z2] : req.eval_points) out.push_back(plan.eval_RN(z1, z2));
  return out;
}

/// All four identity members at once, sharing one plan.
inline ReconstructionResult reconstruct(const ReconstructionRequest& req) {
  detail::InterpolationPlan plan(req);
  ReconstructionResult res;
  res.identity_residual = Real(0.0, req.bits);
  Real z_top(0.0, req.bits);
  for (const auto& [z1, z2] : req.eval_points) {
    auto hom = plan.hom_layers(z1, z2);
    Cplx tail = Cplx::zero(req.bits);
    for (int m = req.N; m <= req.M; ++m) tail += hom[m];
    Cplx fz = tail;
    for (int m = 0; m < req.N; ++m) fz += hom[m];
    Cplx E = plan.eval_EN(z1, z2);
    Cplx R = plan.eval_RN(z1, z2);
    res.E_values.push_back(E);
    res.R_values.push_back(R);
    res.tail_values.push_back(tail);
    res.f_values.push_back(fz);
    res.identity_residual = max(res.identity_residual, abs(fz - (E - R + tail)));
    z_top = max(z_top, max(abs(z1), abs(z2)));
  }
  res.truncation_estimate = req.f->tail_bound(z_top, req.M + 1);
  return res;
}

struct IdentityReport {
  Real residual{kDefaultPrecision};
  Real budget{kDefaultPrecision};
  prec_t bits_used = kDefaultPrecision;
  bool retried = false;
};

/// Max residual |f - (E_N - R_N + tail)| over the eval points; a residual
/// above budget is retried at twice the precision and only then raised as
/// IdentityViolation (an implementation-bug signal, not a math verdict).
inline IdentityReport verify_identity(ReconstructionRequest req,
                                      double budget = 1e-20) {
  IdentityReport rep;
  rep.budget = Real(budget, req.bits);
  ReconstructionResult r = reconstruct(req);
  rep.residual = r.identity_residual;
  rep.bits_used = req.bits;
  if (r.identity_residual <= rep.budget) return rep;
  rep.retried = true;
  req.bits *= 2;
  ReconstructionResult r2 = reconstruct(req);
  rep.residual = r2.identity_residual;
  rep.bits_used = req.bits;
  if (r2.identity_residual <= rep.budget) return rep;
  throw IdentityViolationError("identity residual " + r2.identity_residual.str() +
                               " above budget " + rep.budget.str() + " at " +
                               std::to_string(req.bits) + " bits (N=" +
                               std::to_string(req.N) + ", f=" + req.f->name + ")");
}

struct CurvePoint {
  int N = 0;
  int M = 0;
  double sup_error = 0.0;
  double mean_error = 0.0;
  long wall_ms = 0;
};

/// sup over the grid of |E_N(f) - f| for each N; the uniform-convergence
/// experiment behind the diverging/converging classifications.
inline std::vector<CurvePoint> convergence_experiment(
    const BivariateTaylor& f, const DirectionSequence& seq, const std::vector<int>& N_list,
    const CompactGrid& K, std::optional<int> M_opt = std::nullopt,
    prec_t bits = kDefaultPrecision, bool timing = true) {
  auto pts = K.points(bits);
  std::vector<CurvePoint> curve;
  curve.reserve(N_list.size());
  for (int N : N_list) {
    auto t0 = std::chrono::steady_clock::now();
    ReconstructionRequest req;
    req.f = &f;
    req.seq = &seq;
    req.N = N;
    req.M = M_opt ? std::max(*M_opt, N) : std::max(2 * N, 40);
    req.bits = bits;
    req.eval_points = pts;
    detail::InterpolationPlan plan(req);
    CoeffTable ref(f, req.M, bits);
    Real sup(0.0, bits), sum(0.0, bits);
    for (const auto& [z1, z2] : pts) {
      Real err = abs(plan.eval_EN(z1, z2) - eval_taylor(ref, z1, z2));
      sup = max(sup, err);
      sum += err;
    }
    CurvePoint cp;
    cp.N = N;
    cp.M = req.M;
    cp.sup_error = sup.to_double();
    cp.mean_error = (sum / Real(static_cast<long>(pts.size()), bits)).to_double();
    if (timing)
      cp.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    curve.push_back(cp);
  }
  return curve;
}

/// Desk-scale divergence call on an error curve: the final sup stays above
/// half the initial one, or some intermediate blows past 10x the initial.
inline bool fails_to_decrease(const std::vector<CurvePoint>& curve) {
  if (curve.size() < 2) return false;
  double first = curve.front().sup_error;
  double last = curve.back().sup_error;
  if (last > 0.5 * first) return true;
  for (const auto& cp : curve)
    if (cp.sup_error > 10.0 * first) return true;
  return false;
}

}  // namespace holorecon
