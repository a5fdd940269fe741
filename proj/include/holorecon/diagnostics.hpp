#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "holorecon/divided.hpp"
#include "holorecon/netplan.hpp"
#include "holorecon/sequence.hpp"

namespace holorecon {

/// Outcome of one quantitative bound check; constants are fitted, not
/// assumed (the proofs' constants are wildly non-tight).
struct BoundCheckReport {
  std::string name;
  long range_lo = 0;
  long range_hi = 0;
  double observed_min = 0.0;
  double observed_max = 0.0;
  double fitted_constant = 0.0;
  bool pass = false;
  double margin = 0.0;
  std::map<std::string, double> details;
};

/// Node products of the square-net family against exp(-16 p): reports the
/// empirical threshold p_eta from which the bound holds through p_max.
inline BoundCheckReport check_product_lower_bound(const DirectionSequence& seq,
                                                  int p_max,
                                                  prec_t bits = kDefaultPrecision) {
  if (static_cast<std::size_t>(p_max + 1) > seq.size())
    throw std::invalid_argument("check_product_lower_bound: sequence shorter than p_max+1");
  BoundCheckReport rep;
  rep.name = "square-net product lower bound exp(-16p)";
  rep.range_lo = 2;
  rep.range_hi = p_max;
  // log2 of min_q prod_{j<=p+1, j!=q} |eta_q - eta_j|, built incrementally
  std::vector<Real> log_prod;  // per q (0-based), log2 of the product
  log_prod.emplace_back(0.0, bits);
  std::vector<double> min_log(p_max + 1, 0.0);
  for (int p = 1; p <= p_max; ++p) {
    Real fresh(0.0, bits);
    for (int j = 0; j < p; ++j) {
      Real g = log2(distance(seq.pts[j], seq.pts[p]));
      log_prod[j] += g;
      fresh += g;
    }
    log_prod.emplace_back(fresh);
    Real m = log_prod[0];
    for (int q = 1; q <= p; ++q) m = min(m, log_prod[q]);
    min_log[p] = m.to_double();
  }
  const double ln2 = std::log(2.0);
  int p_eta = -1;
  for (int p = 2; p <= p_max; ++p) {
    bool all_ok = true;
    for (int pp = p; pp <= p_max && all_ok; ++pp)
      all_ok = min_log[pp] * ln2 >= -16.0 * pp;
    if (all_ok) {
      p_eta = p;
      break;
    }
  }
  rep.pass = p_eta >= 0;
  rep.details["p_eta"] = p_eta;
  double worst = 1e300;
  double omin = 1e300, omax = -1e300;
  for (int p = std::max(2, p_eta); p <= p_max; ++p) {
    double lnp = min_log[p] * ln2;
    worst = std::min(worst, lnp + 16.0 * p);
    omin = std::min(omin, lnp);
    omax = std::max(omax, lnp);
  }
  rep.margin = worst;  // min over p of ln(minprod) - (-16p)
  rep.observed_min = omin;
  rep.observed_max = omax;
  rep.fitted_constant = 16.0;
  return rep;
}

/// Fits the smallest B, D making the sigma_c product bounds
/// prod >= 1/(3B)^N and (for eta_p in C_r, r >= 3) prod >= r^N/(BD)^N hold,
/// then asserts the fits are stable across the N range.
inline BoundCheckReport check_annulus_products(const DirectionSequence& seq,
                                               const std::vector<int>& N_list,
                                               prec_t bits = kDefaultPrecision) {
  BoundCheckReport rep;
  rep.name = "sigma_c annulus product bounds";
  if (N_list.empty()) throw std::invalid_argument("N_list empty");
  int N_max = *std::max_element(N_list.begin(), N_list.end());
  if (static_cast<std::size_t>(N_max) > seq.size())
    throw std::invalid_argument("sequence shorter than max N");
  rep.range_lo = *std::min_element(N_list.begin(), N_list.end());
  rep.range_hi = N_max;
  const double ln2 = std::log(2.0);
  std::vector<Real> log_prod;  // per p, log2 prod_{j<=N, j!=p}
  std::vector<double> b_fits, d_fits;
  double omin = 1e300, omax = -1e300;
  std::size_t half = (N_list.size() + 1) / 2;
  double b_half = 0.0, d_half = 0.0;
  int n_done = 0;
  for (std::size_t li = 0; li < N_list.size(); ++li) {
    int N = N_list[li];
    while (n_done < N) {
      Real fresh(0.0, bits);
      for (int j = 0; j < n_done; ++j) {
        Real g = log2(distance(seq.pts[j], seq.pts[n_done]));
        log_prod[j] += g;
        fresh += g;
      }
      log_prod.emplace_back(fresh);
      ++n_done;
    }
    double bN = 0.0, dN = 0.0;
    for (int p = 0; p < N; ++p) {
      double lp = log_prod[p].to_double() * ln2;  // ln prod
      omin = std::min(omin, lp);
      omax = std::max(omax, lp);
      // 1/(3B)^N <= prod  =>  B >= exp(-lp/N)/3
      bN = std::max(bN, std::exp(-lp / N) / 3.0);
      int r = annulus_of(seq.pts[p].re().to_double(), seq.pts[p].im().to_double());
      if (r >= 3) dN = std::max(dN, r * std::exp(-lp / N));
    }
    b_fits.push_back(bN);
    d_fits.push_back(dN);
    if (li + 1 == half) {
      b_half = *std::max_element(b_fits.begin(), b_fits.end());
      d_half = *std::max_element(d_fits.begin(), d_fits.end());
    }
  }
  double b_hat = *std::max_element(b_fits.begin(), b_fits.end());
  double d_hat = *std::max_element(d_fits.begin(), d_fits.end());
  rep.details["B_hat"] = b_hat;
  rep.details["D_hat"] = d_hat;
  rep.details["B_hat_half"] = b_half;
  rep.details["D_hat_half"] = d_half;
  rep.observed_min = omin;
  rep.observed_max = omax;
  rep.fitted_constant = b_hat;
  // stable: enlarging the range moved the fits by < 10%
  bool stable = b_hat <= 1.10 * std::max(b_half, 1e-12) &&
                (d_hat == 0.0 || d_hat <= 1.10 * std::max(d_half, 1e-12));
  // the fitted envelopes hold by construction; require B >= 1/3-scale sanity
  rep.pass = stable && b_hat > 0.0;
  rep.margin = stable ? 0.10 - (b_hat / std::max(b_half, 1e-12) - 1.0) : 0.0;
  rep.details["stable"] = stable ? 1.0 : 0.0;
  return rep;
}

/// Per-annulus counts of a sigma_c numeration vs N/2^r, the exactness of the
/// interleaving invariant at every prefix, and r_N vs log2 N.
inline BoundCheckReport check_net_statistics(const DirectionSequence& seq,
                                             const std::vector<int>& N_list,
                                             double tolerance = 0.25) {
  BoundCheckReport rep;
  rep.name = "sigma_c annulus counts ~ N/2^r";
  if (N_list.empty()) throw std::invalid_argument("N_list empty");
  int N_max = *std::max_element(N_list.begin(), N_list.end());
  if (static_cast<std::size_t>(N_max) > seq.size())
    throw std::invalid_argument("sequence shorter than max N");
  rep.range_lo = *std::min_element(N_list.begin(), N_list.end());
  rep.range_hi = N_max;
  std::vector<long> counts;
  bool induc_ok = true;
  double worst_dev = 0.0, worst_rN = 0.0;
  std::size_t checkpoint = 0;
  for (int N = 1; N <= N_max; ++N) {
    int r = annulus_of(seq.pts[N - 1].re().to_double(), seq.pts[N - 1].im().to_double());
    if (static_cast<int>(counts.size()) < r) counts.resize(r, 0);
    ++counts[r - 1];
    for (std::size_t s = 0; s + 1 < counts.size(); ++s) {
      long cr = counts[s], cn = counts[s + 1];
      if (cr == 0 && cn == 0) continue;
      if (!(2 * cn <= cr && cr <= 2 * cn + 2)) induc_ok = false;
    }
    if (checkpoint < N_list.size() && N == N_list[checkpoint]) {
      ++checkpoint;
      if (N < 32) continue;  // the ~ N/2^r relation is asymptotic
      int r_N = static_cast<int>(counts.size());
      while (r_N > 0 && counts[r_N - 1] == 0) --r_N;
      worst_rN = std::max(worst_rN, std::fabs(r_N - std::log2(double(N))));
      int r_lim = std::min<int>(5, static_cast<int>(counts.size()));
      for (int rr = 1; rr <= r_lim; ++rr) {
        double expect = double(N) / std::exp2(rr);
        if (expect < 1.0) continue;
        worst_dev = std::max(worst_dev, std::fabs(counts[rr - 1] - expect) / expect);
      }
    }
  }
  rep.details["worst_count_deviation"] = worst_dev;
  rep.details["worst_rN_offset"] = worst_rN;
  rep.details["induc1_exact"] = induc_ok ? 1.0 : 0.0;
  rep.observed_max = worst_dev;
  rep.fitted_constant = tolerance;
  rep.pass = induc_ok && worst_dev <= tolerance && worst_rN <= 2.0;
  rep.margin = tolerance - worst_dev;
  return rep;
}

struct HomographyCriterion {
  std::vector<std::pair<std::string, CriterionReport>> reports;
  Verdict combined = Verdict::kInconclusive;
};

/// The criterion matrix on h_u(seq) for each u, plus the two distinguished
/// maps h_0 = id and h_inf = 1/zeta of the dense-case criterion.
inline HomographyCriterion criterion_under_homography(const DirectionSequence& seq,
                                                      const std::vector<Cplx>& u_list,
                                                      int P, int Q,
                                                      prec_t bits = kDefaultPrecision,
                                                      double delta = 1e-6) {
  HomographyCriterion out;
  out.reports.emplace_back("h0(identity)", criterion_matrix(seq, P, Q, bits));
  for (const auto& u : u_list) {
    DirectionSequence t = homography(seq, u, delta);
    out.reports.emplace_back("h_u(u=" + u.str() + ")", criterion_matrix(t, P, Q, bits));
  }
  bool all_nonzero = true;
  for (const auto& z : seq.pts)
    if (abs(z) < Real(delta, bits)) all_nonzero = false;
  if (all_nonzero) {
    DirectionSequence t = reciprocal(seq, delta);
    out.reports.emplace_back("h_inf(1/zeta)", criterion_matrix(t, P, Q, bits));
  }
  bool any_growing = false, any_inconclusive = false;
  for (const auto& [name, rep] : out.reports) {
    any_growing |= rep.verdict == Verdict::kGrowing;
    any_inconclusive |= rep.verdict == Verdict::kInconclusive;
  }
  out.combined = any_growing ? Verdict::kGrowing
                             : (any_inconclusive ? Verdict::kInconclusive : Verdict::kBounded);
  return out;
}

// ---------------------------------------------------------------------------
// Integral anchors behind the Riemann-sum steps of the product bounds
// ---------------------------------------------------------------------------

/// Composite Simpson on dyadic panels [2^-(j+1), 2^-j]; the integrand is
/// continuous at 0 but has unbounded derivatives, so panels shrink
/// geometrically toward the endpoint.
template <typename F>
Real integrate_dyadic_simpson(const F& f, prec_t bits, int panels = 50,
                              int subdiv = 1024) {
  Real total(0.0, bits);
  for (int j = 0; j < panels; ++j) {
    Real hi = Real::pow2(-j, bits), lo = Real::pow2(-(j + 1), bits);
    Real h = (hi - lo) / Real(static_cast<long>(2 * subdiv), bits);
    Real s = f(lo) + f(hi);
    for (int i = 1; i < 2 * subdiv; ++i) {
      Real x = lo + Real(static_cast<long>(i), bits) * h;
      s += f(x) * Real(i % 2 ? 4.0 : 2.0, bits);
    }
    total += s * h / Real(3.0, bits);
  }
  return total;  // the [0, 2^-panels] remainder is below any tolerance used here
}

/// Left Riemann sum of f over [0,1] at 2^r points.
template <typename F>
Real riemann_sum_dyadic(const F& f, int r, prec_t bits) {
  long n = 1L << r;
  Real s(0.0, bits);
  Real inv_n = Real(1.0, bits) / Real(n, bits);
  for (long k = 1; k <= n; ++k) s += f(Real(k, bits) * inv_n);
  return s * inv_n;
}

struct IntegralAnchors {
  Real t_ln_t{kDefaultPrecision};        // expect -1/4
  Real t_ln_t_over_3{kDefaultPrecision};  // expect -(1/4 + ln(3)/2)
  double err_t_ln_t = 0.0;
  double err_t_ln_t_over_3 = 0.0;
  bool pass = false;
};

inline IntegralAnchors riemann_constant_check(prec_t bits = kDefaultPrecision,
                                              double tolerance = 1e-12) {
  IntegralAnchors a;
  auto f1 = [bits](const Real& t) { return t * log(t); };
  Real three(3.0, bits);
  auto f2 = [&](const Real& t) { return t * log(t / three); };
  a.t_ln_t = integrate_dyadic_simpson(f1, bits);
  a.t_ln_t_over_3 = integrate_dyadic_simpson(f2, bits);
  Real expect1(-0.25, bits);
  Real expect2 = Real(-0.25, bits) - log(three) / Real(2.0, bits);
  a.err_t_ln_t = abs(a.t_ln_t - expect1).to_double();
  a.err_t_ln_t_over_3 = abs(a.t_ln_t_over_3 - expect2).to_double();
  a.pass = a.err_t_ln_t <= tolerance && a.err_t_ln_t_over_3 <= tolerance;
  return a;
}

}  // namespace holorecon
