// Experiment CLI: direction-sequence generators, the convergence criterion,
// reconstruction error curves, permutation constructions, and bound checks.
//
// Exit codes: 0 success (mathematical verdicts are data, not failures),
// 2 invalid configuration, 3 precision failure, 4 identity violation,
// 1 anything else.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holorecon/diagnostics.hpp"
#include "holorecon/divided.hpp"
#include "holorecon/io.hpp"
#include "holorecon/netplan.hpp"
#include "holorecon/permutation.hpp"
#include "holorecon/reconstruction.hpp"
#include "holorecon/sequence.hpp"
#include "holorecon/taylor.hpp"
#include "holorecon/version.hpp"

using namespace holorecon;

namespace {

DirectionSequence make_family(const std::string& family, std::size_t count, prec_t bits) {
  if (family == "theta") return gen_theta(count, bits);
  if (family == "kappa") return gen_kappa(count, bits);
  if (family == "square-net") return gen_square_net(count, bits);
  if (family == "interleave-theta-kappa") {
    auto s = interleave(gen_theta(count, bits), gen_kappa(count, bits));
    s.pts.resize(std::min(s.pts.size(), count));
    return s;
  }
  if (family == "dense-raw") {
    DyadicDiagonalSource src;
    if (!src.ensure(count)) throw ConfigError("dense-raw: count too large");
    DirectionSequence s;
    s.provenance = src.provenance();
    for (std::size_t i = 0; i < count; ++i) s.pts.push_back(src.pt_exact(i, bits));
    return s;
  }
  if (family == "dense-sigma-c") {
    DyadicDiagonalSource src;
    auto res = build_sigma_c(src, count);
    return materialize_sigma_c(src, res, bits);
  }
  throw ConfigError("unknown family '" + family + "'");
}

DirectionSequence obtain_sequence(const std::string& in_file, const std::string& family,
                                  std::size_t count, prec_t bits) {
  if (!in_file.empty()) {
    auto s = load_sequence(in_file);
    if (count > 0 && count < s.size()) s.pts.resize(count);
    return s;
  }
  if (family.empty()) throw ConfigError("need --in or --family");
  return make_family(family, count, bits);
}

BivariateTaylor make_function(const std::string& spec, long fa, long fb, int degree,
                              std::uint64_t seed) {
  if (spec == "exp-sum") return exp_sum(fa, fb);
  if (spec == "exp-prod") return exp_prod(fa);
  if (spec == "monomial") return monomial(static_cast<int>(fa), static_cast<int>(fb));
  if (spec == "random-poly") return random_polynomial(degree, seed);
  if (spec == "poly-demo") return builtin_catalog()[1];
  throw ConfigError("unknown function '" + spec + "'");
}

Cplx parse_point(const std::string& s, prec_t bits) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("point must be 're,im': " + s);
  return Cplx(Real::from_string(s.substr(0, comma), bits),
              Real::from_string(s.substr(comma + 1), bits));
}

void print_summary(const DirectionSequence& seq) {
  double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    double x = seq.pts[i].re().to_double(), y = seq.pts[i].im().to_double();
    if (i == 0) {
      re_lo = re_hi = x;
      im_lo = im_hi = y;
    }
    re_lo = std::min(re_lo, x); re_hi = std::max(re_hi, x);
    im_lo = std::min(im_lo, y); im_hi = std::max(im_hi, y);
  }
  std::printf("count %zu  min-gap %.6g  box [%.4g,%.4g]x[%.4g,%.4g]\n", seq.size(),
              seq.size() > 1 ? seq.min_gap().to_double() : 0.0, re_lo, re_hi, im_lo, im_hi);
}

/// --config FILE: JSON {"flag": value, ...} applied as defaults; explicit
/// flags override (injected config args come first, TakeLast wins).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string cfg_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      cfg_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      cfg_path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (cfg_path.empty()) return args;
  std::ifstream in(cfg_path);
  if (!in) throw ConfigError("cannot open config " + cfg_path);
  json cfg = json::parse(in);
  std::vector<std::string> merged;
  if (cfg.contains("command")) {
    std::string cmd = cfg["command"].get<std::string>();
    if (args.empty() || args[0].rfind("--", 0) == 0)
      merged.push_back(cmd);
  }
  for (auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back("--" + key);
      continue;
    }
    if (value.is_array()) {
      std::string joined;
      for (auto& v : value)
        joined += (joined.empty() ? "" : ",") +
                  (v.is_string() ? v.get<std::string>() : v.dump());
      merged.push_back("--" + key + "=" + joined);
      continue;
    }
    merged.push_back("--" + key + "=" +
                     (value.is_string() ? value.get<std::string>() : value.dump()));
  }
  merged.insert(merged.end(), args.begin(), args.end());
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holorecon: reconstruction of entire functions on C^2 from complex lines"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  prec_t bits = kDefaultPrecision;
  std::string in_file, family, out_file;
  std::size_t count = 64;
  bool no_timing = false;

  auto add_common = [&](CLI::App* sub, bool wants_family) {
    sub->add_option("--precision-bits", bits, "working mantissa bits (>= 64)")
        ->envname("HOLORECON_PRECISION_BITS");
    sub->add_option("--out", out_file, "output file");
    if (wants_family) {
      sub->add_option("--in", in_file, "input sequence file (JSON lines)");
      sub->add_option("--family", family,
                      "theta|kappa|square-net|interleave-theta-kappa|dense-raw|dense-sigma-c");
      sub->add_option("--count", count, "points to materialize");
    }
  };

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a direction sequence");
  add_common(gen, true);

  // ---- criterion ----
  auto* crit = app.add_subcommand("criterion", "criterion matrix and growth verdict");
  int P = 40, Q = 8;
  std::vector<std::string> homography_u;
  bool show_table = false;
  add_common(crit, true);
  crit->add_option("--p", P, "max divided-difference order");
  crit->add_option("--q", Q, "max kernel power");
  crit->add_option("--homography-u", homography_u,
                   "re,im of homography poles; adds identity and 1/zeta maps")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  crit->add_flag("--table", show_table, "print the matrix as a table");

  // ---- reconstruct ----
  auto* rec = app.add_subcommand("reconstruct", "error curves for E_N against f");
  std::string function_spec = "exp-sum";
  long fa = 1, fb = 1;
  int degree = 4;
  std::uint64_t seed = 1;
  std::vector<int> n_list{2, 4, 8, 16, 24};
  int M_trunc = 0;
  double k_radius = 0.5, k_radius2 = 0.0;
  int grid_angles = 9;
  double identity_budget = 1e-20;
  add_common(rec, true);
  rec->add_option("--function", function_spec, "exp-sum|exp-prod|monomial|random-poly|poly-demo");
  rec->add_option("--fa", fa, "function parameter a");
  rec->add_option("--fb", fb, "function parameter b");
  rec->add_option("--degree", degree, "random-poly degree");
  rec->add_option("--seed", seed, "random-poly seed");
  rec->add_option("--n-list", n_list, "N values")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  rec->add_option("--m", M_trunc, "truncation degree (default max(2N, 40))");
  rec->add_option("--k-radius", k_radius, "polydisc radius for |z1|");
  rec->add_option("--k-radius2", k_radius2, "polydisc radius for |z2| (default = k-radius)");
  rec->add_option("--grid-angles", grid_angles, "boundary samples per coordinate");
  rec->add_option("--identity-budget", identity_budget, "decomposition residual budget");
  rec->add_flag("--no-timing", no_timing, "write wall_time_ms as 0 (byte-stable output)");
  std::string values_out;
  rec->add_option("--values-out", values_out,
                  "write E/R/tail/f values at the largest N as JSON");

  // ---- permute ----
  auto* perm = app.add_subcommand("permute", "sigma constructions and subsequence deletion");
  bool do_sigma1 = false, do_sigma2 = false, do_del_odd = false, do_del_even = false;
  bool keep_theta = false;
  double r_kappa_flag = 0.0;
  int budget_p = 20, budget_q = 6, base_max = 6;
  add_common(perm, true);
  auto* o1 = perm->add_flag("--sigma1", do_sigma1, "kappa-privileging permutation");
  auto* o2 = perm->add_flag("--sigma2", do_sigma2, "theta-privileging permutation (witness search)");
  auto* o3 = perm->add_flag("--delete-odd", do_del_odd, "drop odd positions");
  auto* o4 = perm->add_flag("--delete-even", do_del_even, "drop even positions");
  o1->excludes(o2, o3, o4);
  o2->excludes(o3, o4);
  o3->excludes(o4);
  perm->add_option("--r-kappa", r_kappa_flag, "criterion bound for kappa (default: fitted)");
  perm->add_option("--budget-p", budget_p, "witness search p budget");
  perm->add_option("--budget-q", budget_q, "witness search q budget");
  perm->add_option("--witness-base-max", base_max, "largest growth base tried");
  perm->add_flag("--keep-theta", keep_theta, "after a sigma, keep only theta positions");

  // ---- check-bounds ----
  auto* chk = app.add_subcommand("check-bounds", "quantitative bound checks");
  std::string check = "estimproduct";
  int p_max = 80;
  std::vector<int> chk_n_list;
  double tolerance = 0.25;
  add_common(chk, true);
  chk->add_option("--check", check, "estimproduct|annulus-products|net-stats|integrals");
  chk->add_option("--p-max", p_max, "largest divided-difference order");
  chk->add_option("--n-list", chk_n_list, "prefix lengths")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  chk->add_option("--tolerance", tolerance, "deviation tolerance for ~ relations");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 order
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto resolved = [&](std::initializer_list<std::pair<std::string, json>> extra) {
    json cfg{{"precision_bits", bits}, {"version", kVersion}};
    if (!family.empty()) cfg["family"] = family;
    if (!in_file.empty()) cfg["in"] = in_file;
    cfg["count"] = count;
    for (auto& [k, v] : extra) cfg[k] = v;
    return cfg;
  };

  try {
    if (gen->parsed()) {
      auto seq = obtain_sequence(in_file, family, count, bits);
      print_summary(seq);
      if (!out_file.empty()) atomic_write(out_file, sequence_to_jsonl(seq, resolved({})));
      return 0;
    }

    if (crit->parsed()) {
      std::size_t eff_count =
          crit->count("--count") ? count : std::max(count, static_cast<std::size_t>(P + 1));
      auto seq = obtain_sequence(in_file, family, eff_count, bits);
      json cfg = resolved({{"P", P}, {"Q", Q}, {"command", "criterion"}});
      if (homography_u.empty()) {
        auto rep = criterion_matrix(seq, P, Q, bits);
        if (show_table) std::fputs(criterion_report_table(rep).c_str(), stdout);
        std::printf("verdict %s  R_hat %.6g  dual-disc %.3g\n", to_string(rep.verdict),
                    rep.r_hat, rep.dual_max_discrepancy);
        if (!out_file.empty())
          atomic_write(out_file, criterion_report_to_json(rep, cfg).dump(2) + "\n");
      } else {
        std::vector<Cplx> us;
        for (const auto& s : homography_u) us.push_back(parse_point(s, bits));
        auto hc = criterion_under_homography(seq, us, P, Q, bits);
        json arr = json::array();
        for (auto& [name, rep] : hc.reports) {
          if (show_table) std::fputs(criterion_report_table(rep).c_str(), stdout);
          std::printf("%-24s %s  R_hat %.6g\n", name.c_str(), to_string(rep.verdict), rep.r_hat);
          json jr = criterion_report_to_json(rep, cfg);
          jr["map"] = name;
          arr.push_back(jr);
        }
        std::printf("combined verdict %s\n", to_string(hc.combined));
        if (!out_file.empty())
          atomic_write(out_file,
                       json{{"combined", to_string(hc.combined)}, {"reports", arr}}.dump(2) + "\n");
      }
      return 0;
    }

    if (rec->parsed()) {
      auto seq = obtain_sequence(in_file, family, count, bits);
      auto f = make_function(function_spec, fa, fb, degree, seed);
      CompactGrid K{k_radius, k_radius2 > 0 ? k_radius2 : k_radius, grid_angles};
      json cfg = resolved({{"command", "reconstruct"},
                           {"function", f.name},
                           {"n_list", n_list},
                           {"m", M_trunc},
                           {"k_radius", k_radius},
                           {"grid_angles", grid_angles},
                           {"timing", !no_timing}});
      std::optional<int> M_opt;
      if (M_trunc > 0) M_opt = M_trunc;
      auto curve = convergence_experiment(f, seq, n_list, K, M_opt, bits, !no_timing);
      for (const auto& cp : curve)
        std::printf("N=%-4d M=%-4d sup=%.6e mean=%.6e\n", cp.N, cp.M, cp.sup_error,
                    cp.mean_error);
      std::printf("classification: %s\n",
                  fails_to_decrease(curve) ? "NOT-DECREASING" : "DECREASING");
      int N_id = *std::max_element(n_list.begin(), n_list.end());
      ReconstructionRequest req{&f, &seq, N_id, K.points(bits),
                                M_opt ? std::max(*M_opt, N_id) : std::max(2 * N_id, 40), bits};
      auto idrep = verify_identity(req, identity_budget);
      std::printf("identity residual %.3e (budget %.3e, bits %ld)\n",
                  idrep.residual.to_double(), identity_budget, idrep.bits_used);
      if (!values_out.empty())
        atomic_write(values_out,
                     reconstruction_result_to_json(reconstruct(req), cfg).dump(2) + "\n");
      if (!out_file.empty()) atomic_write(out_file, curve_to_csv(curve, bits, cfg));
      return 0;
    }

    if (perm->parsed()) {
      json record;
      DirectionSequence outseq;
      if (do_sigma1 || do_sigma2) {
        auto th = gen_theta(count, bits);
        auto ka = gen_kappa(count, bits);
        auto base = interleave(th, ka);
        if (do_sigma1) {
          Real Rk(0.0, bits);
          if (r_kappa_flag > 0) {
            Rk = Real(r_kappa_flag, bits);
          } else {
            int Pk = std::min<int>(24, static_cast<int>(count) - 1);
            auto krep = criterion_matrix(ka, Pk, 6, bits);
            Rk = Real(std::max(1.0, krep.r_hat), bits);
            record["r_kappa_fitted"] = krep.r_hat;
          }
          auto s1 = build_sigma1(th, ka, Rk, count);
          outseq = apply_permutation(base, s1.perm, count);
          record["r_kappa_used"] = Rk.to_double();
          record["theta_used"] = s1.theta_used;
          record["d_theta_kappa"] = s1.d_theta_kappa.to_double();
          if (keep_theta) {
            const auto& fwd = s1.perm;
            outseq = delete_subsequence(outseq, [&](std::size_t j) { return fwd(j) % 2 == 1; });
          }
        } else {
          auto s2 = build_sigma2_chain(th, ka, base_max, budget_p, budget_q, count, bits);
          outseq = apply_permutation(base, s2.perm, count);
          json wits = json::array();
          for (auto& [p, q] : s2.witnesses) wits.push_back({p, q});
          record["witnesses"] = wits;
          record["budgets"] = {budget_p, budget_q};
          record["witness_base_max"] = base_max;
          if (s2.witnesses.empty())
            std::fprintf(stderr, "warning: witness search empty within budgets (%d, %d)\n",
                         budget_p, budget_q);
          if (s2.any_precision_warning)
            std::fprintf(stderr, "warning: dual-precision disagreement on some witnesses\n");
        }
      } else if (do_del_odd || do_del_even) {
        auto seq = obtain_sequence(in_file, family, count, bits);
        outseq = delete_subsequence(
            seq, [&](std::size_t j) { return do_del_odd ? j % 2 == 1 : j % 2 == 0; });
      } else {
        throw ConfigError("permute: pick one of --sigma1 --sigma2 --delete-odd --delete-even");
      }
      json cfg = resolved({{"command", "permute"}, {"provenance_record", record}});
      print_summary(outseq);
      std::printf("provenance: %s\n", record.dump().c_str());
      if (!out_file.empty()) atomic_write(out_file, sequence_to_jsonl(outseq, cfg));
      return 0;
    }

    if (chk->parsed()) {
      json cfg = resolved({{"command", "check-bounds"}, {"check", check}});
      json out;
      if (check == "estimproduct") {
        auto seq = gen_square_net(p_max + 1, bits);
        auto rep = check_product_lower_bound(seq, p_max, bits);
        std::fputs(bound_report_table(rep).c_str(), stdout);
        out = bound_report_to_json(rep, cfg);
      } else if (check == "annulus-products") {
        if (chk_n_list.empty())
          for (int n = 8; n <= static_cast<int>(count); n += 8) chk_n_list.push_back(n);
        auto seq = obtain_sequence(in_file, family.empty() ? "dense-sigma-c" : family,
                                   count, bits);
        auto rep = check_annulus_products(seq, chk_n_list, bits);
        std::fputs(bound_report_table(rep).c_str(), stdout);
        out = bound_report_to_json(rep, cfg);
      } else if (check == "net-stats") {
        if (chk_n_list.empty()) chk_n_list = {2, 3, 64, 256, static_cast<int>(count)};
        auto seq = obtain_sequence(in_file, family.empty() ? "dense-sigma-c" : family,
                                   count, bits);
        auto rep = check_net_statistics(seq, chk_n_list, tolerance);
        std::fputs(bound_report_table(rep).c_str(), stdout);
        out = bound_report_to_json(rep, cfg);
      } else if (check == "integrals") {
        auto a = riemann_constant_check(bits);
        std::printf("int_0^1 t ln t dt      = %s (err %.3e)\n", a.t_ln_t.str().c_str(),
                    a.err_t_ln_t);
        std::printf("int_0^1 t ln(t/3) dt   = %s (err %.3e)\n",
                    a.t_ln_t_over_3.str().c_str(), a.err_t_ln_t_over_3);
        std::printf("pass %s\n", a.pass ? "true" : "false");
        out = json{{"t_ln_t", a.t_ln_t.str()},
                   {"t_ln_t_over_3", a.t_ln_t_over_3.str()},
                   {"err_t_ln_t", a.err_t_ln_t},
                   {"err_t_ln_t_over_3", a.err_t_ln_t_over_3},
                   {"pass", a.pass},
                   {"config", cfg},
                   {"version", kVersion}};
      } else {
        throw ConfigError("unknown check '" + check + "'");
      }
      if (!out_file.empty()) atomic_write(out_file, out.dump(2) + "\n");
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const PrecisionFailureError& e) {
    std::fprintf(stderr, "precision failure: %s\n", e.what());
    return 3;
  } catch (const IdentityViolationError& e) {
    std::fprintf(stderr, "identity violation (bug signal): %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
