#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "holorecon/diagnostics.hpp"
#include "holorecon/divided.hpp"
#include "holorecon/reconstruction.hpp"
#include "holorecon/sequence.hpp"
#include "holorecon/version.hpp"

namespace holorecon {

using nlohmann::json;

/// Write via a temp file in the same directory, then rename.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

/// JSON lines: a meta record, then one {index, re, im, precision_bits}
/// record per point, numbers as decimal strings to preserve precision.
inline std::string sequence_to_jsonl(const DirectionSequence& seq, const json& config) {
  std::ostringstream out;
  json meta;
  meta["meta"] = {{"config", config}, {"version", kVersion}, {"provenance", seq.provenance}};
  out << meta.dump() << "\n";
  for (std::size_t j = 1; j <= seq.size(); ++j) {
    const Cplx& z = seq.pts[j - 1];
    json rec = {{"index", j},
                {"re", z.re().str()},
                {"im", z.im().str()},
                {"precision_bits", z.precision()}};
    out << rec.dump() << "\n";
  }
  return out.str();
}

inline DirectionSequence sequence_from_jsonl(std::istream& in,
                                             const std::string& provenance_fallback = "file") {
  DirectionSequence seq;
  seq.provenance = provenance_fallback;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line);
    if (!rec.contains("index")) {
      if (rec.contains("meta") && rec["meta"].contains("provenance"))
        seq.provenance = rec["meta"]["provenance"].get<std::string>();
      continue;
    }
    prec_t bits = rec.value("precision_bits", static_cast<long>(kDefaultPrecision));
    seq.pts.emplace_back(Real::from_string(rec["re"].get<std::string>(), bits),
                         Real::from_string(rec["im"].get<std::string>(), bits));
  }
  return seq;
}

inline DirectionSequence load_sequence(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return sequence_from_jsonl(in, path.filename().string());
}

inline json criterion_report_to_json(const CriterionReport& r, const json& config) {
  json entries = json::array();
  for (const auto& row : r.entries) {
    json jrow = json::array();
    for (const auto& e : row) jrow.push_back(e.str());
    entries.push_back(jrow);
  }
  return json{{"P", r.P},
              {"Q", r.Q},
              {"entries", entries},
              {"R_hat", r.r_hat},
              {"verdict", to_string(r.verdict)},
              {"precision_bits", r.precision_bits},
              {"dual_precision_max_discrepancy", r.dual_max_discrepancy},
              {"provenance", r.provenance},
              {"config", config},
              {"version", kVersion}};
}

/// Fixed-width human table, deterministic ordering.
inline std::string criterion_report_table(const CriterionReport& r) {
  std::ostringstream out;
  out << "criterion matrix |Delta_p[phi^q](eta_{p+1})|  (" << r.provenance << ")\n";
  out << "verdict " << to_string(r.verdict) << "  R_hat " << r.r_hat << "  bits "
      << r.precision_bits << "  dual-disc " << r.dual_max_discrepancy << "\n";
  char buf[64];
  out << "   p\\q";
  for (int q = 0; q <= r.Q; ++q) {
    std::snprintf(buf, sizeof buf, " %12d", q);
    out << buf;
  }
  out << "\n";
  for (int p = 0; p <= r.P; ++p) {
    std::snprintf(buf, sizeof buf, "%6d", p);
    out << buf;
    for (int q = 0; q <= r.Q; ++q) {
      std::snprintf(buf, sizeof buf, " %12.4e", r.entries[p][q].to_double());
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

inline json bound_report_to_json(const BoundCheckReport& r, const json& config) {
  json d = json::object();
  for (const auto& [k, v] : r.details) d[k] = v;
  return json{{"name", r.name},
              {"range", {r.range_lo, r.range_hi}},
              {"observed_min", r.observed_min},
              {"observed_max", r.observed_max},
              {"fitted_constant", r.fitted_constant},
              {"pass", r.pass},
              {"margin", r.margin},
              {"details", d},
              {"config", config},
              {"version", kVersion}};
}

inline std::string bound_report_table(const BoundCheckReport& r) {
  std::ostringstream out;
  out << r.name << "\n";
  out << "  range        [" << r.range_lo << ", " << r.range_hi << "]\n";
  out << "  observed     [" << r.observed_min << ", " << r.observed_max << "]\n";
  out << "  fitted       " << r.fitted_constant << "\n";
  out << "  margin       " << r.margin << "\n";
  for (const auto& [k, v] : r.details) out << "  " << k << std::string(13 - std::min<std::size_t>(12, k.size()), ' ') << v << "\n";
  out << "  pass         " << (r.pass ? "true" : "false") << "\n";
  return out.str();
}

/// Identity members at every eval point, values as decimal strings.
inline json reconstruction_result_to_json(const ReconstructionResult& r,
                                          const json& config) {
  auto dump = [](const std::vector<Cplx>& v) {
    json arr = json::array();
    for (const auto& z : v) arr.push_back({{"re", z.re().str()}, {"im", z.im().str()}});
    return arr;
  };
  return json{{"E_values", dump(r.E_values)},
              {"R_values", dump(r.R_values)},
              {"tail_values", dump(r.tail_values)},
              {"f_values", dump(r.f_values)},
              {"identity_residual", r.identity_residual.str()},
              {"truncation_estimate", r.truncation_estimate.str()},
              {"config", config},
              {"version", kVersion}};
}

/// Error-curve CSV with the resolved config embedded in comment lines.
inline std::string curve_to_csv(const std::vector<CurvePoint>& curve, prec_t bits,
                                const json& config) {
  std::ostringstream out;
  out << "# version: " << kVersion << "\n";
  out << "# config: " << config.dump() << "\n";
  out << "N,sup_error,mean_error,precision_bits,M,wall_time_ms\n";
  char buf[128];
  for (const auto& cp : curve) {
    std::snprintf(buf, sizeof buf, "%d,%.17e,%.17e,%ld,%d,%ld\n", cp.N, cp.sup_error,
                  cp.mean_error, bits, cp.M, cp.wall_ms);
    out << buf;
  }
  return out.str();
}

}  // namespace holorecon
