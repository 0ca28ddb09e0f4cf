#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace rootops {

/// Machine-readable description of the model a check ran on.
struct SystemDesc {
  std::string family;
  int rank = 0;
  std::string kind;
  double a = 1.0;
  double omega = 0.0;
  std::string mode;  // "group" | "explicit"
  std::map<std::string, std::string> couplings;  // exact rationals as text
  std::map<std::string, int> mults;
};

struct ReportDetail {
  std::uint64_t seed = 0;
  std::vector<double> point;
  double value = 0.0;
  std::string note;
};

/// Outcome of one verification check. `pass` holds iff
/// residual_max / scale <= tolerance for every seed.
struct Report {
  std::string check;
  SystemDesc system;
  int n_points = 0;
  double margin = 0.0;
  std::vector<std::uint64_t> seeds;
  double tolerance = 0.0;
  double scale = 1.0;
  double residual_max = 0.0;
  bool pass = false;
  std::vector<ReportDetail> details;
  nlohmann::json extra;  // check-specific payload (constants, deviations, ...)
};

inline void to_json(nlohmann::json& j, const SystemDesc& s) {
  j = nlohmann::json{{"family", s.family}, {"rank", s.rank},
                     {"kind", s.kind},     {"a", s.a},
                     {"omega", s.omega},   {"mode", s.mode},
                     {"couplings", s.couplings}, {"mults", s.mults}};
}

inline void from_json(const nlohmann::json& j, SystemDesc& s) {
  j.at("family").get_to(s.family);
  j.at("rank").get_to(s.rank);
  j.at("kind").get_to(s.kind);
  j.at("a").get_to(s.a);
  j.at("omega").get_to(s.omega);
  j.at("mode").get_to(s.mode);
  j.at("couplings").get_to(s.couplings);
  j.at("mults").get_to(s.mults);
}

inline void to_json(nlohmann::json& j, const ReportDetail& d) {
  j = nlohmann::json{{"seed", d.seed}, {"point", d.point}, {"value", d.value},
                     {"note", d.note}};
}

inline void from_json(const nlohmann::json& j, ReportDetail& d) {
  j.at("seed").get_to(d.seed);
  j.at("point").get_to(d.point);
  j.at("value").get_to(d.value);
  j.at("note").get_to(d.note);
}

inline void to_json(nlohmann::json& j, const Report& r) {
  j = nlohmann::json{{"check", r.check},
                     {"system", r.system},
                     {"n_points", r.n_points},
                     {"margin", r.margin},
                     {"seeds", r.seeds},
                     {"tolerance", r.tolerance},
                     {"scale", r.scale},
                     {"residual_max", r.residual_max},
                     {"pass", r.pass},
                     {"details", r.details},
                     {"extra", r.extra}};
}

inline void from_json(const nlohmann::json& j, Report& r) {
  j.at("check").get_to(r.check);
  j.at("system").get_to(r.system);
  j.at("n_points").get_to(r.n_points);
  j.at("margin").get_to(r.margin);
  j.at("seeds").get_to(r.seeds);
  j.at("tolerance").get_to(r.tolerance);
  j.at("scale").get_to(r.scale);
  j.at("residual_max").get_to(r.residual_max);
  j.at("pass").get_to(r.pass);
  j.at("details").get_to(r.details);
  r.extra = j.at("extra");
}

inline std::string report_line(const Report& r) {
  std::string line = r.pass ? "PASS " : "FAIL ";
  line += r.check;
  line += "  system=" + r.system.family + std::to_string(r.system.rank) +
          "/" + r.system.kind;
  char buf[96];
  std::snprintf(buf, sizeof buf, "  residual=%.3e  scale=%.3e  tol=%.1e",
                r.residual_max, r.scale, r.tolerance);
  line += buf;
  return line;
}

}  // namespace rootops
