#pragma once

// JSON bindings for check specifications / suite configs, and the catalog
// export (JSON and aligned text).

#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rootops/catalog.hpp"
#include "rootops/verify.hpp"

namespace rootops {

inline RootClass parse_root_class(const std::string& s) {
  for (RootClass c : {RootClass::Edge, RootClass::Short, RootClass::Long})
    if (s == root_class_name(c)) return c;
  throw FormatError("unknown root class '" + s + "'");
}

inline void from_json(const nlohmann::json& j, SystemSpec& s) {
  s = SystemSpec{};
  if (j.contains("family")) s.family = parse_family(j.at("family").get<std::string>());
  if (j.contains("rank")) j.at("rank").get_to(s.rank);
  if (j.contains("kind")) s.kind = parse_xfamily(j.at("kind").get<std::string>());
  if (j.contains("a")) j.at("a").get_to(s.a);
  if (j.contains("omega")) j.at("omega").get_to(s.omega);
  if (j.contains("mults"))
    for (auto& [key, value] : j.at("mults").items())
      s.mults[parse_root_class(key)] = value.get<int>();
  if (j.contains("couplings")) {
    s.mode = CouplingMode::Explicit;
    for (auto& [key, value] : j.at("couplings").items())
      s.couplings[parse_root_class(key)] = parse_rational(value.get<std::string>());
  }
  if (j.contains("mode"))
    s.mode = j.at("mode").get<std::string>() == "group" ? CouplingMode::Group
                                                        : CouplingMode::Explicit;
  if (j.contains("perturb")) j.at("perturb").get_to(s.perturb);
  if (j.contains("perturb_class"))
    s.perturb_class = parse_root_class(j.at("perturb_class").get<std::string>());
}

inline void from_json(const nlohmann::json& j, CheckSpec& cs) {
  cs = CheckSpec{};
  cs.check = parse_check(j.at("check").get<std::string>());
  cs.tolerance = CheckSpec::defaults_for(cs.check);
  if (cs.check == CheckKind::Lemma1) cs.n_points = 20;
  if (cs.check == CheckKind::FVanish) cs.n_points = 100;
  if (j.contains("system")) j.at("system").get_to(cs.system);
  if (j.contains("ops")) j.at("ops").get_to(cs.ops);
  if (j.contains("n_points")) j.at("n_points").get_to(cs.n_points);
  if (j.contains("margin")) cs.margin = j.at("margin").get<double>();
  if (j.contains("seeds")) j.at("seeds").get_to(cs.seeds);
  if (j.contains("tolerance")) j.at("tolerance").get_to(cs.tolerance);
  if (j.contains("lambdas")) j.at("lambdas").get_to(cs.lambdas);
  if (j.contains("epsilons")) j.at("epsilons").get_to(cs.epsilons);
  if (j.contains("table_n")) j.at("table_n").get_to(cs.table_n);
  if (cs.n_points < 1) throw FormatError("n_points must be >= 1");
  if (cs.margin && *cs.margin <= 0) throw FormatError("margin must be positive");
  if (cs.tolerance < 0) throw FormatError("tolerance must be nonnegative");
}

inline void from_json(const nlohmann::json& j, SuiteConfig& c) {
  c = SuiteConfig{};
  j.at("suite").get_to(c.checks);
  if (j.contains("fail_fast")) j.at("fail_fast").get_to(c.fail_fast);
}

// ---------------------------------------------------------------------------
// Catalog rendering.

inline std::string coupling_formula_text(const QuadRat& q) {
  if (q.constant()) return to_string(q.c0);
  std::ostringstream os;
  bool lead = true;
  auto term = [&](const Rational& c, const std::string& var) {
    if (c == Rational(0)) return;
    if (!lead && c > Rational(0)) os << "+";
    if (c == Rational(-1) && !var.empty())
      os << "-";
    else if (!(c == Rational(1)) || var.empty())
      os << to_string(c) << (var.empty() ? "" : "*");
    os << var;
    lead = false;
  };
  term(q.c2, "n^2");
  term(q.c1, "n");
  term(q.c0, "");
  return os.str();
}

inline nlohmann::json catalog_json(std::optional<int> n = std::nullopt) {
  nlohmann::json out = nlohmann::json::array();
  for (const SpaceEntry& e : catalog()) {
    nlohmann::json row;
    row["cartan_label"] = e.cartan_label;
    row["quotient"] = e.quotient;
    row["family"] = family_name(e.family);
    row["rank"] = e.rank_expr;
    row["mult_advisory"] = e.mult_advisory;
    nlohmann::json classes;
    for (const auto& c : e.classes) {
      nlohmann::json cls;
      cls["sq_length"] = to_string(c.sq_length);
      if (c.mult.constant())
        cls["mult"] = c.mult.b;
      else
        cls["mult"] = std::to_string(c.mult.a) + "n" +
                      (c.mult.b >= 0 ? "+" : "") + std::to_string(c.mult.b);
      cls["coupling"] = coupling_formula_text(c.table_coupling);
      if (n && (!e.needs_n || *n >= e.min_n)) {
        cls["mult_at_n"] = c.mult(*n);
        cls["coupling_at_n"] = to_string(c.table_coupling(*n));
      }
      classes[root_class_name(c.cls)] = cls;
    }
    row["classes"] = classes;
    out.push_back(row);
  }
  return out;
}

inline std::string catalog_table_text() {
  std::ostringstream os;
  os << std::left << std::setw(10) << "label" << std::setw(28) << "quotient"
     << std::setw(7) << "family" << std::setw(6) << "rank" << std::setw(16)
     << "g^2 (edge)" << std::setw(18) << "g1^2 (short)" << std::setw(14)
     << "g2^2 (long)" << "\n";
  os << std::string(97, '-') << "\n";
  for (const SpaceEntry& e : catalog()) {
    auto cell = [&](RootClass c) -> std::string {
      const auto* row = e.find_class(c);
      return row ? coupling_formula_text(row->table_coupling) : "-";
    };
    os << std::left << std::setw(10) << e.cartan_label << std::setw(28)
       << e.quotient << std::setw(7) << family_name(e.family) << std::setw(6)
       << e.rank_expr << std::setw(16) << cell(RootClass::Edge) << std::setw(18)
       << cell(RootClass::Short) << std::setw(14) << cell(RootClass::Long)
       << "\n";
  }
  return os.str();
}

}  // namespace rootops
