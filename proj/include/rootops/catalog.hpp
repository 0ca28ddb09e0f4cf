#pragma once

// Catalog of the noncompact symmetric spaces whose restricted root systems
// drive the models here: the A-type series plus every rank-2 space with a
// B2/BC2 system. Couplings are the exact table values; multiplicities are
// stored per class as linear functions of the series parameter n and feed
// the group-coupling formula. For Sp(2,2) the inversion of that formula is
// normalization dependent, so its multiplicity fields are advisory and the
// couplings are authoritative.

#include <optional>
#include <string>
#include <vector>

#include "rootops/errors.hpp"
#include "rootops/rational.hpp"
#include "rootops/rootsys.hpp"

namespace rootops {

/// Integer-coefficient linear form a*n + b.
struct LinearInt {
  int a = 0;
  int b = 0;
  int operator()(int n) const { return a * n + b; }
  bool constant() const { return a == 0; }
};

/// Rational quadratic (c2 n^2 + c1 n + c0), used for the printed coupling
/// formulas.
struct QuadRat {
  Rational c2{0}, c1{0}, c0{0};
  Rational operator()(int n) const {
    return c2 * Rational(n) * Rational(n) + c1 * Rational(n) + c0;
  }
  bool constant() const { return c2 == Rational(0) && c1 == Rational(0); }
};

struct SpaceClassRow {
  RootClass cls = RootClass::Edge;
  LinearInt mult;          // multiplicity of the class as a function of n
  Rational sq_length{0};   // |alpha|^2 in the standard realization
  QuadRat table_coupling;  // coupling exactly as printed in the tables
};

struct SpaceEntry {
  std::string cartan_label;  // e.g. "A I", "C II(n,2)"
  std::string quotient;      // e.g. "SL(n,R)/SO(n)"
  Family family = Family::A;
  std::string rank_expr;     // "n-1" or "2"
  bool needs_n = false;      // couplings or rank depend on n
  int min_n = 0;             // smallest admissible n when needs_n
  bool mult_advisory = false;
  std::vector<SpaceClassRow> classes;

  const SpaceClassRow* find_class(RootClass c) const {
    for (const auto& row : classes)
      if (row.cls == c) return &row;
    return nullptr;
  }

  /// m_{2 alpha} seen by class `c`: the long-class multiplicity for short
  /// roots of a BC system, zero otherwise.
  int double_mult_for(RootClass c, int n) const {
    if (family == Family::BC && c == RootClass::Short) {
      if (const auto* lng = find_class(RootClass::Long)) return lng->mult(n);
    }
    return 0;
  }

  /// Coupling of class `c` derived from the stored multiplicities.
  Rational coupling_from_mults(RootClass c, int n) const {
    const auto* row = find_class(c);
    if (!row) throw InvalidArgument("class not present in catalog entry");
    return coupling_from_multiplicity(row->mult(n), double_mult_for(c, n),
                                      row->sq_length);
  }
};

/// One catalog row instantiated at a concrete n (or at no n, when the row
/// does not need one).
struct SpaceCouplings {
  std::string cartan_label;
  Family family = Family::A;
  std::optional<int> n;
  int rank = 0;
  std::map<RootClass, Rational> couplings;
  std::map<RootClass, int> mults;
  bool mult_advisory = false;
};

inline const std::vector<SpaceEntry>& catalog() {
  static const std::vector<SpaceEntry> entries = [] {
    std::vector<SpaceEntry> v;
    auto R = [](long long num, long long den = 1) { return Rational(num, den); };

    // ---- A-type series -------------------------------------------------
    {
      SpaceEntry e;
      e.cartan_label = "A I";
      e.quotient = "SL(n,R)/SO(n)";
      e.family = Family::A;
      e.rank_expr = "n-1";
      e.needs_n = true;
      e.min_n = 2;
      e.classes = {{RootClass::Edge, {0, 1}, R(2), {R(0), R(0), R(-1, 4)}}};
      v.push_back(e);
    }
    {
      SpaceEntry e;
      e.cartan_label = "A II";
      e.quotient = "SU*(2n)/Sp(n)";
      e.family = Family::A;
      e.rank_expr = "n-1";
      e.needs_n = true;
      e.min_n = 2;
      e.classes = {{RootClass::Edge, {0, 4}, R(2), {R(0), R(0), R(2)}}};
      v.push_back(e);
    }
    {
      SpaceEntry e;
      e.cartan_label = "E IV";
      e.quotient = "E6/F4";
      e.family = Family::A;
      e.rank_expr = "2";
      e.classes = {{RootClass::Edge, {0, 8}, R(2), {R(0), R(0), R(12)}}};
      v.push_back(e);
    }

    // ---- rank-2 spaces, B2 / BC2 restricted systems ---------------------
    {
      SpaceEntry e;
      e.cartan_label = "BD I";
      e.quotient = "SO0(n,2)/(SO(n)xSO(2))";
      e.family = Family::B;
      e.rank_expr = "2";
      e.needs_n = true;
      e.min_n = 3;  // table row requires n > 2
      e.classes = {
          {RootClass::Edge, {0, 1}, R(2), {R(0), R(0), R(-1, 4)}},
          // (1/8)(n-2)(n-4) = n^2/8 - 3n/4 + 1
          {RootClass::Short, {1, -2}, R(1), {R(1, 8), R(-3, 4), R(1)}},
      };
      v.push_back(e);
    }
    {
      SpaceEntry e;
      e.cartan_label = "C II(2,2)";
      e.quotient = "Sp(2,2)/(Sp(2)xSp(2))";
      e.family = Family::B;
      e.rank_expr = "2";
      e.mult_advisory = true;
      e.classes = {
          {RootClass::Edge, {0, 3}, R(2), {R(0), R(0), R(3, 4)}},
          {RootClass::Short, {0, 4}, R(1), {R(0), R(0), R(1)}},
      };
      v.push_back(e);
    }
    {
      SpaceEntry e;
      e.cartan_label = "A III";
      e.quotient = "SU(n,2)/(SU(n)xU(2))";
      e.family = Family::BC;
      e.rank_expr = "2";
      e.needs_n = true;
      e.min_n = 3;
      e.classes = {
          {RootClass::Edge, {0, 2}, R(2), {R(0), R(0), R(0)}},
          // (1/2)(n-2)^2 = n^2/2 - 2n + 2
          {RootClass::Short, {2, -4}, R(1), {R(1, 2), R(-2), R(2)}},
          {RootClass::Long, {0, 1}, R(4), {R(0), R(0), R(-1, 2)}},
      };
      v.push_back(e);
    }
    {
      SpaceEntry e;
      e.cartan_label = "C II(n,2)";
      e.quotient = "Sp(n,2)/(Sp(n)xSp(2))";
      e.family = Family::BC;
      e.rank_expr = "2";
      e.needs_n = true;
      e.min_n = 3;
      e.classes = {
          {RootClass::Edge, {0, 4}, R(2), {R(0), R(0), R(2)}},
          // 2(n-1)(n-2) = 2n^2 - 6n + 4
          {RootClass::Short, {4, -8}, R(1), {R(2), R(-6), R(4)}},
          {RootClass::Long, {0, 3}, R(4), {R(0), R(0), R(3, 2)}},
      };
      v.push_back(e);
    }
    {
      SpaceEntry e;
      e.cartan_label = "D III";
      e.quotient = "SO*(10)/U(5)";
      e.family = Family::BC;
      e.rank_expr = "2";
      e.classes = {
          {RootClass::Edge, {0, 4}, R(2), {R(0), R(0), R(2)}},
          {RootClass::Short, {0, 4}, R(1), {R(0), R(0), R(2)}},
          {RootClass::Long, {0, 1}, R(4), {R(0), R(0), R(-1, 2)}},
      };
      v.push_back(e);
    }
    {
      SpaceEntry e;
      e.cartan_label = "E III";
      e.quotient = "E6/(SO(10)xSO(2))";
      e.family = Family::BC;
      e.rank_expr = "2";
      e.classes = {
          {RootClass::Edge, {0, 6}, R(2), {R(0), R(0), R(6)}},
          {RootClass::Short, {0, 8}, R(1), {R(0), R(0), R(8)}},
          {RootClass::Long, {0, 1}, R(4), {R(0), R(0), R(-1, 2)}},
      };
      v.push_back(e);
    }
    return v;
  }();
  return entries;
}

inline const SpaceEntry& catalog_entry(const std::string& label) {
  for (const SpaceEntry& e : catalog())
    if (e.cartan_label == label) return e;
  throw InvalidArgument("unknown symmetric-space label '" + label + "'");
}

/// Instantiates a catalog row. `n` is required when any stored formula
/// depends on it and must respect the row's validity range.
inline SpaceCouplings catalog_lookup(const std::string& label,
                                     std::optional<int> n = std::nullopt) {
  const SpaceEntry& e = catalog_entry(label);
  bool couplings_need_n = false;
  for (const auto& row : e.classes)
    if (!row.mult.constant()) couplings_need_n = true;
  if (couplings_need_n && !n)
    throw InvalidArgument("label '" + label + "' needs a value of n");
  if (n && e.needs_n && *n < e.min_n)
    throw InvalidArgument("label '" + label + "' requires n >= " +
                          std::to_string(e.min_n));
  SpaceCouplings out;
  out.cartan_label = e.cartan_label;
  out.family = e.family;
  out.n = n;
  out.mult_advisory = e.mult_advisory;
  int n_eval = n.value_or(0);
  out.rank = e.rank_expr == "n-1" ? (n ? *n - 1 : 0) : 2;
  for (const auto& row : e.classes) {
    out.couplings[row.cls] = e.coupling_from_mults(row.cls, n_eval);
    out.mults[row.cls] = row.mult(n_eval);
  }
  return out;
}

}  // namespace rootops
