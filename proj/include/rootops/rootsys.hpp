#pragma once
#include <algorithm>
#include <functional>

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rootops/errors.hpp"
#include "rootops/matrix.hpp"
#include "rootops/rational.hpp"
#include "rootops/rng.hpp"

namespace rootops {

// Families of classical root systems plus the non-reduced BC series and
// the planar exceptional system. For family A the build parameter n is the
// number of ambient coordinates, giving the system A_{n-1} realized as
// {e_k - e_l : k < l}; every other family uses n coordinates for rank n.
enum class Family { A, B, C, D, BC, G };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::BC: return "BC";
    case Family::G: return "G";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "A") return Family::A;
  if (s == "B") return Family::B;
  if (s == "C") return Family::C;
  if (s == "D") return Family::D;
  if (s == "BC") return Family::BC;
  if (s == "G") return Family::G;
  throw InvalidArgument("unknown root-system family '" + s + "'");
}

// Orbit labels. Edge roots are the q_k +- q_l type (all roots of A and D,
// the squared-length-2 orbit of G), Short the q_l type, Long the 2 q_l
// type (and the squared-length-6 orbit of G).
enum class RootClass { Edge, Short, Long };

inline const char* root_class_name(RootClass c) {
  switch (c) {
    case RootClass::Edge: return "edge";
    case RootClass::Short: return "short";
    case RootClass::Long: return "long";
  }
  return "?";
}

struct Root {
  std::vector<Rational> coords;
  Rational sq_length{0};
  RootClass cls = RootClass::Edge;
  int mult = 1;         // m_alpha
  int double_mult = 0;  // m_{2 alpha}, nonzero only for BC short roots
};

inline Rational inner(std::span<const Rational> a, std::span<const Rational> b) {
  Rational acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double pairing(const Root& alpha, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.coords.size(); ++i)
    acc += to_double(alpha.coords[i]) * q[i];
  return acc;
}

struct RootSystem {
  Family family = Family::A;
  int n = 0;        // build parameter (see Family docs)
  int ambient = 0;  // coordinate count
  std::vector<Root> positive_roots;
  std::vector<int> simple;  // indices of simple roots within positive_roots

  bool has_class(RootClass c) const {
    for (const Root& r : positive_roots)
      if (r.cls == c) return true;
    return false;
  }

  int class_mult(RootClass c) const {
    for (const Root& r : positive_roots)
      if (r.cls == c) return r.mult;
    return 0;
  }

  std::string label() const {
    int rank = family == Family::A ? n - 1 : (family == Family::G ? 2 : n);
    return std::string(family_name(family)) + std::to_string(rank);
  }

  /// Returns a copy with per-class multiplicities replaced. For BC the
  /// short roots' double multiplicity is kept in sync with the long class.
  RootSystem with_class_multiplicities(const std::map<RootClass, int>& mults) const {
    RootSystem out = *this;
    for (const auto& [cls, m] : mults) {
      if (m < 0) throw InvalidArgument("negative multiplicity");
      if (!has_class(cls))
        throw InvalidArgument(std::string("system ") + label() +
                              " has no " + root_class_name(cls) + " roots");
      for (Root& r : out.positive_roots)
        if (r.cls == cls) r.mult = m;
    }
    if (family == Family::BC) {
      int long_mult = out.class_mult(RootClass::Long);
      for (Root& r : out.positive_roots)
        if (r.cls == RootClass::Short) r.double_mult = long_mult;
    }
    return out;
  }

  /// A vector pairing strictly positively with every positive root.
  std::vector<Rational> regular_vector() const {
    std::vector<Rational> v(static_cast<std::size_t>(ambient));
    if (family == Family::G) {
      v = {Rational(0), Rational(-1), Rational(2)};
    } else {
      for (int i = 0; i < ambient; ++i) v[static_cast<std::size_t>(i)] = ambient - i;
    }
    return v;
  }
};

namespace detail {

inline Root make_root(std::vector<Rational> coords, RootClass cls) {
  Root r;
  r.sq_length = inner(coords, coords);
  r.coords = std::move(coords);
  r.cls = cls;
  return r;
}

inline std::vector<Rational> unit(int ambient, int i, Rational v = Rational(1)) {
  std::vector<Rational> c(static_cast<std::size_t>(ambient), Rational(0));
  c[static_cast<std::size_t>(i)] = v;
  return c;
}

inline std::vector<Rational> two_unit(int ambient, int i, int j, Rational vi,
                                      Rational vj) {
  std::vector<Rational> c(static_cast<std::size_t>(ambient), Rational(0));
  c[static_cast<std::size_t>(i)] = vi;
  c[static_cast<std::size_t>(j)] = vj;
  return c;
}

}  // namespace detail

/// Standard realization of the positive system. Multiplicities default
/// to 1 on every listed root (BC doubles get their own entry; short roots
/// start with double_mult 1 accordingly).
inline RootSystem build_root_system(Family family, int n) {
  RootSystem rs;
  rs.family = family;
  rs.n = n;
  using detail::make_root;
  using detail::two_unit;
  using detail::unit;

  auto add_edges = [&rs](int ambient, bool with_sums) {
    for (int k = 0; k < ambient; ++k)
      for (int l = k + 1; l < ambient; ++l) {
        rs.positive_roots.push_back(make_root(
            two_unit(ambient, k, l, Rational(1), Rational(-1)), RootClass::Edge));
        if (with_sums)
          rs.positive_roots.push_back(make_root(
              two_unit(ambient, k, l, Rational(1), Rational(1)), RootClass::Edge));
      }
  };

  switch (family) {
    case Family::A: {
      if (n < 2) throw InvalidArgument("family A needs at least 2 coordinates");
      rs.ambient = n;
      add_edges(n, false);
      // simple roots e_k - e_{k+1}
      for (int k = 0; k + 1 < n; ++k)
        for (std::size_t i = 0; i < rs.positive_roots.size(); ++i) {
          const auto& c = rs.positive_roots[i].coords;
          if (c[static_cast<std::size_t>(k)] == 1 &&
              c[static_cast<std::size_t>(k + 1)] == -1)
            rs.simple.push_back(static_cast<int>(i));
        }
      break;
    }
    case Family::B:
    case Family::C:
    case Family::D:
    case Family::BC: {
      int min_rank = family == Family::D ? 2 : 1;
      if (n < min_rank)
        throw InvalidArgument(std::string("family ") + family_name(family) +
                              " needs rank >= " + std::to_string(min_rank));
      rs.ambient = n;
      add_edges(n, true);
      if (family == Family::B || family == Family::BC)
        for (int l = 0; l < n; ++l)
          rs.positive_roots.push_back(make_root(unit(n, l), RootClass::Short));
      if (family == Family::C || family == Family::BC)
        for (int l = 0; l < n; ++l)
          rs.positive_roots.push_back(
              make_root(unit(n, l, Rational(2)), RootClass::Long));
      if (family == Family::BC)
        for (Root& r : rs.positive_roots)
          if (r.cls == RootClass::Short) r.double_mult = 1;
      // simple roots: e_k - e_{k+1}, then the family-specific tail root
      auto find_root = [&rs](const std::vector<Rational>& coords) {
        for (std::size_t i = 0; i < rs.positive_roots.size(); ++i)
          if (rs.positive_roots[i].coords == coords) return static_cast<int>(i);
        throw InvalidArgument("simple root lookup failed");
      };
      for (int k = 0; k + 1 < n; ++k)
        rs.simple.push_back(
            find_root(two_unit(n, k, k + 1, Rational(1), Rational(-1))));
      if (family == Family::B || family == Family::BC)
        rs.simple.push_back(find_root(unit(n, n - 1)));
      else if (family == Family::C)
        rs.simple.push_back(find_root(unit(n, n - 1, Rational(2))));
      else if (n >= 2)
        rs.simple.push_back(
            find_root(two_unit(n, n - 2, n - 1, Rational(1), Rational(1))));
      break;
    }
    case Family::G: {
      if (n != 2) throw InvalidArgument("family G is defined for rank 2 only");
      // realized on the sum-zero hyperplane of R^3 so coordinates stay
      // rational: short orbit |alpha|^2 = 2, long orbit |alpha|^2 = 6
      rs.ambient = 3;
      auto mk = [&](long long x, long long y, long long z, RootClass c) {
        rs.positive_roots.push_back(
            make_root({Rational(x), Rational(y), Rational(z)}, c));
      };
      mk(1, -1, 0, RootClass::Edge);   // simple short
      mk(-1, 0, 1, RootClass::Edge);
      mk(0, -1, 1, RootClass::Edge);
      mk(-2, 1, 1, RootClass::Long);   // simple long
      mk(1, -2, 1, RootClass::Long);
      mk(-1, -1, 2, RootClass::Long);
      rs.simple = {0, 3};
      break;
    }
  }
  return rs;
}

/// Reflection in a root as an exact orthogonal matrix:
/// s v = v - 2 (v, alpha)/(alpha, alpha) alpha.
inline RationalMatrix reflection_matrix(const Root& alpha, int ambient) {
  RationalMatrix s = RationalMatrix::identity(ambient);
  for (int i = 0; i < ambient; ++i)
    for (int j = 0; j < ambient; ++j)
      s(i, j) -= Rational(2) * alpha.coords[static_cast<std::size_t>(i)] *
                 alpha.coords[static_cast<std::size_t>(j)] / alpha.sq_length;
  return s;
}

/// One reflection per simple root.
inline std::vector<RationalMatrix> weyl_generators(const RootSystem& rs) {
  std::vector<RationalMatrix> out;
  out.reserve(rs.simple.size());
  for (int idx : rs.simple)
    out.push_back(
        reflection_matrix(rs.positive_roots[static_cast<std::size_t>(idx)], rs.ambient));
  return out;
}

/// Brute-force closure of the generated group; throws if the group grows
/// past `cap` elements.
inline std::vector<RationalMatrix> weyl_closure(
    const std::vector<RationalMatrix>& gens, std::size_t cap = 50000) {
  if (gens.empty()) return {};
  std::set<RationalMatrix> seen;
  std::vector<RationalMatrix> frontier{RationalMatrix::identity(gens[0].dim())};
  seen.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<RationalMatrix> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        RationalMatrix h = s * g;
        if (seen.insert(h).second) {
          next.push_back(h);
          if (seen.size() > cap) throw InvalidArgument("Weyl closure exceeded cap");
        }
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

/// Half the multiplicity-weighted sum of positive roots.
inline std::vector<Rational> rho(const RootSystem& rs) {
  std::vector<Rational> acc(static_cast<std::size_t>(rs.ambient), Rational(0));
  for (const Root& r : rs.positive_roots)
    for (int i = 0; i < rs.ambient; ++i)
      acc[static_cast<std::size_t>(i)] +=
          Rational(r.mult, 2) * r.coords[static_cast<std::size_t>(i)];
  return acc;
}

inline Rational rho_sq(const RootSystem& rs) {
  auto v = rho(rs);
  return inner(v, v);
}

/// Group coupling value from multiplicities:
/// g^2 = (1/8) m (m + 2 m2 - 2) |alpha|^2, exact.
inline Rational coupling_from_multiplicity(int m, int m2, const Rational& sq_len) {
  if (m < 0 || m2 < 0) throw InvalidArgument("negative multiplicity");
  return Rational(m, 8) * Rational(m + 2 * m2 - 2) * sq_len;
}

// ---------------------------------------------------------------------------
// Configuration regions.

struct Region {
  enum class Kind { Chamber, Alcove };
  Kind kind = Kind::Chamber;
  double scale_a = 1.0;  // alcove period parameter

  static Region chamber() { return {Kind::Chamber, 1.0}; }
  static Region alcove(double a = 1.0) { return {Kind::Alcove, a}; }
};

inline bool in_region(const RootSystem& rs, const Region& region,
                      std::span<const double> q, double margin = 0.0) {
  if (static_cast<int>(q.size()) != rs.ambient) return false;
  constexpr double pi = 3.14159265358979323846;
  for (const Root& alpha : rs.positive_roots) {
    double p = pairing(alpha, q);
    if (region.kind == Region::Kind::Chamber) {
      if (!(p > margin)) return false;
    } else {
      double ap = region.scale_a * p;
      if (!(ap > margin && ap < pi - margin)) return false;
    }
  }
  return true;
}

/// Deterministic margin-separated interior points: rejection sampling from
/// a coordinate box, one RNG stream per seed. For the classical families
/// the draw is sorted into descending coordinate order first (a bijection
/// up to permutation that matches the chamber orientation and lifts the
/// acceptance rate by n!); the planar exceptional chamber is not aligned
/// with coordinate order, so G draws stay unsorted.
inline std::vector<std::vector<double>> sample_interior_points(
    const RootSystem& rs, const Region& region, double margin,
    std::uint64_t seed, int count) {
  if (margin <= 0) throw InvalidArgument("margin must be positive");
  constexpr double pi = 3.14159265358979323846;
  double half_width =
      region.kind == Region::Kind::Chamber ? 3.0 : pi / region.scale_a;
  Rng rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<double> q(static_cast<std::size_t>(rs.ambient));
  constexpr int kMaxTries = 2000000;
  int tries = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++tries > kMaxTries)
      throw SamplingError("interior-point sampling exhausted " +
                          std::to_string(kMaxTries) + " tries (margin " +
                          std::to_string(margin) + " too large for " +
                          rs.label() + ")");
    for (double& x : q) x = rng.uniform(-half_width, half_width);
    if (rs.family != Family::G)
      std::sort(q.begin(), q.end(), std::greater<double>());
    if (in_region(rs, region, q, margin)) out.push_back(q);
  }
  return out;
}

inline std::vector<double> sample_interior_point(const RootSystem& rs,
                                                 const Region& region,
                                                 double margin,
                                                 std::uint64_t seed) {
  return sample_interior_points(rs, region, margin, seed, 1)[0];
}

}  // namespace rootops
