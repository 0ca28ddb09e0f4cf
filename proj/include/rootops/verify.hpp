#pragma once

// Deterministic verification harness: identity/commutation/invariance
// checks over seeded sample points, a least-squares calibrator for
// ambiguous printed coefficients, and suite execution.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rootops/catalog.hpp"
#include "rootops/models.hpp"
#include "rootops/report.hpp"

namespace rootops {

enum class CheckKind {
  Lemma1,
  FVanish,
  Commute,
  PairwiseCommute,
  Weyl,
  Gradation,
  Asymptotic,
  TableCouplings,
};

inline const char* check_name(CheckKind k) {
  switch (k) {
    case CheckKind::Lemma1: return "lemma1";
    case CheckKind::FVanish: return "fvanish";
    case CheckKind::Commute: return "commute";
    case CheckKind::PairwiseCommute: return "pairwise_commute";
    case CheckKind::Weyl: return "weyl";
    case CheckKind::Gradation: return "gradation";
    case CheckKind::Asymptotic: return "asymptotic";
    case CheckKind::TableCouplings: return "tables";
  }
  return "?";
}

inline CheckKind parse_check(const std::string& s) {
  for (CheckKind k : {CheckKind::Lemma1, CheckKind::FVanish, CheckKind::Commute,
                      CheckKind::PairwiseCommute, CheckKind::Weyl,
                      CheckKind::Gradation, CheckKind::Asymptotic,
                      CheckKind::TableCouplings})
    if (s == check_name(k)) return k;
  throw InvalidArgument("unknown check '" + s + "'");
}

inline XFamily parse_xfamily(const std::string& s) {
  for (XFamily f : {XFamily::Rational, XFamily::Hyperbolic,
                    XFamily::Trigonometric, XFamily::RationalHarmonic})
    if (s == xfamily_name(f)) return f;
  throw InvalidArgument("unknown potential kind '" + s + "'");
}

/// Declarative description of the model a check runs on. `rank` is the
/// build parameter of the root system (coordinate count for family A).
struct SystemSpec {
  Family family = Family::A;
  int rank = 3;
  XFamily kind = XFamily::Hyperbolic;
  double a = 1.0;
  double omega = 0.0;
  CouplingMode mode = CouplingMode::Group;
  std::map<RootClass, int> mults;           // per-class overrides (group mode)
  std::map<RootClass, Rational> couplings;  // explicit mode
  // negative-control knob: multiplies the named coupling inside H only,
  // leaving the companion operator at the nominal value
  double perturb = 0.0;
  RootClass perturb_class = RootClass::Edge;
};

inline ModelSpec materialize(const SystemSpec& s) {
  RootSystem rs = build_root_system(s.family, s.rank);
  if (!s.mults.empty()) rs = rs.with_class_multiplicities(s.mults);
  XKind kind{s.kind, s.a, s.omega};
  if (s.mode == CouplingMode::Group) return make_model(std::move(rs), kind);
  CouplingSet cs;
  cs.values = s.couplings;
  return make_model(std::move(rs), kind, std::move(cs));
}

/// The Hamiltonian the check uses, with the negative-control perturbation
/// applied when requested.
inline DiffOp check_hamiltonian(const ModelSpec& model, const SystemSpec& s) {
  if (s.perturb == 0.0) return hamiltonian(model);
  ModelSpec perturbed = model;
  Rational g = perturbed.couplings.get(s.perturb_class);
  // rational approximation of the perturbation factor keeps couplings exact
  Rational factor(static_cast<long long>(std::llround((1.0 + s.perturb) * 10000)),
                  10000);
  perturbed.couplings.values[s.perturb_class] = g * factor;
  return hamiltonian(perturbed);
}

/// Named operator builders surfaced by the CLI and the suites.
inline DiffOp build_operator(const std::string& name, const ModelSpec& model) {
  const RootSystem& rs = model.rs;
  int n = rs.ambient;
  Rational g_edge = model.couplings.get(RootClass::Edge);
  if (name == "H") return hamiltonian(model);
  if (name == "B") return laplace_beltrami_radial(model);
  if (name == "P") return total_momentum(n);
  if (name == "I3" || name == "I4" || name == "I5") {
    if (rs.family != Family::A)
      throw InvalidArgument("operator " + name + " is defined for family A");
    if (name == "I3") return integral_I3_A(n, model.kind, g_edge);
    if (name == "I4") return integral_I4_A(n, model.kind, g_edge);
    return integral_I5_A(n, model.kind, g_edge);
  }
  if (name == "I4B") return integral_I4_B(rs, model.kind, model.couplings);
  if (name.size() > 1 && name[0] == 'J') {
    if (rs.family != Family::A)
      throw InvalidArgument("the J family is defined for family A");
    int k = std::stoi(name.substr(1));
    if (k < 1 || k > n) throw InvalidArgument("J index out of range");
    return J_family(n, model.kind, g_edge)[static_cast<std::size_t>(k - 1)];
  }
  if (name.rfind("Delta", 0) == 0) {
    int k = std::stoi(name.substr(5));
    if (k == 2) return delta2_from_hamiltonian(model);
    DiffOp base = build_operator("I" + std::to_string(k) +
                                     (rs.family == Family::A ? "" : "B"),
                                 model);
    return radial_delta(base, model);
  }
  throw InvalidArgument("unknown operator '" + name + "'");
}

/// Scaling degree of the named operator under (p,q) -> (lambda^-1 p, lambda q)
/// for the homogeneous (rational) potential.
inline int operator_grade(const std::string& name) {
  if (name == "H" || name == "B") return 2;
  if (name == "P") return 1;
  if (name == "I3") return 3;
  if (name == "I4" || name == "I4B") return 4;
  if (name == "I5") return 5;
  if (name.size() > 1 && name[0] == 'J') return std::stoi(name.substr(1));
  if (name.rfind("Delta", 0) == 0) return std::stoi(name.substr(5));
  throw InvalidArgument("no gradation degree for operator '" + name + "'");
}

struct CheckSpec {
  CheckKind check = CheckKind::Commute;
  SystemSpec system;
  std::vector<std::string> ops;  // operators involved, e.g. {"H","I3"}
  int n_points = 25;
  std::optional<double> margin;  // default depends on the region
  std::vector<std::uint64_t> seeds{1, 2};
  double tolerance = defaults_for(CheckKind::Commute);
  std::vector<double> lambdas{0.5, 2.0, 3.0};
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  std::vector<int> table_n{3, 4, 5};

  static double defaults_for(CheckKind k) {
    switch (k) {
      case CheckKind::Lemma1: return 1e-9;
      case CheckKind::FVanish: return 1e-10;
      case CheckKind::Commute: return 1e-8;
      case CheckKind::PairwiseCommute: return 1e-7;
      case CheckKind::Weyl: return 1e-9;
      case CheckKind::Gradation: return 1e-10;
      case CheckKind::Asymptotic: return 0.0;  // structural, no residual
      case CheckKind::TableCouplings: return 0.0;  // exact
    }
    return 1e-8;
  }

  static CheckSpec make(CheckKind k, SystemSpec sys, std::vector<std::string> ops_) {
    CheckSpec out;
    out.check = k;
    out.system = std::move(sys);
    out.ops = std::move(ops_);
    out.tolerance = defaults_for(k);
    if (k == CheckKind::Lemma1) out.n_points = 20;
    if (k == CheckKind::FVanish) out.n_points = 100;
    return out;
  }
};

namespace detail {

inline double default_margin(const Region& region) {
  return region.kind == Region::Kind::Alcove ? 0.25 : 0.3;
}

inline SystemDesc describe(const ModelSpec& model, const SystemSpec& sys) {
  SystemDesc d;
  d.family = family_name(model.rs.family);
  d.rank = model.rs.n;
  d.kind = xfamily_name(model.kind.family);
  d.a = model.kind.a;
  d.omega = model.kind.omega;
  d.mode = sys.mode == CouplingMode::Group ? "group" : "explicit";
  for (const auto& [cls, g] : model.couplings.values)
    d.couplings[root_class_name(cls)] = to_string(g);
  for (RootClass c : {RootClass::Edge, RootClass::Short, RootClass::Long})
    if (model.rs.has_class(c)) d.mults[root_class_name(c)] = model.rs.class_mult(c);
  return d;
}

inline std::vector<std::vector<double>> seed_points(const ModelSpec& model,
                                                    double margin,
                                                    std::uint64_t seed,
                                                    int count) {
  return sample_interior_points(model.rs, model.region(), margin, seed, count);
}

}  // namespace detail

/// Executes one check. Deterministic for fixed spec and seeds.
inline Report run_check(const CheckSpec& cs) {
  Report rep;
  rep.check = check_name(cs.check);
  rep.n_points = cs.n_points;
  rep.seeds = cs.seeds;
  rep.tolerance = cs.tolerance;
  if (cs.seeds.empty()) throw InvalidArgument("at least one seed required");
  if (cs.check == CheckKind::TableCouplings) {
    // exact rational reproduction of every catalog row
    bool ok = true;
    nlohmann::json rows = nlohmann::json::array();
    for (const SpaceEntry& e : catalog()) {
      std::vector<int> ns = e.needs_n ? cs.table_n : std::vector<int>{0};
      for (int n : ns) {
        if (e.needs_n && n < e.min_n) continue;
        nlohmann::json row;
        row["label"] = e.cartan_label;
        if (e.needs_n) row["n"] = n;
        bool row_ok = true;
        for (const auto& cls : e.classes) {
          Rational from_mults = e.coupling_from_mults(cls.cls, n);
          Rational from_table = cls.table_coupling(n);
          row[root_class_name(cls.cls)] = to_string(from_table);
          row_ok = row_ok && from_mults == from_table;
        }
        row["consistent"] = row_ok;
        ok = ok && row_ok;
        rows.push_back(row);
      }
    }
    rep.system.family = "catalog";
    rep.extra["rows"] = rows;
    rep.scale = 1.0;
    rep.residual_max = ok ? 0.0 : 1.0;
    rep.pass = ok;
    return rep;
  }

  ModelSpec model = materialize(cs.system);
  rep.system = detail::describe(model, cs.system);
  double margin = cs.margin.value_or(detail::default_margin(model.region()));
  rep.margin = margin;
  if (cs.system.perturb != 0.0) rep.extra["perturb"] = cs.system.perturb;

  auto note_worst = [&rep](std::uint64_t seed, const std::vector<double>& pt,
                           double value, const std::string& note) {
    rep.details.push_back({seed, pt, value, note});
  };

  switch (cs.check) {
    case CheckKind::Commute:
    case CheckKind::PairwiseCommute: {
      if (cs.ops.size() != 2)
        throw InvalidArgument("commute checks take exactly two operators");
      DiffOp a = cs.ops[0] == "H" ? check_hamiltonian(model, cs.system)
                                  : build_operator(cs.ops[0], model);
      DiffOp b = cs.ops[1] == "H" ? check_hamiltonian(model, cs.system)
                                  : build_operator(cs.ops[1], model);
      DiffOp ab = compose(a, b);
      DiffOp comm = sub(ab, compose(b, a));
      double scale = 0.0, worst = 0.0;
      for (std::uint64_t seed : cs.seeds) {
        auto pts = detail::seed_points(model, margin, seed, cs.n_points);
        scale = std::max(scale, probe_coefficients(ab, pts).max_abs);
        CoeffProbe p = probe_coefficients(comm, pts);
        worst = std::max(worst, p.max_abs);
        note_worst(seed, p.worst_point, p.max_abs, "worst commutator coefficient");
      }
      rep.scale = std::max(scale, 1e-300);
      rep.residual_max = worst;
      rep.pass = worst <= cs.tolerance * rep.scale;
      return rep;
    }
    case CheckKind::Lemma1: {
      if (model.kind.family == XFamily::RationalHarmonic)
        throw InvalidArgument("lemma1 check needs kinds rational/hyperbolic/trig");
      Lemma1Parts parts = lemma1_discrepancy(model);
      DiffOp h = check_hamiltonian(model, cs.system);
      if (cs.system.perturb != 0.0) {
        // rebuild discrepancy against the perturbed Hamiltonian
        DiffOp b = laplace_beltrami_radial(model);
        DiffOp shifted =
            add(b, DiffOp::multiplication(Expr::constant(parts.shift), b.dim()));
        DiffOp g = scale(conjugate(shifted, xi(model)), Complex(-0.5, 0.0));
        parts.discrepancy = sub(g, h);
      }
      double hi = 0.0, spread = 0.0, scale_v = std::abs(parts.shift);
      Complex cmin, cmax;
      bool first = true;
      for (std::uint64_t seed : cs.seeds) {
        auto pts = detail::seed_points(model, margin, seed, cs.n_points);
        scale_v = std::max(scale_v, probe_coefficients(h, pts).max_abs);
        for (const auto& q : pts) {
          EvalContext ctx(q);
          for (const auto& [idx, c] : parts.discrepancy.terms()) {
            Complex v = ctx.eval(c);
            if (order_of(idx) == 0) {
              if (first) {
                cmin = cmax = v;
                first = false;
              }
              if (v.real() < cmin.real()) cmin = v;
              if (v.real() > cmax.real()) cmax = v;
            } else {
              hi = std::max(hi, std::abs(v));
            }
          }
        }
      }
      double constant = first ? 0.0 : 0.5 * (cmin.real() + cmax.real());
      spread = first ? 0.0 : std::abs(cmax - cmin);
      rep.scale = std::max(scale_v, 1.0);
      rep.residual_max = std::max(hi, spread);
      rep.extra["constant"] = constant;
      rep.extra["shift"] = parts.shift;
      bool constant_ok = true;
      if (model.kind.family != XFamily::Trigonometric)
        constant_ok = std::abs(constant) <= cs.tolerance * rep.scale;
      rep.pass = rep.residual_max <= cs.tolerance * rep.scale && constant_ok;
      return rep;
    }
    case CheckKind::FVanish: {
      double worst = 0.0, worst_cross = 0.0;
      for (std::uint64_t seed : cs.seeds) {
        auto pts = sample_interior_points(model.rs, Region::chamber(), margin,
                                          seed, cs.n_points);
        for (const auto& q : pts) {
          FValue f = f_eval(model.rs, q);
          double rel = std::abs(f.value) / std::max(f.scale, 1e-300);
          if (rel > worst) {
            worst = rel;
            if (rep.details.size() < 4)
              note_worst(seed, q, rel, "largest |F|/scale");
          }
          if (model.rs.family == Family::BC) {
            double red = f_reduced_bc(model.rs, q);
            worst_cross = std::max(
                worst_cross, std::abs(f.value - red) / std::max(f.scale, 1e-300));
          }
        }
      }
      rep.scale = 1.0;
      rep.residual_max = std::max(worst, worst_cross);
      if (model.rs.family == Family::BC) rep.extra["reduced_cross"] = worst_cross;
      rep.pass = rep.residual_max <= cs.tolerance;
      return rep;
    }
    case CheckKind::Weyl: {
      if (cs.ops.empty())
        throw InvalidArgument("weyl check needs at least one operator");
      double worst = 0.0, scale_v = 0.0;
      auto gens = weyl_generators(model.rs);
      for (const std::string& name : cs.ops) {
        DiffOp op = build_operator(name, model);
        for (std::uint64_t seed : cs.seeds) {
          auto pts = detail::seed_points(model, margin, seed, cs.n_points);
          double s = probe_coefficients(op, pts).max_abs;
          scale_v = std::max(scale_v, s);
          for (const auto& g : gens) {
            DiffOp moved = pushforward_orthogonal(op, to_real(g));
            CoeffProbe p = probe_coefficients(sub(moved, op), pts);
            worst = std::max(worst, p.max_abs);
          }
        }
      }
      rep.scale = std::max(scale_v, 1e-300);
      rep.residual_max = worst;
      rep.pass = worst <= cs.tolerance * rep.scale;
      return rep;
    }
    case CheckKind::Gradation: {
      if (model.kind.family != XFamily::Rational)
        throw InvalidArgument("gradation is exact for the rational kind only");
      if (cs.ops.empty()) throw InvalidArgument("gradation needs operators");
      double worst = 0.0, scale_v = 0.0;
      for (const std::string& name : cs.ops) {
        DiffOp op = build_operator(name, model);
        int k = operator_grade(name);
        for (std::uint64_t seed : cs.seeds) {
          auto pts = detail::seed_points(model, margin, seed, cs.n_points);
          scale_v = std::max(scale_v, probe_coefficients(op, pts).max_abs);
          for (double lam : cs.lambdas) {
            DiffOp d = sub(grade_scale(op, lam),
                           scale(op, Complex(std::pow(lam, -k), 0.0)));
            worst = std::max(worst, probe_coefficients(d, pts).max_abs);
          }
        }
      }
      rep.scale = std::max(scale_v, 1e-300);
      rep.residual_max = worst;
      rep.pass = worst <= cs.tolerance * rep.scale;
      return rep;
    }
    case CheckKind::Asymptotic: {
      // coefficients of the named operator built on the curved potential
      // approach the flat (rational) ones as q -> 0 along a chamber ray
      std::string name = cs.ops.empty() ? std::string("I3") : cs.ops[0];
      if (model.kind.family == XFamily::Rational)
        throw InvalidArgument("asymptotic check compares a curved kind to rational");
      ModelSpec flat = model;
      flat.kind.family = XFamily::Rational;
      DiffOp curved = build_operator(name, model);
      DiffOp flat_op = build_operator(name, flat);
      bool ok = true;
      nlohmann::json devs = nlohmann::json::array();
      for (std::uint64_t seed : cs.seeds) {
        auto u = sample_interior_point(model.rs, Region::chamber(), 0.3, seed);
        double norm = 0.0;
        for (double x : u) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : u) x /= norm;
        std::vector<double> r;
        for (double eps : cs.epsilons) {
          std::vector<double> q(u.size());
          for (std::size_t i = 0; i < u.size(); ++i) q[i] = eps * u[i];
          EvalContext ctx(q);
          double dev = 0.0;
          for (const auto& [idx, c] : curved.terms()) {
            Complex vc = ctx.eval(c);
            Complex vf(0.0, 0.0);
            auto it = flat_op.terms().find(idx);
            if (it != flat_op.terms().end()) vf = ctx.eval(it->second);
            double denom = std::max(std::abs(vf), 1e-300);
            dev = std::max(dev, std::abs(vc - vf) / denom);
          }
          r.push_back(dev);
        }
        devs.push_back(r);
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
          double ratio_bound =
              std::pow(cs.epsilons[i + 1] / cs.epsilons[i], 0.9);
          if (!(r[i + 1] < r[i]) || !(r[i + 1] <= r[i] * ratio_bound)) ok = false;
        }
        rep.residual_max = std::max(rep.residual_max, r.back());
      }
      rep.extra["epsilons"] = cs.epsilons;
      rep.extra["deviations"] = devs;
      rep.scale = 1.0;
      rep.pass = ok;
      return rep;
    }
    default:
      throw InvalidArgument("unhandled check kind");
  }
}

// ---------------------------------------------------------------------------
// Calibration: least squares for scalars entering an operator linearly,
// fitted so the commutator with H vanishes at the sample points. Plain
// normal equations with an explicit rank check; intended for small, well
// separated bases (m <= 8).

struct CalibrationResult {
  std::vector<double> coefficients;
  double residual = 0.0;  // max |commutator coefficient| after the fit
  double scale = 1.0;
  int rank = 0;
  bool rank_ok = false;
};

inline CalibrationResult calibrate(const DiffOp& h, const DiffOp& base,
                                   const std::vector<DiffOp>& basis,
                                   const std::vector<std::vector<double>>& points) {
  if (basis.size() > 8)
    throw InvalidArgument("calibration supports at most 8 unknowns");
  DiffOp k0 = commutator(h, base);
  std::vector<DiffOp> ks;
  ks.reserve(basis.size());
  for (const auto& t : basis) ks.push_back(commutator(h, t));
  std::set<MultiIndex> support;
  for (const auto& [i, c] : k0.terms()) support.insert(i);
  for (const auto& k : ks)
    for (const auto& [i, c] : k.terms()) support.insert(i);

  const std::size_t m = basis.size();
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  auto coeff_at = [](const DiffOp& op, const MultiIndex& idx,
                     EvalContext& ctx) -> Complex {
    auto it = op.terms().find(idx);
    return it == op.terms().end() ? Complex(0.0, 0.0) : ctx.eval(it->second);
  };
  for (const auto& q : points) {
    EvalContext ctx(q);
    for (const auto& idx : support) {
      Complex b0 = coeff_at(k0, idx, ctx);
      std::vector<Complex> a(m);
      for (std::size_t i = 0; i < m; ++i) a[i] = coeff_at(ks[i], idx, ctx);
      for (int part = 0; part < 2; ++part) {
        std::vector<double> row(m);
        for (std::size_t i = 0; i < m; ++i)
          row[i] = part ? a[i].imag() : a[i].real();
        rows.push_back(std::move(row));
        rhs.push_back(part ? -b0.imag() : -b0.real());
      }
    }
  }
  // normal equations
  std::vector<std::vector<double>> normal(m, std::vector<double>(m, 0.0));
  std::vector<double> nrhs(m, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < m; ++i) {
      nrhs[i] += rows[r][i] * rhs[r];
      for (std::size_t j = 0; j < m; ++j)
        normal[i][j] += rows[r][i] * rows[r][j];
    }
  }
  double diag_max = 0.0;
  for (std::size_t i = 0; i < m; ++i) diag_max = std::max(diag_max, normal[i][i]);
  CalibrationResult out;
  out.coefficients.assign(m, 0.0);
  // pivoted elimination with rank detection
  std::vector<double> c(nrhs);
  auto a = normal;
  int rank = 0;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) <= 1e-12 * diag_max) continue;  // deficient direction
    std::swap(a[col], a[piv]);
    std::swap(c[col], c[piv]);
    ++rank;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (std::size_t j = 0; j < m; ++j) a[r][j] -= f * a[col][j];
      c[r] -= f * c[col];
    }
  }
  out.rank = rank;
  out.rank_ok = rank == static_cast<int>(m);
  if (out.rank_ok)
    for (std::size_t i = 0; i < m; ++i) out.coefficients[i] = c[i] / a[i][i];
  // measured residual of the fitted operator
  double worst = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double v = -rhs[r];
    for (std::size_t i = 0; i < m; ++i) v += rows[r][i] * out.coefficients[i];
    worst = std::max(worst, std::abs(v));
  }
  out.residual = worst;
  double scale_v = 0.0;
  for (const auto& q : points) {
    EvalContext ctx(q);
    for (const auto& [idx, cc] : k0.terms())
      scale_v = std::max(scale_v, std::abs(ctx.eval(cc)));
  }
  out.scale = std::max(scale_v, 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Suite execution.

struct SuiteConfig {
  std::vector<CheckSpec> checks;
  bool fail_fast = false;
};

inline std::vector<Report> run_suite(const SuiteConfig& config) {
  std::vector<Report> out;
  out.reserve(config.checks.size());
  for (const CheckSpec& cs : config.checks) {
    out.push_back(run_check(cs));
    if (config.fail_fast && !out.back().pass) break;
  }
  return out;
}

/// The default suite: the full identity/commutation/invariance battery at
/// the pinned tolerances.
inline std::vector<CheckSpec> default_suite() {
  std::vector<CheckSpec> checks;
  auto sys = [](Family f, int rank, XFamily kind,
                std::map<RootClass, int> mults = {}) {
    SystemSpec s;
    s.family = f;
    s.rank = rank;
    s.kind = kind;
    s.mults = std::move(mults);
    return s;
  };
  auto sys_explicit = [](Family f, int rank, XFamily kind,
                         std::map<RootClass, Rational> couplings) {
    SystemSpec s;
    s.family = f;
    s.rank = rank;
    s.kind = kind;
    s.mode = CouplingMode::Explicit;
    s.couplings = std::move(couplings);
    return s;
  };

  // coupling tables
  checks.push_back(CheckSpec::make(CheckKind::TableCouplings, {}, {}));

  // F(q) == 0 and the non-reduced cross-check
  for (auto [f, r] : {std::pair{Family::A, 4}, {Family::B, 3}, {Family::C, 3},
                      {Family::D, 4}, {Family::G, 2}})
    checks.push_back(CheckSpec::make(CheckKind::FVanish,
                                     sys(f, r, XFamily::Hyperbolic), {}));
  for (int r : {2, 3})
    checks.push_back(CheckSpec::make(
        CheckKind::FVanish,
        sys(Family::BC, r, XFamily::Hyperbolic,
            {{RootClass::Edge, 4}, {RootClass::Short, 4}, {RootClass::Long, 1}}),
        {}));

  // conjugation identity, hyperbolic + rational
  for (XFamily kind : {XFamily::Hyperbolic, XFamily::Rational}) {
    checks.push_back(CheckSpec::make(CheckKind::Lemma1, sys(Family::A, 3, kind), {}));
    checks.push_back(CheckSpec::make(CheckKind::Lemma1, sys(Family::A, 4, kind), {}));
    checks.push_back(CheckSpec::make(
        CheckKind::Lemma1,
        sys(Family::B, 2, kind, {{RootClass::Edge, 1}, {RootClass::Short, 2}}), {}));
    checks.push_back(CheckSpec::make(
        CheckKind::Lemma1,
        sys(Family::B, 3, kind, {{RootClass::Edge, 1}, {RootClass::Short, 4}}), {}));
    checks.push_back(CheckSpec::make(
        CheckKind::Lemma1,
        sys(Family::C, 3, kind, {{RootClass::Edge, 1}, {RootClass::Long, 3}}), {}));
    checks.push_back(CheckSpec::make(CheckKind::Lemma1, sys(Family::D, 4, kind), {}));
    checks.push_back(CheckSpec::make(
        CheckKind::Lemma1,
        sys(Family::BC, 2, kind,
            {{RootClass::Edge, 4}, {RootClass::Short, 4}, {RootClass::Long, 1}}),
        {}));
    checks.push_back(CheckSpec::make(
        CheckKind::Lemma1,
        sys(Family::BC, 3, kind,
            {{RootClass::Edge, 2}, {RootClass::Short, 2}, {RootClass::Long, 1}}),
        {}));
    checks.push_back(CheckSpec::make(
        CheckKind::Lemma1,
        sys(Family::G, 2, kind, {{RootClass::Edge, 1}, {RootClass::Long, 2}}), {}));
  }

  // commutation at group couplings: A series
  for (int n : {3, 4, 5})
    for (XFamily kind :
         {XFamily::Rational, XFamily::Hyperbolic, XFamily::Trigonometric})
      for (const char* g2 : {"-1/4", "2"})
        for (const char* op : {"I3", "I4", "I5"}) {
          auto s = sys_explicit(Family::A, n, kind,
                                {{RootClass::Edge, parse_rational(g2)}});
          checks.push_back(CheckSpec::make(CheckKind::Commute, s, {"H", op}));
        }

  // commutation: B family fourth integral at the catalog rows
  {
    auto push_b = [&](Family f, int rank, std::map<RootClass, Rational> cpl) {
      for (XFamily kind :
           {XFamily::Rational, XFamily::Hyperbolic, XFamily::Trigonometric})
        checks.push_back(CheckSpec::make(
            CheckKind::Commute, sys_explicit(f, rank, kind, cpl), {"H", "I4B"}));
    };
    for (int n : {3, 4, 5})  // BD I rows on B2
      push_b(Family::B, 2,
             {{RootClass::Edge, Rational(-1, 4)},
              {RootClass::Short, Rational((n - 2) * (n - 4), 8)}});
    push_b(Family::B, 2, {{RootClass::Edge, Rational(3, 4)},
                          {RootClass::Short, Rational(1)}});  // C II(2,2)
    push_b(Family::C, 2, {{RootClass::Edge, Rational(-1, 4)},
                          {RootClass::Long, Rational(-1, 2)}});
    push_b(Family::C, 2,
           {{RootClass::Edge, Rational(2)}, {RootClass::Long, Rational(3, 2)}});
    push_b(Family::D, 3, {{RootClass::Edge, Rational(-1, 4)}});
    push_b(Family::D, 3, {{RootClass::Edge, Rational(2)}});
    for (int n : {3, 4, 5})  // A III rows on BC2
      push_b(Family::BC, 2,
             {{RootClass::Edge, Rational(0)},
              {RootClass::Short, Rational((n - 2) * (n - 2), 2)},
              {RootClass::Long, Rational(-1, 2)}});
    for (int n : {3, 4, 5})  // C II(n,2) rows on BC2
      push_b(Family::BC, 2,
             {{RootClass::Edge, Rational(2)},
              {RootClass::Short, Rational(2 * (n - 1) * (n - 2))},
              {RootClass::Long, Rational(3, 2)}});
    push_b(Family::BC, 2, {{RootClass::Edge, Rational(2)},
                           {RootClass::Short, Rational(2)},
                           {RootClass::Long, Rational(-1, 2)}});  // D III
    push_b(Family::BC, 2, {{RootClass::Edge, Rational(6)},
                           {RootClass::Short, Rational(8)},
                           {RootClass::Long, Rational(-1, 2)}});  // E III
  }

  // J family commutation and pairwise commutativity
  for (int n : {2, 3, 4})
    for (XFamily kind : {XFamily::Rational, XFamily::Hyperbolic}) {
      auto s = sys_explicit(Family::A, n, kind,
                            {{RootClass::Edge, Rational(2)}});
      for (int k = 1; k <= n; ++k)
        checks.push_back(CheckSpec::make(CheckKind::Commute, s,
                                         {"H", "J" + std::to_string(k)}));
      for (int k = 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l)
          checks.push_back(CheckSpec::make(
              CheckKind::PairwiseCommute, s,
              {"J" + std::to_string(k), "J" + std::to_string(l)}));
    }

  // pairwise commutativity of the explicit integrals
  for (int n : {3, 4}) {
    auto s = sys_explicit(Family::A, n, XFamily::Rational,
                          {{RootClass::Edge, Rational(2)}});
    checks.push_back(CheckSpec::make(CheckKind::PairwiseCommute, s, {"I3", "I4"}));
  }

  // structure checks
  {
    auto s = sys_explicit(Family::A, 3, XFamily::Rational,
                          {{RootClass::Edge, Rational(2)}});
    checks.push_back(
        CheckSpec::make(CheckKind::Gradation, s, {"H", "I3", "I4", "J2", "J3"}));
    checks.push_back(CheckSpec::make(CheckKind::Weyl, s, {"H", "I3", "I4", "J2"}));
    auto s2 = sys_explicit(Family::A, 3, XFamily::Hyperbolic,
                           {{RootClass::Edge, Rational(2)}});
    checks.push_back(CheckSpec::make(CheckKind::Asymptotic, s2, {"I3"}));
    auto sb = sys_explicit(Family::B, 2, XFamily::Hyperbolic,
                           {{RootClass::Edge, Rational(3, 4)},
                            {RootClass::Short, Rational(1)}});
    checks.push_back(CheckSpec::make(CheckKind::Weyl, sb, {"H", "I4B"}));
  }
  return checks;
}

}  // namespace rootops
