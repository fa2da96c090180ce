#pragma once

// Winding parities: crossing -> element of a coefficient group A, with a
// fixed element a governing the crossing change along S^1. Built-in kinds:
//
//   label                      Z/deg, a = -1
//   label-mod:<n>              Z/n (n | deg), a = -1
//   gauss                      Z_2, a = 0
//   homological                H_1(S_g x S^1)/[K], a = -[pt x S^1]
//   homological-s1             projection of the above to Z/deg
//   homological-sg-oriented    sgn(c) times the projection to H_1(S_g)/[K]_g
//
// check_axioms() replays a trace and tests A1-A5 step by step.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "windpar/abelian.hpp"
#include "windpar/diagram.hpp"
#include "windpar/trace.hpp"

namespace windpar {

enum class ParityKind { label, label_mod, gauss, homological, homological_s1, homological_sg_oriented };

struct ParitySpec {
  ParityKind kind = ParityKind::label;
  std::int64_t modulus = 0; // label-mod only

  std::string name() const {
    switch (kind) {
    case ParityKind::label: return "label";
    case ParityKind::label_mod: return "label-mod:" + std::to_string(modulus);
    case ParityKind::gauss: return "gauss";
    case ParityKind::homological: return "homological";
    case ParityKind::homological_s1: return "homological-s1";
    case ParityKind::homological_sg_oriented: return "homological-sg-oriented";
    }
    return "?";
  }
  bool oriented() const { return kind == ParityKind::homological_sg_oriented; }
};

inline ParitySpec parse_parity_kind(const std::string &s) {
  static const std::map<std::string, ParityKind> plain = {
      {"label", ParityKind::label},
      {"gauss", ParityKind::gauss},
      {"homological", ParityKind::homological},
      {"homological-s1", ParityKind::homological_s1},
      {"homological-sg-oriented", ParityKind::homological_sg_oriented}};
  if (auto it = plain.find(s); it != plain.end())
    return {it->second, 0};
  const std::string prefix = "label-mod:";
  if (s.rfind(prefix, 0) == 0) {
    const std::string digits = s.substr(prefix.size());
    if (!digits.empty() && digits.size() < 18 &&
        std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      const auto n = std::stoll(digits);
      if (n > 0)
        return {ParityKind::label_mod, n};
    }
  }
  throw UnknownParityKind("'" + s + "' (expected label, label-mod:<n>, gauss, homological, "
                          "homological-s1 or homological-sg-oriented)");
}

enum class ParityOrigin { label, gauss, homological, projected, oriented };

struct ParityAssignment {
  GroupPtr group;
  GroupElement fixed;
  std::map<CrossingId, GroupElement> values;
  ParityOrigin origin = ParityOrigin::label;

  const GroupElement &at(CrossingId c) const {
    auto it = values.find(c);
    if (it == values.end())
      throw UnknownCrossing("crossing " + std::to_string(c) + " has no parity value");
    return it->second;
  }
};

inline ParityAssignment label_parity(const Diagram &d) {
  ParityAssignment p;
  p.group = cyclic_group(degree(d));
  p.fixed = canonical(p.group, {-1});
  for (auto c : d.crossing_ids())
    p.values.emplace(c, canonical(p.group, {raw_crossing_label(d, c)}));
  return p;
}

inline ParityAssignment label_parity_mod(const Diagram &d, std::int64_t n) {
  const std::int64_t deg = degree(d);
  if (n <= 0)
    throw BadModulus("modulus must be positive, got " + std::to_string(n));
  if (deg != 0 && deg % n != 0)
    throw BadModulus(std::to_string(n) + " does not divide the degree " + std::to_string(deg));
  ParityAssignment p;
  p.group = cyclic_group(n);
  p.fixed = canonical(p.group, {-1});
  for (auto c : d.crossing_ids())
    p.values.emplace(c, canonical(p.group, {raw_crossing_label(d, c)}));
  return p;
}

/// Number of crossings interleaved with c (exactly one passage strictly
/// between the two passages of c).
inline std::size_t interleaving_count(const Diagram &d, CrossingId c) {
  const auto &s = d.sites(c);
  const std::size_t lo = std::min(s.over, s.under), hi = std::max(s.over, s.under);
  std::map<CrossingId, int> inside;
  for (std::size_t i = lo + 1; i < hi; ++i)
    if (const auto *p = as_passage(d.code()[i]))
      ++inside[p->id];
  std::size_t count = 0;
  for (const auto &[id, k] : inside)
    count += k == 1 ? 1 : 0;
  return count;
}

inline ParityAssignment gaussian_parity(const Diagram &d) {
  ParityAssignment p;
  p.origin = ParityOrigin::gauss;
  p.group = cyclic_group(2);
  p.fixed = zero_element(p.group);
  for (auto c : d.crossing_ids())
    p.values.emplace(c, canonical(p.group, {static_cast<std::int64_t>(interleaving_count(d, c))}));
  return p;
}

inline GroupPtr homological_group(const Diagram &d) {
  return quotient(2 * d.genus() + 1, {to_big(knot_class(d))});
}

inline ParityAssignment homological_parity(const Diagram &d) {
  ParityAssignment p;
  p.origin = ParityOrigin::homological;
  p.group = homological_group(d);
  BigVec a(2 * d.genus() + 1);
  a.back() = -1;
  p.fixed = canonical(p.group, a);
  for (auto c : d.crossing_ids())
    p.values.emplace(c, canonical(p.group, to_big(half_curve_class(d, c))));
  return p;
}

namespace detail {

inline void require_homological(const ParityAssignment &p, const char *what) {
  if (p.origin != ParityOrigin::homological)
    throw NotHomological(std::string(what) + " needs an assignment produced by homological_parity");
}

template <typename Project>
ParityAssignment project(const ParityAssignment &p, GroupPtr target, Project proj) {
  ParityAssignment out;
  out.origin = ParityOrigin::projected;
  out.group = std::move(target);
  out.fixed = canonical(out.group, proj(p.fixed.rep()));
  for (const auto &[c, v] : p.values)
    out.values.emplace(c, canonical(out.group, proj(v.rep())));
  return out;
}

} // namespace detail

/// p_2: the S^1 coordinate, in Z/deg.
inline ParityAssignment project_s1(const ParityAssignment &p) {
  detail::require_homological(p, "project_s1");
  const auto &k = p.group->relations();
  const BigInt deg = k.cols() ? k(k.rows() - 1, 0) : BigInt(0);
  return detail::project(p, cyclic_group(deg), [](const BigVec &v) { return BigVec{v.back()}; });
}

/// p_1: the S_g coordinates, in H_1(S_g)/[K]_g.
inline ParityAssignment project_sg(const ParityAssignment &p) {
  detail::require_homological(p, "project_sg");
  const auto &k = p.group->relations();
  const std::size_t n = k.rows() - 1;
  BigVec kg(n);
  for (std::size_t i = 0; i < n && k.cols(); ++i)
    kg[i] = k(i, 0);
  return detail::project(p, quotient(n, {kg}), [n](const BigVec &v) {
    return BigVec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
  });
}

inline ParityAssignment oriented_from(const ParityAssignment &p, const Diagram &d) {
  if (!p.fixed.is_zero())
    throw NonzeroFixedElement("fixed element is " + p.fixed.str() + ", not 0");
  ParityAssignment out = p;
  out.origin = ParityOrigin::oriented;
  for (auto &[c, v] : out.values)
    if (crossing_sign(d, c) < 0)
      v = -v;
  return out;
}

inline bool is_even(const Diagram &d, CrossingId c) { return crossing_label(d, c).reduced.is_zero(); }

inline ParityAssignment compute_parity(const Diagram &d, const ParitySpec &spec) {
  switch (spec.kind) {
  case ParityKind::label: return label_parity(d);
  case ParityKind::label_mod: return label_parity_mod(d, spec.modulus);
  case ParityKind::gauss: return gaussian_parity(d);
  case ParityKind::homological: return homological_parity(d);
  case ParityKind::homological_s1: return project_s1(homological_parity(d));
  case ParityKind::homological_sg_oriented: return oriented_from(project_sg(homological_parity(d)), d);
  }
  throw UnknownParityKind("unhandled kind");
}

/// h(v1) - h(v2) + h(v3) on raw half-curve classes. For a valid R3 triple this
/// is 0 or [K].
inline IntVec r3_raw_defect(const Diagram &d, const std::array<CrossingId, 3> &roles) {
  IntVec v = half_curve_class(d, roles[0]);
  v -= half_curve_class(d, roles[1]);
  v += half_curve_class(d, roles[2]);
  return v;
}

/// Integer k with v = k K, if any.
inline std::optional<std::int64_t> multiple_of(const IntVec &v, const IntVec &k) {
  std::optional<std::int64_t> factor;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (k[i] == 0) {
      if (v[i] != 0)
        return std::nullopt;
      continue;
    }
    if (v[i] % k[i] != 0)
      return std::nullopt;
    const auto f = v[i] / k[i];
    if (factor && *factor != f)
      return std::nullopt;
    factor = f;
  }
  return factor.value_or(0);
}

// ---- axiom checker --------------------------------------------------------

enum class Axiom { a1, a2, a3, a4, a5 };
inline constexpr std::array<Axiom, 5> all_axioms = {Axiom::a1, Axiom::a2, Axiom::a3, Axiom::a4, Axiom::a5};

inline const char *name(Axiom a) {
  static const char *names[] = {"A1", "A2", "A3", "A4", "A5"};
  return names[static_cast<int>(a)];
}

struct Counterexample {
  std::size_t step = 0;
  Axiom axiom = Axiom::a1;
  std::vector<CrossingId> crossings;
  std::string expected, actual;
};

struct AxiomReport {
  std::array<std::size_t, 5> pass{}, fail{};
  std::vector<Counterexample> counterexamples;

  bool ok() const { return counterexamples.empty(); }
  std::size_t passed(Axiom a) const { return pass[static_cast<int>(a)]; }
  std::size_t failed(Axiom a) const { return fail[static_cast<int>(a)]; }
};

/// Test hook: from diagram `from_diagram` on, the value of `crossing` is
/// shifted by the first ambient generator that is nonzero in the group.
struct FaultInjection {
  CrossingId crossing = 0;
  std::size_t from_diagram = 0;
};

/// Parity of every diagram in the trace, with an optional injected fault.
inline std::vector<ParityAssignment> trace_parities(const MoveTrace &t, const ParitySpec &spec,
                                                    const std::optional<FaultInjection> &fault = {}) {
  std::vector<ParityAssignment> out;
  out.reserve(t.diagram_count());
  for (std::size_t i = 0; i < t.diagram_count(); ++i) {
    out.push_back(compute_parity(t.diagram(i), spec));
    if (fault && i >= fault->from_diagram) {
      auto it = out.back().values.find(fault->crossing);
      if (it != out.back().values.end()) {
        const auto &g = out.back().group;
        for (std::size_t k = 0; k < g->rank(); ++k) {
          BigVec unit(g->rank());
          unit[k] = 1;
          if (const auto shift = canonical(g, unit); !shift.is_zero()) {
            it->second = it->second + shift;
            break;
          }
        }
      }
    }
  }
  return out;
}

inline AxiomReport check_axioms(const MoveTrace &t, const ParitySpec &spec,
                                const std::optional<FaultInjection> &fault = {}) {
  const auto ps = trace_parities(t, spec, fault);
  AxiomReport r;
  auto record = [&](std::size_t step, Axiom a, std::vector<CrossingId> cs, const GroupElement &expected,
                    const GroupElement &actual) {
    if (expected == actual) {
      ++r.pass[static_cast<int>(a)];
    } else {
      ++r.fail[static_cast<int>(a)];
      r.counterexamples.push_back({step, a, std::move(cs), expected.str(), actual.str()});
    }
  };
  for (std::size_t s = 0; s < t.steps.size(); ++s) {
    const auto &step = t.steps[s];
    const auto &c = step.correspondence;
    const auto &src = ps[s], &dst = ps[s + 1];
    const auto zero = zero_element(src.group);
    for (const auto &[from, to] : c.surviving)
      if (from != c.m4_target)
        record(s, Axiom::a1, {from, to}, src.at(from), dst.at(to));
    switch (step.move.kind) {
    case MoveKind::r1_remove:
      for (auto v : c.destroyed)
        record(s, Axiom::a2, {v}, zero, src.at(v));
      break;
    case MoveKind::r1_add:
      for (auto v : c.created)
        record(s, Axiom::a2, {v}, zero_element(dst.group), dst.at(v));
      break;
    case MoveKind::r2_remove:
    case MoveKind::r2_add: {
      const bool removing = step.move.kind == MoveKind::r2_remove;
      const auto &pair = removing ? c.destroyed : c.created;
      const auto &p = removing ? src : dst;
      const CrossingId a = *pair.begin(), b = *pair.rbegin();
      // Oriented parities see the opposite signs of a bigon: values cancel.
      if (spec.oriented())
        record(s, Axiom::a3, {a, b}, zero_element(p.group), p.at(a) + p.at(b));
      else
        record(s, Axiom::a3, {a, b}, p.at(a), p.at(b));
      break;
    }
    case MoveKind::r3:
      if (!spec.oriented() && c.r3_roles) {
        const auto [x, y, z] = *c.r3_roles;
        record(s, Axiom::a4, {x, y, z}, zero, src.at(x) - src.at(y) + src.at(z));
        record(s, Axiom::a4, {x, y, z}, zero_element(dst.group), dst.at(x) - dst.at(y) + dst.at(z));
      }
      break;
    case MoveKind::m4prime:
      if (!spec.oriented() && c.m4_target) {
        const CrossingId v = *c.m4_target;
        record(s, Axiom::a5, {v}, src.fixed - src.at(v), dst.at(v));
      }
      break;
    default:
      break;
    }
  }
  return r;
}

} // namespace windpar
