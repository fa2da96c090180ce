#pragma once

// Finitely generated piece of the universal winding parity group spanned by
// one trace. Generators are 1_{i,v} (diagram i of the trace, crossing v) in
// (i, v) order, followed by the distinguished generator 1. Relations per step:
//
//   type 1  1_{i+1,f(v)} - 1_{i,v}            surviving crossings (not the M4 target)
//   type 2  1_{j,a} - 1_{j,b}                 the two crossings of an R2 move
//   type 3  1_{i,v1} - 1_{i,v2} + 1_{i,v3}    R3 triple
//   type 4  1_{i+1,v} + 1_{i,v} - 1           crossing change along S^1
//   type 5  1_{j,v}                           R1 crossing
//
// The group itself is computed after identifying generators joined by type-1
// relations, which leaves a presentation of the same group that is far smaller.

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "windpar/abelian.hpp"
#include "windpar/parity.hpp"
#include "windpar/trace.hpp"

namespace windpar {

struct Relation {
  int type = 1;
  std::size_t step = 0;
  std::map<std::size_t, BigInt> terms; // generator index -> coefficient
  std::string note;

  BigVec dense(std::size_t n) const {
    BigVec v(n);
    for (const auto &[g, c] : terms)
      v.at(g) += c;
    return v;
  }
};

struct UniversalPresentation {
  /// (diagram index, crossing id) per generator; the last generator is 1.
  std::vector<std::pair<std::size_t, CrossingId>> generators;
  std::size_t one = 0;
  std::vector<Relation> relations;

  /// Generator -> reduced generator (classes of the type-1 identification).
  std::vector<std::size_t> reduced_index;
  std::vector<std::size_t> reduced_members; // first full generator of each reduced one
  GroupPtr group;
  std::map<std::pair<std::size_t, CrossingId>, GroupElement> classes;
  GroupElement one_class;

  std::size_t generator(std::size_t diagram, CrossingId c) const {
    auto it = index_.find({diagram, c});
    if (it == index_.end())
      throw MalformedTrace("no crossing " + std::to_string(c) + " in diagram " + std::to_string(diagram));
    return it->second;
  }
  std::size_t generator_count() const { return generators.size(); }

private:
  friend UniversalPresentation build_universal(const MoveTrace &t);
  std::map<std::pair<std::size_t, CrossingId>, std::size_t> index_;
};

namespace detail {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x)
      x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b)
      parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

// A type-1 relation is exactly g_a - g_b with a != b.
inline std::optional<std::pair<std::size_t, std::size_t>> plain_equality(const Relation &r) {
  if (r.terms.size() != 2)
    return std::nullopt;
  auto first = r.terms.begin(), second = std::next(first);
  if ((first->second == 1 && second->second == -1) || (first->second == -1 && second->second == 1))
    return std::make_pair(first->first, second->first);
  return std::nullopt;
}

} // namespace detail

/// Recomputes group, classes and one_class from `relations`. Relations that
/// are plain equalities g_a = g_b are used to merge generators first.
inline void rebuild_group(UniversalPresentation &u) {
  const std::size_t n = u.generators.size();
  detail::UnionFind uf(n);
  std::vector<bool> merged(u.relations.size(), false);
  for (std::size_t k = 0; k < u.relations.size(); ++k)
    if (u.relations[k].type == 1)
      if (auto eq = detail::plain_equality(u.relations[k])) {
        uf.unite(eq->first, eq->second);
        merged[k] = true;
      }
  u.reduced_index.assign(n, 0);
  u.reduced_members.clear();
  std::map<std::size_t, std::size_t> root_to_reduced;
  for (std::size_t g = 0; g < n; ++g) {
    const auto root = uf.find(g);
    auto [it, inserted] = root_to_reduced.emplace(root, u.reduced_members.size());
    if (inserted)
      u.reduced_members.push_back(g);
    u.reduced_index[g] = it->second;
  }
  const std::size_t rank = u.reduced_members.size();
  std::vector<BigVec> rels;
  for (std::size_t k = 0; k < u.relations.size(); ++k) {
    if (merged[k])
      continue;
    BigVec v(rank);
    for (const auto &[g, c] : u.relations[k].terms)
      v[u.reduced_index[g]] += c;
    if (std::any_of(v.begin(), v.end(), [](const BigInt &x) { return !x.is_zero(); }))
      rels.push_back(std::move(v));
  }
  u.group = quotient(rank, rels);
  auto unit = [&](std::size_t g) {
    BigVec v(rank);
    v[u.reduced_index[g]] = 1;
    return canonical(u.group, v);
  };
  u.classes.clear();
  for (std::size_t g = 0; g < n; ++g)
    if (g != u.one)
      u.classes.emplace(u.generators[g], unit(g));
  u.one_class = unit(u.one);
}

inline UniversalPresentation build_universal(const MoveTrace &t) {
  UniversalPresentation u;
  for (std::size_t i = 0; i < t.diagram_count(); ++i)
    for (auto c : t.diagram(i).crossing_ids()) {
      u.index_[{i, c}] = u.generators.size();
      u.generators.emplace_back(i, c);
    }
  u.one = u.generators.size();
  u.generators.emplace_back(t.diagram_count(), 0);

  auto add = [&](int type, std::size_t step, std::vector<std::pair<std::size_t, int>> terms, std::string note) {
    Relation r{type, step, {}, std::move(note)};
    for (const auto &[g, c] : terms)
      r.terms[g] += c;
    for (auto it = r.terms.begin(); it != r.terms.end();)
      it = it->second.is_zero() ? r.terms.erase(it) : std::next(it);
    u.relations.push_back(std::move(r));
  };
  auto gen = [&](std::size_t i, CrossingId c) { return u.generator(i, c); };

  for (std::size_t s = 0; s < t.steps.size(); ++s) {
    const auto &step = t.steps[s];
    const auto &c = step.correspondence;
    const std::string at = "step " + std::to_string(s) + " " + name(step.move.kind);
    for (const auto &[from, to] : c.surviving) {
      if (from == c.m4_target)
        continue;
      add(1, s, {{gen(s + 1, to), 1}, {gen(s, from), -1}},
          at + ": " + std::to_string(from) + " -> " + std::to_string(to));
    }
    switch (step.move.kind) {
    case MoveKind::r2_remove:
    case MoveKind::r2_add: {
      const bool removing = step.move.kind == MoveKind::r2_remove;
      const auto &pair = removing ? c.destroyed : c.created;
      if (pair.size() != 2)
        throw MalformedTrace(at + ": expected two crossings");
      const std::size_t i = removing ? s : s + 1;
      add(2, s, {{gen(i, *pair.begin()), 1}, {gen(i, *pair.rbegin()), -1}}, at);
      break;
    }
    case MoveKind::r3: {
      if (!c.r3_roles)
        throw MalformedTrace(at + ": missing r3_roles");
      const auto [x, y, z] = *c.r3_roles;
      add(3, s, {{gen(s, x), 1}, {gen(s, y), -1}, {gen(s, z), 1}},
          at + ": (" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")");
      break;
    }
    case MoveKind::m4prime: {
      if (!c.m4_target)
        throw MalformedTrace(at + ": missing m4_target");
      const CrossingId v = *c.m4_target;
      add(4, s, {{gen(s + 1, v), 1}, {gen(s, v), 1}, {u.one, -1}}, at + ": " + std::to_string(v));
      break;
    }
    case MoveKind::r1_remove:
      for (auto v : c.destroyed)
        add(5, s, {{gen(s, v), 1}}, at + ": " + std::to_string(v));
      break;
    case MoveKind::r1_add:
      for (auto v : c.created)
        add(5, s, {{gen(s + 1, v), 1}}, at + ": " + std::to_string(v));
      break;
    default:
      break;
    }
  }
  rebuild_group(u);
  return u;
}

/// Self-test hook: flips the sign of the last term of relation k and
/// recomputes the group.
inline void corrupt_relation(UniversalPresentation &u, std::size_t k) {
  if (k >= u.relations.size())
    throw Error("UsageError", "relation index out of range");
  auto &terms = u.relations[k].terms;
  if (terms.empty())
    throw Error("UsageError", "relation is empty");
  terms.rbegin()->second = -terms.rbegin()->second;
  rebuild_group(u);
}

struct FactorWitness {
  std::size_t relation = 0; // index into UniversalPresentation::relations
  GroupElement image;       // nonzero
};

using FactorResult = std::variant<Hom, FactorWitness>;

namespace detail {

inline GroupElement image_of(const Relation &r, const std::vector<GroupElement> &images, const GroupPtr &target) {
  GroupElement acc = zero_element(target);
  for (const auto &[g, c] : r.terms)
    acc = acc + c * images[g];
  return acc;
}

} // namespace detail

/// rho: U -> A with 1_{i,v} -> p_i(v) and 1 -> a, or the first relation whose
/// image is nonzero.
inline FactorResult factor(const UniversalPresentation &u, const std::vector<ParityAssignment> &parities) {
  if (parities.empty())
    throw IncompatibleGroups("no parity assignments");
  const GroupPtr target = parities.front().group;
  for (std::size_t i = 0; i < parities.size(); ++i)
    if (!parities[i].group->same_group(*target) || !(parities[i].fixed == parities.front().fixed))
      throw IncompatibleGroups("coefficient group or fixed element changes at diagram " + std::to_string(i));
  std::vector<GroupElement> images;
  images.reserve(u.generators.size());
  for (std::size_t g = 0; g < u.generators.size(); ++g) {
    if (g == u.one) {
      images.push_back(parities.front().fixed);
      continue;
    }
    const auto [i, c] = u.generators[g];
    if (i >= parities.size())
      throw IncompatibleGroups("missing parity for diagram " + std::to_string(i));
    images.push_back(parities[i].at(c));
  }
  for (std::size_t k = 0; k < u.relations.size(); ++k) {
    auto img = detail::image_of(u.relations[k], images, target);
    if (!img.is_zero())
      return FactorWitness{k, std::move(img)};
  }
  std::vector<GroupElement> reduced;
  for (auto g : u.reduced_members)
    reduced.push_back(images[g]);
  auto h = solve_hom(u.group, target, std::move(reduced));
  if (auto *w = std::get_if<InconsistencyWitness>(&h))
    throw IncompatibleGroups("reduced presentation disagrees with the full relation list at column " +
                             std::to_string(w->relation));
  return std::get<Hom>(std::move(h));
}

inline FactorResult factor(const UniversalPresentation &u, const MoveTrace &t, const ParitySpec &spec) {
  if (spec.oriented())
    throw UnknownParityKind(spec.name() + " is oriented; R2 pairs cancel instead of agreeing, so it does "
                            "not factor through the winding universal group");
  return factor(u, trace_parities(t, spec));
}

/// Checks rho(class(v)) = p_i(v) for every generator and rho(1) = a, and that
/// a second hom built from the last member of every identified generator
/// class agrees with rho everywhere. Returns the first mismatch, if any.
inline std::optional<std::string> verify_factorization(const UniversalPresentation &u, const Hom &rho,
                                                       const std::vector<ParityAssignment> &parities) {
  std::vector<std::size_t> last_member(u.reduced_members.size());
  for (std::size_t g = 0; g < u.generators.size(); ++g)
    last_member[u.reduced_index[g]] = g;
  std::vector<GroupElement> alt;
  for (auto g : last_member)
    alt.push_back(g == u.one ? parities.front().fixed : parities[u.generators[g].first].at(u.generators[g].second));
  auto second = solve_hom(u.group, rho.target(), std::move(alt));
  if (!std::holds_alternative<Hom>(second))
    return "second solve pass found an inconsistent relation";
  const Hom &rho2 = std::get<Hom>(second);
  if (!(rho(u.one_class) == parities.front().fixed))
    return "rho(1) = " + rho(u.one_class).str() + ", expected " + parities.front().fixed.str();
  for (const auto &[key, cls] : u.classes) {
    const auto value = rho(cls);
    const auto &expected = parities.at(key.first).at(key.second);
    if (!(value == expected))
      return "diagram " + std::to_string(key.first) + " crossing " + std::to_string(key.second) + ": rho gives " +
             value.str() + ", parity is " + expected.str();
    if (!(rho2(cls) == value))
      return "solve passes disagree at diagram " + std::to_string(key.first) + " crossing " +
             std::to_string(key.second);
  }
  return std::nullopt;
}

inline std::vector<std::string> big_strings(const BigVec &v) {
  std::vector<std::string> out;
  for (const auto &x : v)
    out.push_back(x.str());
  return out;
}

inline nlohmann::ordered_json presentation_report(const UniversalPresentation &u) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json gens = ordered_json::array();
  for (std::size_t g = 0; g < u.generators.size(); ++g) {
    if (g == u.one)
      gens.push_back({{"index", g}, {"generator", "1"}});
    else
      gens.push_back({{"index", g}, {"diagram", u.generators[g].first}, {"crossing", u.generators[g].second}});
  }
  j["generators"] = gens;
  ordered_json rels = ordered_json::array();
  for (const auto &r : u.relations) {
    ordered_json terms = ordered_json::object();
    for (const auto &[g, c] : r.terms)
      terms[std::to_string(g)] = c.str();
    rels.push_back({{"type", r.type}, {"step", r.step}, {"note", r.note}, {"terms", terms}});
  }
  j["relations"] = rels;
  j["group"] = u.group->describe();
  j["invariant_factors"] = big_strings(u.group->diagonal());
  j["free_rank"] = u.group->free_rank();
  ordered_json classes = ordered_json::array();
  for (const auto &[key, cls] : u.classes)
    classes.push_back({{"diagram", key.first}, {"crossing", key.second}, {"class", big_strings(cls.rep())}});
  j["classes"] = classes;
  j["one_class"] = big_strings(u.one_class.rep());
  return j;
}

} // namespace windpar
