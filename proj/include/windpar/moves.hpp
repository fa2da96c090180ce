#pragma once

// Move calculus on marked Gauss codes: Reidemeister moves R1-R3 inside a disc
// in S_g x (0,1), the crossing change along S^1 (move 4'), and the two
// fiber moves (a jump pair cancelling on one strand, and a crossing sliding
// through the fiber S_g x {x0}).
//
// Every rewrite is a composition of two primitives on the cyclic code:
//   erase(positions)           removed symbols' trailing edges merge into the
//                              nearest preceding surviving edge;
//   insert(targets, symbols)   new symbols land at the given indices of the
//                              new code, their trailing edges carry explicit
//                              marks debited from the preceding surviving edge.
// The two are exact inverses, which makes every move exactly invertible.

#include <algorithm>
#include <array>
#include <cstdint>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "windpar/codec.hpp"
#include "windpar/diagram.hpp"
#include "windpar/error.hpp"

namespace windpar {

enum class MoveKind {
  r1_add,
  r1_remove,
  r2_add,
  r2_remove,
  r3,
  m4prime,
  jcancel_add,
  jcancel_remove,
  jslide,
};

inline constexpr std::array<MoveKind, 9> all_move_kinds = {
    MoveKind::r1_add,  MoveKind::r1_remove,   MoveKind::r2_add,
    MoveKind::r2_remove, MoveKind::r3,        MoveKind::m4prime,
    MoveKind::jcancel_add, MoveKind::jcancel_remove, MoveKind::jslide};

inline const char *name(MoveKind k) {
  switch (k) {
  case MoveKind::r1_add: return "R1_add";
  case MoveKind::r1_remove: return "R1_remove";
  case MoveKind::r2_add: return "R2_add";
  case MoveKind::r2_remove: return "R2_remove";
  case MoveKind::r3: return "R3";
  case MoveKind::m4prime: return "M4prime";
  case MoveKind::jcancel_add: return "Jcancel_add";
  case MoveKind::jcancel_remove: return "Jcancel_remove";
  case MoveKind::jslide: return "Jslide";
  }
  return "?";
}

inline MoveKind parse_move_kind(const std::string &s) {
  for (auto k : all_move_kinds)
    if (s == name(k))
      return k;
  throw NotApplicable("unknown move kind '" + s + "'");
}

/// Kind-specific parameters. Inserting kinds (R1_add, R2_add, Jcancel_add)
/// carry the inserted symbols in target order and, optionally, the marks of
/// the edges following them.
struct MoveParams {
  std::vector<Symbol> symbols;
  std::vector<IntVec> marks;
  std::vector<std::size_t> targets; // R3: pair starts; M4prime: jump positions
  int direction = 0;                // Jslide: +1 forward, -1 backward
  bool absorb = false;              // M4prime: undo a previous crossing change
  friend bool operator==(const MoveParams &, const MoveParams &) = default;
};

/// site: target indices for inserting kinds, crossing ids for R1_remove,
/// R2_remove, R3, M4prime and Jslide, the first position for Jcancel_remove.
struct Move {
  MoveKind kind = MoveKind::r1_add;
  std::vector<std::int64_t> site;
  MoveParams params;
  friend bool operator==(const Move &, const Move &) = default;
};

inline std::string describe(const Move &m);

struct Correspondence {
  std::map<CrossingId, CrossingId> surviving;
  std::set<CrossingId> created;
  std::set<CrossingId> destroyed;
  std::optional<std::array<CrossingId, 3>> r3_roles; // (v1, v2, v3): v1, v3 on the middle strand
  std::optional<CrossingId> m4_target;
  /// Filled by apply(); not part of the recorded trace.
  std::shared_ptr<const Move> inverse;

  bool same_record(const Correspondence &o) const {
    return surviving == o.surviving && created == o.created && destroyed == o.destroyed &&
           r3_roles == o.r3_roles && m4_target == o.m4_target;
  }
};

struct Application {
  Diagram diagram;
  Correspondence correspondence;
};

/// Rewrites `d` by `m`; throws NotApplicable naming the violated constraint.
inline Application apply(const Diagram &d, const Move &m);

namespace detail {

struct Editable {
  std::size_t genus = 0;
  std::vector<Symbol> code;
  std::vector<IntVec> marks; // size max(code.size(), 1)

  explicit Editable(const Diagram &d) : genus(d.genus()), code(d.code()), marks(d.marks()) {}

  Diagram finish() const { return Diagram(genus, code, marks); }
};

struct Erased {
  std::vector<std::size_t> positions; // sorted
  std::vector<Symbol> symbols;
  std::vector<IntVec> marks;
};

inline Erased erase(Editable &e, std::vector<std::size_t> positions) {
  std::sort(positions.begin(), positions.end());
  const std::size_t n = e.code.size();
  std::vector<bool> gone(n, false);
  Erased out;
  out.positions = positions;
  for (auto p : positions) {
    gone.at(p) = true;
    out.symbols.push_back(e.code[p]);
    out.marks.push_back(e.marks[p]);
  }
  std::vector<Symbol> code;
  std::vector<IntVec> marks;
  for (std::size_t i = 0; i < n; ++i) {
    if (gone[i])
      continue;
    IntVec m = e.marks[i];
    for (std::size_t j = (i + 1) % n; gone[j]; j = (j + 1) % n)
      m += e.marks[j];
    code.push_back(e.code[i]);
    marks.push_back(std::move(m));
  }
  if (code.empty()) {
    IntVec total(2 * e.genus, 0);
    for (const auto &m : e.marks)
      total += m;
    marks.push_back(std::move(total));
  }
  e.code = std::move(code);
  e.marks = std::move(marks);
  return out;
}

/// Returns, for every old position, its index in the new code.
inline std::vector<std::size_t> insert(Editable &e, const std::vector<std::size_t> &targets,
                                       const std::vector<Symbol> &symbols,
                                       std::vector<IntVec> ins_marks) {
  const std::size_t n = e.code.size(), k = targets.size(), total = n + k;
  if (symbols.size() != k)
    throw NotApplicable("expected " + std::to_string(k) + " inserted symbols, got " +
                        std::to_string(symbols.size()));
  if (ins_marks.empty())
    ins_marks.assign(k, IntVec(2 * e.genus, 0));
  if (ins_marks.size() != k)
    throw NotApplicable("expected " + std::to_string(k) + " inserted marks");
  for (auto &m : ins_marks) {
    if (m.empty())
      m.assign(2 * e.genus, 0);
    if (m.size() != 2 * e.genus)
      throw NotApplicable("inserted mark has the wrong length");
  }
  std::vector<int> slot(total, -1);
  for (std::size_t i = 0; i < k; ++i) {
    if (targets[i] >= total || slot[targets[i]] != -1)
      throw NotApplicable("insertion targets must be distinct indices below " +
                          std::to_string(total));
    slot[targets[i]] = static_cast<int>(i);
  }
  std::vector<Symbol> code(total);
  std::vector<IntVec> marks(total);
  std::vector<std::size_t> old_to_new(n);
  std::size_t next_old = 0;
  for (std::size_t pos = 0; pos < total; ++pos) {
    if (slot[pos] >= 0) {
      code[pos] = symbols[slot[pos]];
      marks[pos] = ins_marks[slot[pos]];
    } else {
      old_to_new[next_old] = pos;
      code[pos] = e.code[next_old];
      marks[pos] = e.marks[next_old];
      ++next_old;
    }
  }
  if (n == 0) {
    IntVec rest = e.marks.front();
    for (const auto &m : ins_marks)
      rest -= m;
    marks[total - 1] += rest;
  } else {
    for (std::size_t pos = 0; pos < total; ++pos) {
      if (slot[pos] < 0)
        continue;
      std::size_t q = (pos + total - 1) % total;
      while (slot[q] >= 0)
        q = (q + total - 1) % total;
      marks[q] -= ins_marks[slot[pos]];
    }
  }
  e.code = std::move(code);
  e.marks = std::move(marks);
  return old_to_new;
}

/// Positions p in {a, b} such that the other one sits at p + 1 (cyclically).
inline std::vector<std::size_t> adjacency_starts(std::size_t a, std::size_t b, std::size_t n) {
  std::vector<std::size_t> out;
  if ((a + 1) % n == b)
    out.push_back(a);
  if ((b + 1) % n == a && a != b)
    out.push_back(b);
  return out;
}

/// First start of an adjacent pair {a, b} whose inner edge carries no mark.
inline std::optional<std::size_t> clean_pair(const Diagram &d, std::size_t a, std::size_t b) {
  for (auto p : adjacency_starts(a, b, d.size()))
    if (is_zero(d.mark(p)))
      return p;
  return std::nullopt;
}

inline Passage &passage_at(Editable &e, std::size_t pos) { return std::get<Passage>(e.code[pos]); }

inline Correspondence identity_on(const Diagram &d) {
  Correspondence c;
  for (auto id : d.crossing_ids())
    c.surviving[id] = id;
  return c;
}

inline Move erased_to_add(MoveKind kind, const Erased &er) {
  Move inv{kind, {}, {}};
  for (auto p : er.positions)
    inv.site.push_back(static_cast<std::int64_t>(p));
  inv.params.symbols = er.symbols;
  inv.params.marks = er.marks;
  return inv;
}

inline std::vector<std::size_t> site_positions(const Move &m) {
  std::vector<std::size_t> out;
  for (auto s : m.site) {
    if (s < 0)
      throw NotApplicable("negative insertion target");
    out.push_back(static_cast<std::size_t>(s));
  }
  return out;
}

inline CrossingId site_crossing(const Diagram &d, const Move &m, std::size_t index = 0) {
  if (m.site.size() <= index)
    throw NotApplicable(std::string(name(m.kind)) + ": missing crossing id in site");
  const CrossingId c = m.site[index];
  if (!d.has_crossing(c))
    throw NotApplicable(std::string(name(m.kind)) + ": crossing " + std::to_string(c) +
                        " does not occur");
  return c;
}

inline Application finish(const Editable &e, Correspondence corr, Move inverse) {
  corr.inverse = std::make_shared<const Move>(std::move(inverse));
  return Application{e.finish(), std::move(corr)};
}

// ---- R1 -------------------------------------------------------------------

inline Application apply_r1_remove(const Diagram &d, const Move &m) {
  const CrossingId c = site_crossing(d, m);
  const auto &s = d.sites(c);
  if (!clean_pair(d, s.over, s.under))
    throw NotApplicable("R1_remove: passages of crossing " + std::to_string(c) +
                        " are not adjacent with an unmarked loop edge");
  Editable e(d);
  const Erased er = erase(e, {s.over, s.under});
  Correspondence corr = identity_on(d);
  corr.surviving.erase(c);
  corr.destroyed = {c};
  return finish(e, std::move(corr), erased_to_add(MoveKind::r1_add, er));
}

// Validation shared by inserting kinds: the new crossings must be fresh and
// removing them again (with `remove`) must restore the source exactly.
template <typename Remove>
Application apply_insertion(const Diagram &d, const Move &m, std::size_t count, Remove remove) {
  const char *kind = name(m.kind);
  if (m.site.size() != count || m.params.symbols.size() != count)
    throw NotApplicable(std::string(kind) + ": expected " + std::to_string(count) +
                        " targets and symbols");
  std::set<CrossingId> fresh;
  for (const auto &sym : m.params.symbols)
    if (const auto *p = as_passage(sym)) {
      if (d.has_crossing(p->id))
        throw NotApplicable(std::string(kind) + ": crossing id " + std::to_string(p->id) +
                            " already in use");
      fresh.insert(p->id);
    }
  Editable e(d);
  insert(e, site_positions(m), m.params.symbols, m.params.marks);
  Diagram result;
  try {
    result = e.finish();
  } catch (const Error &err) {
    throw NotApplicable(std::string(kind) + ": inserted symbols are malformed (" + err.what() + ")");
  }
  Move inverse;
  try {
    inverse = remove(result, fresh);
    if (!(apply(result, inverse).diagram == d))
      throw NotApplicable("not an exact insertion");
  } catch (const NotApplicable &err) {
    throw NotApplicable(std::string(kind) + ": inserted block is not a valid site (" + err.what() + ")");
  }
  Correspondence corr = identity_on(d);
  corr.created = fresh;
  corr.inverse = std::make_shared<const Move>(inverse);
  return Application{std::move(result), std::move(corr)};
}


inline Move r1_remove_inverse_check(const Diagram &, const std::set<CrossingId> &fresh) {
  if (fresh.size() != 1)
    throw NotApplicable("R1 inserts exactly one crossing");
  return Move{MoveKind::r1_remove, {*fresh.begin()}, {}};
}

// ---- R2 -------------------------------------------------------------------

inline Application apply_r2_remove(const Diagram &d, const Move &m) {
  if (m.site.size() != 2 || m.site[0] == m.site[1])
    throw NotApplicable("R2_remove: site must name two distinct crossings");
  const CrossingId a = site_crossing(d, m, 0), b = site_crossing(d, m, 1);
  const auto &sa = d.sites(a), &sb = d.sites(b);
  if (sa.sign == sb.sign)
    throw NotApplicable("R2_remove: crossings must have opposite signs");
  if (!clean_pair(d, sa.over, sb.over))
    throw NotApplicable("R2_remove: over passages are not adjacent with an unmarked edge between");
  if (!clean_pair(d, sa.under, sb.under))
    throw NotApplicable("R2_remove: under passages are not adjacent with an unmarked edge between");
  Editable e(d);
  const Erased er = erase(e, {sa.over, sb.over, sa.under, sb.under});
  Correspondence corr = identity_on(d);
  corr.surviving.erase(a);
  corr.surviving.erase(b);
  corr.destroyed = {a, b};
  return finish(e, std::move(corr), erased_to_add(MoveKind::r2_add, er));
}

inline Move r2_remove_inverse_check(const Diagram &, const std::set<CrossingId> &fresh) {
  if (fresh.size() != 2)
    throw NotApplicable("R2 inserts exactly two crossings");
  return Move{MoveKind::r2_remove, {*fresh.begin(), *fresh.rbegin()}, {}};
}

// ---- R3 -------------------------------------------------------------------

/// One way to read three crossings as an R3 triangle: a top strand over both
/// others, a middle strand, a bottom strand under both. x = top/middle,
/// y = top/bottom, z = middle/bottom.
struct R3Site {
  std::array<std::size_t, 3> starts{}; // top, middle, bottom pair starts
  CrossingId x = 0, y = 0, z = 0;
};

inline CrossingId id_at(const Diagram &d, std::size_t pos) {
  return std::get<Passage>(d.code()[pos]).id;
}

inline std::vector<R3Site> r3_sites(const Diagram &d, const std::array<CrossingId, 3> &ids) {
  std::vector<R3Site> out;
  const std::size_t n = d.size();
  std::set<std::size_t> pos;
  for (auto c : ids) {
    const auto &s = d.sites(c);
    pos.insert(s.over);
    pos.insert(s.under);
  }
  if (pos.size() != 6)
    return out;
  std::vector<std::size_t> starts;
  for (auto p : pos)
    if (pos.count((p + 1) % n) && is_zero(d.mark(p)))
      starts.push_back(p);
  for (std::size_t i = 0; i < starts.size(); ++i)
    for (std::size_t j = i + 1; j < starts.size(); ++j)
      for (std::size_t k = j + 1; k < starts.size(); ++k) {
        const std::array<std::size_t, 3> pick{starts[i], starts[j], starts[k]};
        std::set<std::size_t> covered;
        for (auto p : pick) {
          covered.insert(p);
          covered.insert((p + 1) % n);
        }
        if (covered.size() != 6)
          continue;
        std::optional<std::size_t> top, mid, bot;
        bool ok = true;
        for (auto p : pick) {
          const auto &first = std::get<Passage>(d.code()[p]);
          const auto &second = std::get<Passage>(d.code()[(p + 1) % n]);
          if (first.id == second.id) {
            ok = false;
            break;
          }
          auto &slot = first.role == second.role ? (first.role == Role::over ? top : bot) : mid;
          if (slot) {
            ok = false;
            break;
          }
          slot = p;
        }
        if (!ok || !top || !mid || !bot)
          continue;
        auto pair_ids = [&](std::size_t p) {
          return std::set<CrossingId>{id_at(d, p), id_at(d, (p + 1) % n)};
        };
        auto common = [](const std::set<CrossingId> &a, const std::set<CrossingId> &b) {
          std::vector<CrossingId> both;
          std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
          return both;
        };
        const auto t = pair_ids(*top), mm = pair_ids(*mid), b = pair_ids(*bot);
        const auto tm = common(t, mm), tb = common(t, b), mb = common(mm, b);
        if (tm.size() != 1 || tb.size() != 1 || mb.size() != 1)
          continue;
        R3Site site{{*top, *mid, *bot}, tm[0], tb[0], mb[0]};
        // Orders along each strand and crossing signs must come from three
        // lines in the plane: s_y s_z = e_T e_M and s_x s_z = e_T e_B.
        const int e_top = id_at(d, *top) == site.x ? 1 : -1;
        const int e_mid = id_at(d, *mid) == site.x ? 1 : -1;
        const int e_bot = id_at(d, *bot) == site.y ? 1 : -1;
        const int sx = d.sites(site.x).sign, sy = d.sites(site.y).sign, sz = d.sites(site.z).sign;
        if (sy * sz != e_top * e_mid || sx * sz != e_top * e_bot)
          continue;
        out.push_back(site);
      }
  return out;
}

inline Application apply_r3(const Diagram &d, const Move &m) {
  if (m.site.size() != 3)
    throw NotApplicable("R3: site must name three crossings");
  std::array<CrossingId, 3> ids{};
  for (std::size_t i = 0; i < 3; ++i)
    ids[i] = site_crossing(d, m, i);
  if (ids[0] == ids[1] || ids[1] == ids[2] || ids[0] == ids[2])
    throw NotApplicable("R3: crossings must be distinct");
  const auto sites = r3_sites(d, ids);
  const R3Site *chosen = nullptr;
  for (const auto &s : sites) {
    std::vector<std::size_t> st(s.starts.begin(), s.starts.end());
    std::sort(st.begin(), st.end());
    if (m.params.targets.empty() || m.params.targets == st) {
      chosen = &s;
      break;
    }
  }
  if (!chosen)
    throw NotApplicable("R3: crossings do not bound a move triangle (adjacent strand pairs, "
                        "unmarked inner edges, top/middle/bottom layering, sign-order agreement)");
  Editable e(d);
  const std::size_t n = d.size();
  for (auto p : chosen->starts)
    std::swap(e.code[p], e.code[(p + 1) % n]);
  Correspondence corr = identity_on(d);
  corr.r3_roles = std::array<CrossingId, 3>{chosen->x, chosen->y, chosen->z};
  Move inverse{MoveKind::r3, {chosen->x, chosen->y, chosen->z}, {}};
  inverse.params.targets.assign(chosen->starts.begin(), chosen->starts.end());
  std::sort(inverse.params.targets.begin(), inverse.params.targets.end());
  return finish(e, std::move(corr), std::move(inverse));
}

// ---- move 4': crossing change along S^1 ----------------------------------------

inline void change_crossing(Editable &e, std::size_t a, std::size_t b) {
  for (auto pos : {a, b}) {
    auto &p = passage_at(e, pos);
    p.role = opposite(p.role);
    p.sign = -p.sign;
  }
}

inline Application apply_m4prime(const Diagram &d, const Move &m) {
  const CrossingId c = site_crossing(d, m);
  const auto &s = d.sites(c);
  const std::size_t n = d.size();
  Editable e(d);
  Correspondence corr = identity_on(d);
  corr.m4_target = c;
  if (m.params.absorb) {
    const std::size_t q = s.under, before = (q + n - 1) % n, after = (q + 1) % n;
    const auto *jb = as_jump(d.code()[before]);
    const auto *ja = as_jump(d.code()[after]);
    if (n < 3 || !jb || !ja || jb->direction != 1 || ja->direction != -1)
      throw NotApplicable("M4prime(absorb): under passage of crossing " + std::to_string(c) +
                          " is not flanked by J+ before and J- after");
    if (!is_zero(d.mark(before)) || !is_zero(d.mark(after)))
      throw NotApplicable("M4prime(absorb): edges next to the flanking jumps carry marks");
    erase(e, {before, after});
    const std::size_t shift_q = q - (before < q ? 1 : 0) - (after < q ? 1 : 0);
    const std::size_t o = s.over - (before < s.over ? 1 : 0) - (after < s.over ? 1 : 0);
    change_crossing(e, shift_q, o);
    Move inverse{MoveKind::m4prime, {c}, {}};
    inverse.params.targets = {before, after};
    return finish(e, std::move(corr), std::move(inverse));
  }
  const std::size_t total = n + 2;
  std::vector<std::size_t> targets = m.params.targets;
  if (targets.empty())
    targets = {s.over, s.over + 2};
  if (targets.size() != 2)
    throw NotApplicable("M4prime: targets must give the J+ and J- positions");
  const auto old_to_new = insert(e, targets, {jump(1), jump(-1)}, {});
  const std::size_t p = old_to_new[s.over];
  if ((p + total - 1) % total != targets[0] || (p + 1) % total != targets[1])
    throw NotApplicable("M4prime: jumps must sit immediately before and after the over passage");
  change_crossing(e, p, old_to_new[s.under]);
  Move inverse{MoveKind::m4prime, {c}, {}};
  inverse.params.absorb = true;
  return finish(e, std::move(corr), std::move(inverse));
}

// ---- fiber moves --------------------------------------------------------------

inline Application apply_jcancel_remove(const Diagram &d, const Move &m) {
  const std::size_t n = d.size();
  if (m.site.size() != 1 || m.site[0] < 0 || static_cast<std::size_t>(m.site[0]) >= n || n < 2)
    throw NotApplicable("Jcancel_remove: site must be a code position");
  const std::size_t p = static_cast<std::size_t>(m.site[0]), q = (p + 1) % n;
  const auto *a = as_jump(d.code()[p]);
  const auto *b = as_jump(d.code()[q]);
  if (!a || !b || a->direction == b->direction)
    throw NotApplicable("Jcancel_remove: positions " + std::to_string(p) + "," + std::to_string(q) +
                        " are not opposite jumps");
  if (!is_zero(d.mark(p)))
    throw NotApplicable("Jcancel_remove: edge between the jumps carries a mark");
  Editable e(d);
  const Erased er = erase(e, {p, q});
  return finish(e, identity_on(d), erased_to_add(MoveKind::jcancel_add, er));
}

inline Move jcancel_remove_inverse_check(const Diagram &result, const Move &add) {
  const std::size_t total = result.size();
  const auto t = site_positions(add);
  for (auto first : adjacency_starts(t[0], t[1], total)) {
    Move rm{MoveKind::jcancel_remove, {static_cast<std::int64_t>(first)}, {}};
    try {
      apply(result, rm);
      return rm;
    } catch (const NotApplicable &) {
    }
  }
  throw NotApplicable("inserted jumps are not an adjacent opposite pair with an unmarked edge");
}

inline Application apply_jslide(const Diagram &d, const Move &m) {
  const CrossingId c = site_crossing(d, m);
  const int dir = m.params.direction;
  if (dir != 1 && dir != -1)
    throw NotApplicable("Jslide: direction must be +1 (forward) or -1 (backward)");
  const auto &s = d.sites(c);
  const std::size_t n = d.size();
  std::array<std::size_t, 2> passages{s.over, s.under}, jumps{};
  std::optional<int> jdir;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t p = passages[i];
    const std::size_t j = dir > 0 ? (p + n - 1) % n : (p + 1) % n;
    const auto *jp = as_jump(d.code()[j]);
    if (!jp)
      throw NotApplicable(std::string("Jslide: no jump ") + (dir > 0 ? "before" : "after") +
                          " passage at position " + std::to_string(p));
    if (jdir && *jdir != jp->direction)
      throw NotApplicable("Jslide: the two jumps have different directions");
    jdir = jp->direction;
    if (!is_zero(d.mark(dir > 0 ? j : p)))
      throw NotApplicable("Jslide: edge between jump and passage carries a mark");
    jumps[i] = j;
  }
  Editable e(d);
  for (std::size_t i = 0; i < 2; ++i)
    std::swap(e.code[passages[i]], e.code[jumps[i]]);
  Move inverse{MoveKind::jslide, {c}, {}};
  inverse.params.direction = -dir;
  return finish(e, identity_on(d), std::move(inverse));
}

} // namespace detail

inline Application apply(const Diagram &d, const Move &m) {
  switch (m.kind) {
  case MoveKind::r1_remove: return detail::apply_r1_remove(d, m);
  case MoveKind::r1_add:
    return detail::apply_insertion(d, m, 2, detail::r1_remove_inverse_check);
  case MoveKind::r2_remove: return detail::apply_r2_remove(d, m);
  case MoveKind::r2_add:
    return detail::apply_insertion(d, m, 4, detail::r2_remove_inverse_check);
  case MoveKind::r3: return detail::apply_r3(d, m);
  case MoveKind::m4prime: return detail::apply_m4prime(d, m);
  case MoveKind::jcancel_remove: return detail::apply_jcancel_remove(d, m);
  case MoveKind::jcancel_add:
    return detail::apply_insertion(d, m, 2, [&m](const Diagram &result, const std::set<CrossingId> &fresh) {
      if (!fresh.empty())
        throw NotApplicable("Jcancel inserts jumps only");
      return detail::jcancel_remove_inverse_check(result, m);
    });
  case MoveKind::jslide: return detail::apply_jslide(d, m);
  }
  throw NotApplicable("unknown move kind");
}

/// The move undoing `m`, as recorded by apply() in the correspondence.
inline Move invert(const Move &m, const Correspondence &c) {
  if (!c.inverse)
    throw NotApplicable(std::string("invert: correspondence of ") + name(m.kind) +
                        " was not produced by apply()");
  return *c.inverse;
}

inline std::string describe(const Move &m) {
  std::string out = name(m.kind);
  out += " [";
  for (std::size_t i = 0; i < m.site.size(); ++i)
    out += (i ? "," : "") + std::to_string(m.site[i]);
  out += "]";
  if (!m.params.symbols.empty()) {
    out += " {";
    for (std::size_t i = 0; i < m.params.symbols.size(); ++i)
      out += (i ? " " : "") + to_string(m.params.symbols[i]);
    out += "}";
  }
  if (m.params.direction)
    out += m.params.direction > 0 ? " forward" : " backward";
  if (m.params.absorb)
    out += " absorb";
  return out;
}

/// Every applicable remove/rearrange move, plus add moves at every edge with
/// canonical parameters (fresh ids max+1, max+2; unmarked new edges).
inline std::vector<Move> list_moves(const Diagram &d) {
  std::vector<Move> out;
  const std::size_t n = d.size();
  auto try_push = [&](Move m) {
    try {
      apply(d, m);
      out.push_back(std::move(m));
    } catch (const NotApplicable &) {
    }
  };
  const auto ids = d.crossing_ids();
  for (auto c : ids)
    try_push(Move{MoveKind::r1_remove, {c}, {}});
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      try_push(Move{MoveKind::r2_remove, {ids[i], ids[j]}, {}});

  // R3 candidates: triangles in the graph of unmarked adjacent passage pairs.
  std::map<CrossingId, std::set<CrossingId>> adj;
  for (std::size_t p = 0; n >= 2 && p < n; ++p) {
    const auto *a = as_passage(d.code()[p]);
    const auto *b = as_passage(d.code()[(p + 1) % n]);
    if (a && b && a->id != b->id && is_zero(d.mark(p))) {
      adj[a->id].insert(b->id);
      adj[b->id].insert(a->id);
    }
  }
  for (const auto &[a, na] : adj)
    for (auto b : na) {
      if (b <= a)
        continue;
      for (auto c : adj[b]) {
        if (c <= b || !na.count(c))
          continue;
        for (const auto &site : detail::r3_sites(d, {a, b, c})) {
          Move m{MoveKind::r3, {site.x, site.y, site.z}, {}};
          m.params.targets.assign(site.starts.begin(), site.starts.end());
          std::sort(m.params.targets.begin(), m.params.targets.end());
          out.push_back(std::move(m));
        }
      }
    }

  for (auto c : ids) {
    out.push_back(Move{MoveKind::m4prime, {c}, {}});
    Move absorb{MoveKind::m4prime, {c}, {}};
    absorb.params.absorb = true;
    try_push(absorb);
  }
  for (std::size_t p = 0; n >= 2 && p < n; ++p)
    try_push(Move{MoveKind::jcancel_remove, {static_cast<std::int64_t>(p)}, {}});
  for (auto c : ids)
    for (int dir : {1, -1}) {
      Move m{MoveKind::jslide, {c}, {}};
      m.params.direction = dir;
      try_push(m);
    }

  // Add kinds. Edge e is split right after symbol e.
  const CrossingId a = d.max_crossing_id() + 1, b = a + 1;
  const std::size_t edges = d.edge_count();
  for (std::size_t e = 0; e < edges; ++e) {
    const std::int64_t t = n == 0 ? 0 : static_cast<std::int64_t>(e + 1);
    for (int sign : {1, -1}) {
      out.push_back(Move{MoveKind::r1_add, {t, t + 1}, {{over(a, sign), under(a, sign)}, {}, {}, 0, false}});
      out.push_back(Move{MoveKind::r1_add, {t, t + 1}, {{under(a, sign), over(a, sign)}, {}, {}, 0, false}});
    }
    for (int dir : {1, -1})
      out.push_back(Move{MoveKind::jcancel_add, {t, t + 1}, {{jump(dir), jump(-dir)}, {}, {}, 0, false}});
  }
  for (std::size_t e1 = 0; e1 < edges; ++e1)
    for (std::size_t e2 = e1; e2 < edges; ++e2) {
      const std::int64_t t1 = n == 0 ? 0 : static_cast<std::int64_t>(e1 + 1);
      const std::int64_t t2 = n == 0 ? 2 : static_cast<std::int64_t>(e2 + 3);
      for (bool over_first : {true, false})
        for (bool same_direction : {true, false}) {
          std::vector<Symbol> top{over(a, 1), over(b, -1)};
          std::vector<Symbol> bottom = same_direction ? std::vector<Symbol>{under(a, 1), under(b, -1)}
                                                      : std::vector<Symbol>{under(b, -1), under(a, 1)};
          std::vector<Symbol> syms = over_first ? top : bottom;
          const auto &second = over_first ? bottom : top;
          syms.insert(syms.end(), second.begin(), second.end());
          out.push_back(Move{MoveKind::r2_add, {t1, t1 + 1, t2, t2 + 1}, {syms, {}, {}, 0, false}});
        }
    }
  return out;
}

inline bool is_add_kind(MoveKind k) {
  return k == MoveKind::r1_add || k == MoveKind::r2_add || k == MoveKind::jcancel_add;
}

/// Change in code length caused by a move.
inline std::int64_t growth(const Move &m) {
  switch (m.kind) {
  case MoveKind::r1_add:
  case MoveKind::jcancel_add: return 2;
  case MoveKind::r2_add: return 4;
  case MoveKind::r1_remove:
  case MoveKind::jcancel_remove: return -2;
  case MoveKind::r2_remove: return -4;
  case MoveKind::m4prime: return m.params.absorb ? -2 : 2;
  default: return 0;
  }
}

} // namespace windpar
