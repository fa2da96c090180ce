#pragma once

// Knot diagrams in S_g x S^1 encoded as cyclic extended Gauss codes: crossing
// passages plus signed jump markers where the knot crosses the cut fiber
// S_g x {x0}. Edge i is the segment following the symbol at position i.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "windpar/abelian.hpp"
#include "windpar/error.hpp"

namespace windpar {

using CrossingId = std::int64_t;
using IntVec = std::vector<std::int64_t>;

enum class Role { over, under };

inline Role opposite(Role r) noexcept { return r == Role::over ? Role::under : Role::over; }

struct Passage {
  CrossingId id = 0;
  Role role = Role::over;
  int sign = 1;
  friend bool operator==(const Passage &, const Passage &) = default;
};

struct Jump {
  int direction = 1;
  friend bool operator==(const Jump &, const Jump &) = default;
};

using Symbol = std::variant<Passage, Jump>;

inline const Passage *as_passage(const Symbol &s) noexcept { return std::get_if<Passage>(&s); }
inline const Jump *as_jump(const Symbol &s) noexcept { return std::get_if<Jump>(&s); }
inline bool is_jump(const Symbol &s) noexcept { return std::holds_alternative<Jump>(s); }

inline Symbol over(CrossingId id, int sign) { return Passage{id, Role::over, sign}; }
inline Symbol under(CrossingId id, int sign) { return Passage{id, Role::under, sign}; }
inline Symbol jump(int direction) { return Jump{direction}; }

/// Token form used by the text codec: O3+, U3-, J+, J-.
inline std::string to_string(const Symbol &s) {
  if (const auto *j = as_jump(s))
    return j->direction > 0 ? "J+" : "J-";
  const auto &p = std::get<Passage>(s);
  return std::string(p.role == Role::over ? "O" : "U") + std::to_string(p.id) +
         (p.sign > 0 ? "+" : "-");
}

inline bool is_zero(const IntVec &v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

inline IntVec &operator+=(IntVec &a, const IntVec &b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] += b[i];
  return a;
}
inline IntVec &operator-=(IntVec &a, const IntVec &b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] -= b[i];
  return a;
}

/// Positions of the two passages of one crossing.
struct CrossingSites {
  std::size_t over = 0, under = 0;
  int sign = 1;
};

/// Immutable diagram value. Construction validates every structural invariant.
class Diagram {
public:
  Diagram() : marks_(1) {}

  /// `marks` holds one vector per edge (size max(code.size(), 1)); an empty
  /// vector stands for the zero mark.
  Diagram(std::size_t genus, std::vector<Symbol> code, std::vector<IntVec> marks)
      : genus_(genus), code_(std::move(code)), marks_(std::move(marks)) {
    if (marks_.empty())
      marks_.resize(edge_count());
    if (marks_.size() != edge_count())
      throw MarkError("expected " + std::to_string(edge_count()) + " edge marks, got " +
                      std::to_string(marks_.size()));
    for (std::size_t e = 0; e < marks_.size(); ++e) {
      auto &m = marks_[e];
      if (m.empty())
        m.assign(2 * genus_, 0);
      else if (m.size() != 2 * genus_)
        throw MarkError("mark of edge " + std::to_string(e) + " has length " +
                        std::to_string(m.size()) + ", expected " + std::to_string(2 * genus_));
    }
    validate_code();
  }

  /// Sparse form: edge index -> mark; absent edges carry the zero vector.
  Diagram(std::size_t genus, std::vector<Symbol> code, const std::map<std::size_t, IntVec> &marks)
      : Diagram(genus, code, dense_marks(genus, code.size(), marks)) {}

  std::size_t genus() const noexcept { return genus_; }
  const std::vector<Symbol> &code() const noexcept { return code_; }
  std::size_t size() const noexcept { return code_.size(); }
  std::size_t edge_count() const noexcept { return std::max<std::size_t>(code_.size(), 1); }
  const IntVec &mark(std::size_t edge) const { return marks_.at(edge); }
  const std::vector<IntVec> &marks() const noexcept { return marks_; }

  const std::map<CrossingId, CrossingSites> &crossings() const noexcept { return crossings_; }
  bool has_crossing(CrossingId c) const { return crossings_.count(c) != 0; }
  const CrossingSites &sites(CrossingId c) const {
    auto it = crossings_.find(c);
    if (it == crossings_.end())
      throw UnknownCrossing("crossing " + std::to_string(c) + " does not occur in the diagram");
    return it->second;
  }
  std::vector<CrossingId> crossing_ids() const {
    std::vector<CrossingId> ids;
    for (const auto &[id, _] : crossings_)
      ids.push_back(id);
    return ids;
  }
  CrossingId max_crossing_id() const { return crossings_.empty() ? 0 : crossings_.rbegin()->first; }

  friend bool operator==(const Diagram &a, const Diagram &b) {
    return a.genus_ == b.genus_ && a.code_ == b.code_ && a.marks_ == b.marks_;
  }

private:
  static std::vector<IntVec> dense_marks(std::size_t genus, std::size_t n,
                                         const std::map<std::size_t, IntVec> &sparse) {
    std::vector<IntVec> dense(std::max<std::size_t>(n, 1), IntVec(2 * genus, 0));
    for (const auto &[edge, m] : sparse) {
      if (edge >= dense.size())
        throw MarkError("edge index " + std::to_string(edge) + " out of range (" +
                        std::to_string(dense.size()) + " edges)");
      if (m.size() != 2 * genus)
        throw MarkError("mark of edge " + std::to_string(edge) + " has length " +
                        std::to_string(m.size()) + ", expected " + std::to_string(2 * genus));
      dense[edge] = m;
    }
    return dense;
  }

  void validate_code() {
    std::map<CrossingId, std::pair<std::optional<std::size_t>, std::optional<std::size_t>>> seen;
    std::map<CrossingId, int> count;
    for (std::size_t i = 0; i < code_.size(); ++i) {
      if (const auto *j = as_jump(code_[i])) {
        if (j->direction != 1 && j->direction != -1)
          throw StructureError("jump direction must be +1 or -1");
        continue;
      }
      const auto &p = std::get<Passage>(code_[i]);
      if (p.id <= 0)
        throw StructureError("crossing ids must be positive");
      if (p.sign != 1 && p.sign != -1)
        throw StructureError("crossing sign must be +1 or -1");
      auto &slot = p.role == Role::over ? seen[p.id].first : seen[p.id].second;
      if (++count[p.id] > 2)
        throw StructureError("crossing " + std::to_string(p.id) + " appears more than twice");
      if (slot)
        throw StructureError("crossing " + std::to_string(p.id) + " has two " +
                             (p.role == Role::over ? "over" : "under") + " passages");
      slot = i;
    }
    for (const auto &[id, pos] : seen) {
      if (!pos.first || !pos.second)
        throw StructureError("crossing " + std::to_string(id) + " appears only once");
      const int s1 = std::get<Passage>(code_[*pos.first]).sign;
      const int s2 = std::get<Passage>(code_[*pos.second]).sign;
      if (s1 != s2)
        throw StructureError("crossing " + std::to_string(id) + " has mismatched signs");
      crossings_[id] = CrossingSites{*pos.first, *pos.second, s1};
    }
  }

  std::size_t genus_ = 0;
  std::vector<Symbol> code_;
  std::vector<IntVec> marks_;
  std::map<CrossingId, CrossingSites> crossings_;
};

/// Net S^1 winding: the sum of jump directions.
inline std::int64_t degree(const Diagram &d) {
  std::int64_t deg = 0;
  for (const auto &s : d.code())
    if (const auto *j = as_jump(s))
      deg += j->direction;
  return deg;
}

/// Lift level of every edge. The last edge (preceding position 0) is the base
/// with label 0; each jump shifts the running level by its direction.
inline std::vector<std::int64_t> arc_labels(const Diagram &d) {
  const std::size_t n = d.size();
  std::vector<std::int64_t> labels(d.edge_count(), 0);
  std::int64_t level = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (const auto *j = as_jump(d.code()[i]))
      level += j->direction;
    labels[i] = level;
  }
  return labels;
}

namespace detail {

// Sum of jump directions at positions strictly between `from` and `to`,
// walking forward cyclically.
inline std::int64_t jumps_between(const Diagram &d, std::size_t from, std::size_t to) {
  const std::size_t n = d.size();
  std::int64_t sum = 0;
  for (std::size_t i = (from + 1) % n; i != to; i = (i + 1) % n)
    if (const auto *j = as_jump(d.code()[i]))
      sum += j->direction;
  return sum;
}

// Sum of marks over edges from, from+1, ..., to-1 (cyclic).
inline IntVec marks_between(const Diagram &d, std::size_t from, std::size_t to) {
  const std::size_t n = d.size();
  IntVec sum(2 * d.genus(), 0);
  for (std::size_t e = from; e != to; e = (e + 1) % n)
    sum += d.mark(e);
  return sum;
}

} // namespace detail

/// Raw crossing label i = b - a: jump sum on the walk from just after the
/// under passage up to the over passage.
inline std::int64_t raw_crossing_label(const Diagram &d, CrossingId c) {
  const auto &s = d.sites(c);
  return detail::jumps_between(d, s.under, s.over);
}

struct CrossingLabel {
  std::int64_t raw = 0;
  GroupElement reduced;  // in Z / |degree|
};

inline CrossingLabel crossing_label(const Diagram &d, CrossingId c) {
  const std::int64_t raw = raw_crossing_label(d, c);
  return {raw, canonical(cyclic_group(degree(d)), {raw})};
}

/// [gamma_c] before quotienting: the marks of the edges walked from the under
/// passage to the over passage, then the raw label as the S^1 coordinate.
inline IntVec half_curve_class(const Diagram &d, CrossingId c) {
  const auto &s = d.sites(c);
  IntVec v = detail::marks_between(d, s.under, s.over);
  v.push_back(detail::jumps_between(d, s.under, s.over));
  return v;
}

/// The complementary half (over passage to under passage). Together with
/// half_curve_class it sums to knot_class.
inline IntVec complementary_half_class(const Diagram &d, CrossingId c) {
  const auto &s = d.sites(c);
  IntVec v = detail::marks_between(d, s.over, s.under);
  v.push_back(detail::jumps_between(d, s.over, s.under));
  return v;
}

/// [K] in H_1(S_g) + H_1(S^1) coordinates.
inline IntVec knot_class(const Diagram &d) {
  IntVec v(2 * d.genus(), 0);
  for (const auto &m : d.marks())
    v += m;
  v.push_back(degree(d));
  return v;
}

inline int crossing_sign(const Diagram &d, CrossingId c) { return d.sites(c).sign; }

/// Same diagram with the code read from position `shift` onwards.
inline Diagram rotated(const Diagram &d, std::size_t shift) {
  const std::size_t n = d.size();
  if (n == 0)
    return d;
  std::vector<Symbol> code(n);
  std::vector<IntVec> marks(n);
  for (std::size_t i = 0; i < n; ++i) {
    code[i] = d.code()[(i + shift) % n];
    marks[i] = d.mark((i + shift) % n);
  }
  return Diagram(d.genus(), std::move(code), std::move(marks));
}

} // namespace windpar
