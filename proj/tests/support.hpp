#pragma once

// Generators and brute-force oracles shared by the test binaries. Nothing
// here calls the library's analyses; the oracles recompute from raw codes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "windpar/windpar.hpp"

namespace testsupport {

using namespace windpar;

// ---- braid closures ----------------------------------------------------------

/// Letter +i / -i (1-based) is sigma_i^{+1} / sigma_i^{-1} on `strands` strands.
struct Braid {
  std::size_t strands = 2;
  std::vector<int> word;
};

inline std::vector<std::size_t> braid_permutation(const Braid &b) {
  std::vector<std::size_t> at(b.strands);
  std::iota(at.begin(), at.end(), 0);
  // at[p]: where a strand entering at bottom position p leaves.
  std::vector<std::size_t> perm(b.strands);
  for (std::size_t start = 0; start < b.strands; ++start) {
    std::size_t pos = start;
    for (int l : b.word) {
      const std::size_t i = static_cast<std::size_t>(std::abs(l)) - 1;
      if (pos == i)
        pos = i + 1;
      else if (pos == i + 1)
        pos = i;
    }
    perm[start] = pos;
  }
  return perm;
}

inline bool is_single_cycle(const std::vector<std::size_t> &perm) {
  std::size_t pos = 0, len = 0;
  do {
    pos = perm[pos];
    ++len;
  } while (pos != 0 && len <= perm.size());
  return len == perm.size();
}

/// Gauss code of the closure, starting at bottom position 0. Crossing ids are
/// the 1-based letter indices. Strands run upward; in sigma_i^{+1} the strand
/// moving right (i -> i+1) is over. Sign = sgn(over direction x under direction):
/// over (1,1), under (-1,1) gives +1.
inline std::vector<Symbol> braid_closure_code(const Braid &b) {
  std::vector<Symbol> code;
  std::size_t pos = 0;
  do {
    for (std::size_t k = 0; k < b.word.size(); ++k) {
      const int l = b.word[k];
      const std::size_t i = static_cast<std::size_t>(std::abs(l)) - 1;
      const int sign = l > 0 ? 1 : -1;
      const auto id = static_cast<CrossingId>(k + 1);
      if (pos == i) {
        code.push_back(l > 0 ? over(id, sign) : under(id, sign));
        pos = i + 1;
      } else if (pos == i + 1) {
        code.push_back(l > 0 ? under(id, sign) : over(id, sign));
        pos = i;
      }
    }
  } while (pos != 0);
  return code;
}

template <typename Rng> Braid random_knotted_braid(Rng &rng, std::size_t strands, std::size_t letters) {
  std::uniform_int_distribution<int> gen(1, static_cast<int>(strands) - 1);
  // Parity of the word length can rule out a single cycle, so grow on failure.
  for (std::size_t tries = 0;; ++tries) {
    Braid b{strands, {}};
    for (std::size_t k = 0; k < letters + tries % 2; ++k)
      b.word.push_back(gen(rng) * (rng() % 2 ? 1 : -1));
    if (is_single_cycle(braid_permutation(b)))
      return b;
  }
}

/// Relabels crossing ids by order of first appearance (1, 2, ...).
inline std::vector<Symbol> relabel(const std::vector<Symbol> &code) {
  std::map<CrossingId, CrossingId> ids;
  std::vector<Symbol> out;
  for (const auto &s : code) {
    if (const auto *p = as_passage(s)) {
      auto [it, _] = ids.emplace(p->id, static_cast<CrossingId>(ids.size() + 1));
      out.push_back(Passage{it->second, p->role, p->sign});
    } else {
      out.push_back(s);
    }
  }
  return out;
}

// ---- random codes -----------------------------------------------------------

struct RandomSpec {
  std::size_t max_genus = 3;
  std::size_t max_crossings = 12;
  std::size_t max_jumps = 4;
  double mark_density = 0.3;
  int mark_range = 2;
};

template <typename Rng> IntVec random_mark(Rng &rng, std::size_t genus, int range) {
  std::uniform_int_distribution<int> v(-range, range);
  IntVec m(2 * genus);
  for (auto &x : m)
    x = v(rng);
  return m;
}

template <typename Rng>
Diagram decorate(Rng &rng, std::vector<Symbol> code, std::size_t genus, std::size_t jumps, double mark_density,
                 int mark_range) {
  for (std::size_t j = 0; j < jumps; ++j) {
    const std::size_t at = code.empty() ? 0 : rng() % (code.size() + 1);
    code.insert(code.begin() + static_cast<std::ptrdiff_t>(at), jump(rng() % 2 ? 1 : -1));
  }
  std::bernoulli_distribution marked(mark_density);
  std::vector<IntVec> marks(std::max<std::size_t>(code.size(), 1));
  for (auto &m : marks)
    if (genus > 0 && marked(rng))
      m = random_mark(rng, genus, mark_range);
  return Diagram(genus, std::move(code), std::move(marks));
}

/// Uniformly shuffled Gauss code (generally virtual) with jumps and marks.
template <typename Rng> Diagram random_diagram(Rng &rng, const RandomSpec &s = {}) {
  const std::size_t genus = rng() % (s.max_genus + 1);
  const std::size_t n = rng() % (s.max_crossings + 1);
  std::vector<Symbol> code;
  for (std::size_t c = 1; c <= n; ++c) {
    const int sign = rng() % 2 ? 1 : -1;
    code.push_back(over(static_cast<CrossingId>(c), sign));
    code.push_back(under(static_cast<CrossingId>(c), sign));
  }
  std::shuffle(code.begin(), code.end(), rng);
  const std::size_t jumps = rng() % (s.max_jumps + 1);
  return decorate(rng, std::move(code), genus, jumps, s.mark_density, s.mark_range);
}

/// Braid closure (classical, so R3 sites occur) with jumps and marks added.
template <typename Rng> Diagram random_braid_diagram(Rng &rng, const RandomSpec &s = {}) {
  const std::size_t strands = 2 + rng() % 3;
  const std::size_t letters = std::max<std::size_t>(strands, rng() % (s.max_crossings + 1));
  auto b = random_knotted_braid(rng, strands, std::min(letters, s.max_crossings - 1));
  const std::size_t genus = rng() % (s.max_genus + 1);
  return decorate(rng, braid_closure_code(b), genus, rng() % (s.max_jumps + 1), s.mark_density, s.mark_range);
}

template <typename Rng> Diagram random_start(Rng &rng, const RandomSpec &s = {}) {
  return rng() % 2 ? random_braid_diagram(rng, s) : random_diagram(rng, s);
}

// ---- oracles ----------------------------------------------------------------

inline std::int64_t oracle_degree(const Diagram &d) {
  std::int64_t deg = 0;
  for (const auto &s : d.code())
    if (is_jump(s))
      deg += std::get<Jump>(s).direction;
  return deg;
}

/// Lift level of the strand just before position p (sum of jumps before p).
inline std::int64_t level_before(const Diagram &d, std::size_t p) {
  std::int64_t lev = 0;
  for (std::size_t i = 0; i < p; ++i)
    if (is_jump(d.code()[i]))
      lev += std::get<Jump>(d.code()[i]).direction;
  return lev;
}

struct Positions {
  std::size_t over = 0, under = 0;
  int sign = 0;
};

inline std::map<CrossingId, Positions> oracle_positions(const Diagram &d) {
  std::map<CrossingId, Positions> out;
  for (std::size_t i = 0; i < d.code().size(); ++i)
    if (const auto *p = as_passage(d.code()[i])) {
      (p->role == Role::over ? out[p->id].over : out[p->id].under) = i;
      out[p->id].sign = p->sign;
    }
  return out;
}

/// b - a from absolute levels, wrapping once around the circle when the
/// over passage comes first.
inline std::int64_t oracle_raw_label(const Diagram &d, CrossingId c) {
  const auto pos = oracle_positions(d).at(c);
  std::int64_t raw = level_before(d, pos.over) - level_before(d, pos.under + 1);
  if (pos.over < pos.under)
    raw += oracle_degree(d);
  return raw;
}

inline int oracle_gauss(const Diagram &d, CrossingId c) {
  const auto pos = oracle_positions(d).at(c);
  const auto [lo, hi] = std::minmax(pos.over, pos.under);
  int between = 0;
  for (std::size_t i = lo + 1; i < hi; ++i)
    between += as_passage(d.code()[i]) ? 1 : 0;
  return between % 2;
}

/// Marks of edges under..over-1 plus the raw label.
inline IntVec oracle_half_curve(const Diagram &d, CrossingId c) {
  const auto pos = oracle_positions(d).at(c);
  const std::size_t n = d.code().size();
  IntVec v(2 * d.genus(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t e = (pos.under + k) % n;
    if (e == pos.over)
      break;
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] += d.mark(e)[i];
  }
  v.push_back(oracle_raw_label(d, c));
  return v;
}

inline IntVec oracle_knot_class(const Diagram &d) {
  IntVec v(2 * d.genus(), 0);
  for (std::size_t e = 0; e < d.edge_count(); ++e)
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] += d.mark(e)[i];
  v.push_back(oracle_degree(d));
  return v;
}

/// True when a - b is an integer multiple of k.
inline bool congruent_mod_vector(const IntVec &a, const IntVec &b, const IntVec &k) {
  std::optional<std::int64_t> f;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto diff = a[i] - b[i];
    if (k[i] == 0) {
      if (diff != 0)
        return false;
      continue;
    }
    if (diff % k[i] != 0)
      return false;
    if (f && *f != diff / k[i])
      return false;
    f = diff / k[i];
  }
  return true;
}

// ---- R3 geometry --------------------------------------------------------------

/// Local R3 data read off three oriented lines with a height order:
/// order flags e_T, e_M, e_B and signs s_x, s_y, s_z (x = top/middle,
/// y = top/bottom, z = middle/bottom).
struct R3Config {
  std::array<int, 3> e{};
  std::array<int, 3> s{};
  auto key() const { return std::make_pair(e, s); }
  friend bool operator<(const R3Config &a, const R3Config &b) { return a.key() < b.key(); }
};

template <typename Rng> R3Config random_lines_config(Rng &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  struct Line {
    double px, py, dx, dy;
  };
  std::array<Line, 3> L{};
  for (auto &l : L) {
    l = {u(rng), u(rng), u(rng), u(rng)};
  }
  // L[0] top, L[1] middle, L[2] bottom.
  auto param = [&](int a, int b) {
    // t on line a where it meets line b.
    const auto &A = L[a], &B = L[b];
    const double den = A.dx * B.dy - A.dy * B.dx;
    return ((B.px - A.px) * B.dy - (B.py - A.py) * B.dx) / den;
  };
  auto sgn_cross = [&](int o, int un) {
    const double c = L[o].dx * L[un].dy - L[o].dy * L[un].dx;
    return c > 0 ? 1 : -1;
  };
  R3Config cfg;
  // T meets x = M first? compare params on line 0 of crossings with 1 and 2.
  cfg.e[0] = param(0, 1) < param(0, 2) ? 1 : -1; // x first on top
  cfg.e[1] = param(1, 0) < param(1, 2) ? 1 : -1; // x first on middle
  cfg.e[2] = param(2, 0) < param(2, 1) ? 1 : -1; // y first on bottom
  cfg.s = {sgn_cross(0, 1), sgn_cross(0, 2), sgn_cross(1, 2)};
  return cfg;
}

/// A code holding the three strand pairs of an R3 configuration, separated
/// by jumps. Ids: x = 1, y = 2, z = 3.
inline Diagram r3_code(const R3Config &c) {
  auto pair = [](Symbol a, Symbol b, int e) { return e > 0 ? std::vector<Symbol>{a, b} : std::vector<Symbol>{b, a}; };
  const auto top = pair(over(1, c.s[0]), over(2, c.s[1]), c.e[0]);
  const auto mid = pair(under(1, c.s[0]), over(3, c.s[2]), c.e[1]);
  const auto bot = pair(under(2, c.s[1]), under(3, c.s[2]), c.e[2]);
  std::vector<Symbol> code;
  for (const auto *part : {&top, &mid, &bot}) {
    code.insert(code.end(), part->begin(), part->end());
    code.push_back(jump(1));
  }
  return Diagram(0, code, std::vector<IntVec>{});
}

// ---- Smith normal form oracle ---------------------------------------------------

/// d_1 ... d_k via determinantal divisors (gcd of k x k minors).
inline BigVec invariant_factors_by_minors(const IntMatrix &a) {
  const std::size_t r = a.rows(), c = a.cols(), m = std::min(r, c);
  BigVec divisors{1};
  for (std::size_t k = 1; k <= m; ++k) {
    BigInt g = 0;
    std::vector<bool> rs(r, false), cs(c, false);
    std::fill(rs.begin(), rs.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::fill(cs.begin(), cs.end(), false);
      std::fill(cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(k), true);
      do {
        IntMatrix sub(k, k);
        std::size_t ii = 0;
        for (std::size_t i = 0; i < r; ++i) {
          if (!rs[i])
            continue;
          std::size_t jj = 0;
          for (std::size_t j = 0; j < c; ++j)
            if (cs[j])
              sub(ii, jj++) = a(i, j);
          ++ii;
        }
        g = boost::multiprecision::gcd(g, determinant(sub));
      } while (std::prev_permutation(cs.begin(), cs.end()));
    } while (std::prev_permutation(rs.begin(), rs.end()));
    divisors.push_back(abs(g));
  }
  BigVec out;
  for (std::size_t k = 1; k <= m; ++k)
    out.push_back(divisors[k - 1].is_zero() ? BigInt(0) : divisors[k] / divisors[k - 1]);
  return out;
}

template <typename Rng> IntMatrix random_matrix(Rng &rng, std::size_t max_dim, int range) {
  const std::size_t r = 1 + rng() % max_dim, c = 1 + rng() % max_dim;
  std::uniform_int_distribution<int> v(-range, range);
  IntMatrix m(r, c);
  const bool sparse = rng() % 3 == 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = sparse && rng() % 2 ? 0 : v(rng);
  return m;
}

} // namespace testsupport
