// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace windpar;
using namespace testsupport;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string &why) {
    if (ok)
      detail = why;
    ok = false;
  }
};

int failures = 0;

void report(int n, const std::string &title, const Outcome &o, double secs) {
  char t[32];
  std::snprintf(t, sizeof t, "%.3fs", secs);
  std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " (" << t << ")";
  if (!o.detail.empty())
    std::cout << " - " << o.detail;
  std::cout << std::endl;
  failures += !o.ok;
}

constexpr std::uint64_t kSeed = 20261016;
constexpr int kStarts = 100;
constexpr std::size_t kSteps = 100;
constexpr std::size_t kCap = 30;

std::string axiom_failure(const AxiomReport &r) {
  const auto &c = r.counterexamples.front();
  return std::string(name(c.axiom)) + " at step " + std::to_string(c.step) + ": expected " + c.expected +
         ", got " + c.actual;
}

} // namespace

int main() {
  // 1. The degree-two example.
  {
    const auto t0 = Clock::now();
    Outcome o;
    const auto d = parse("genus 0\ncode J+ J+");
    const auto labels = arc_labels(d);
    if (degree(d) != 2)
      o.fail("degree " + std::to_string(degree(d)));
    if (labels != std::vector<std::int64_t>{1, 0})
      o.fail("arc labels differ");
    const double secs = seconds_since(t0);
    if (secs > 1e-3)
      o.fail("slower than 1 ms");
    report(1, "degree 2 and arc labels {0,1} for J+ J+", o, secs);
  }

  // 2. Random-walk campaign: degree and knot class constant.
  std::vector<MoveTrace> campaign;
  {
    const auto t0 = Clock::now();
    Outcome o;
    std::mt19937_64 rng(kSeed);
    std::size_t total = 0;
    for (int k = 0; k < kStarts; ++k) {
      const auto d = random_start(rng);
      if (d.genus() > 3 || d.crossing_ids().size() > 12)
        o.fail("start outside the size bounds");
      auto t = random_walk(d, kSteps, trial_seed(kSeed, k), kCap);
      total += t.steps.size();
      const auto deg = degree(d);
      const auto kc = knot_class(d);
      for (std::size_t i = 0; i < t.steps.size(); ++i)
        if (degree(t.steps[i].diagram) != deg || knot_class(t.steps[i].diagram) != kc)
          o.fail("trace " + std::to_string(k) + " step " + std::to_string(i) + " changed an invariant");
      campaign.push_back(std::move(t));
    }
    if (total < 10000)
      o.fail("only " + std::to_string(total) + " steps");
    const double secs = seconds_since(t0);
    if (secs > 30)
      o.fail("slower than 30 s");
    o.detail = o.ok ? std::to_string(kStarts) + " starts, " + std::to_string(total) + " steps" : o.detail;
    report(2, "degree and knot class invariant along random walks", o, secs);
  }

  // 3. Label parity axioms with a = -1.
  {
    const auto t0 = Clock::now();
    Outcome o;
    std::size_t m4 = 0;
    for (const auto &t : campaign) {
      const auto r = check_axioms(t, parse_parity_kind("label"));
      if (!r.ok())
        o.fail(axiom_failure(r));
      m4 += r.passed(Axiom::a5);
      const auto fixed = canonical(cyclic_group(degree(t.start)), {-1});
      for (std::size_t i = 0; i < t.diagram_count(); ++i)
        if (label_parity(t.diagram(i)).fixed != fixed)
          o.fail("fixed element is not -1");
      for (std::size_t s = 0; s < t.steps.size(); ++s) {
        const auto &c = t.steps[s].correspondence;
        if (!c.m4_target)
          continue;
        const auto i = raw_crossing_label(t.diagram(s), *c.m4_target);
        const auto j = raw_crossing_label(t.diagram(s + 1), c.surviving.at(*c.m4_target));
        const auto deg = degree(t.start);
        const auto diff = i + j + 1;
        if (deg == 0 ? diff != 0 : diff % deg != 0)
          o.fail("i + j != -1 at an M4prime step");
      }
    }
    if (m4 == 0)
      o.fail("no M4prime steps in the campaign");
    report(3, "label parity satisfies A1-A5 with a = -1 (" + std::to_string(m4) + " crossing changes)", o,
           seconds_since(t0));
  }

  // 4. Homological parity.
  {
    const auto t0 = Clock::now();
    Outcome o;
    std::size_t r1 = 0, r3 = 0, m4 = 0;
    for (const auto &t : campaign) {
      const auto spec = parse_parity_kind("homological");
      const auto r = check_axioms(t, spec);
      if (!r.ok())
        o.fail(axiom_failure(r));
      BigVec a(2 * t.start.genus() + 1);
      a.back() = -1;
      const auto ps = trace_parities(t, spec);
      for (std::size_t i = 0; i < t.diagram_count(); ++i) {
        const auto &d = t.diagram(i);
        if (ps[i].fixed != canonical(ps[i].group, a))
          o.fail("fixed element differs from -[pt x S^1]");
        for (const auto &m : list_moves(d)) {
          if (m.kind != MoveKind::r1_remove)
            continue;
          ++r1;
          if (!ps[i].at(m.site[0]).is_zero())
            o.fail("removable kink with nonzero value");
        }
      }
      for (std::size_t s = 0; s < t.steps.size(); ++s) {
        const auto &c = t.steps[s].correspondence;
        if (c.r3_roles) {
          ++r3;
          const auto &d = t.diagram(s);
          if (!multiple_of(r3_raw_defect(d, *c.r3_roles), knot_class(d)))
            o.fail("R3 defect is not a multiple of [K]");
        }
        if (c.m4_target) {
          ++m4;
          const auto v = *c.m4_target;
          if (ps[s].at(v) + ps[s + 1].at(c.surviving.at(v)) != ps[s].fixed)
            o.fail("p + p' != a at an M4prime step");
        }
      }
    }
    if (r1 == 0 || m4 == 0)
      o.fail("campaign lacks R1 sites or M4prime steps");
    report(4,
           "homological parity axioms, kinks " + std::to_string(r1) + ", R3 steps " + std::to_string(r3) +
               ", crossing changes " + std::to_string(m4),
           o, seconds_since(t0));
  }

  // 5. S^1 projection equals the label parity.
  {
    const auto t0 = Clock::now();
    Outcome o;
    std::size_t compared = 0;
    for (const auto &t : campaign)
      for (std::size_t i = 0; i < t.diagram_count(); ++i) {
        const auto &d = t.diagram(i);
        const auto s1 = project_s1(homological_parity(d));
        const auto l = label_parity(d);
        for (const auto &[c, v] : l.values) {
          ++compared;
          if (s1.at(c) != v)
            o.fail("mismatch at crossing " + std::to_string(c));
        }
      }
    report(5, "project_s1(homological) equals label parity on " + std::to_string(compared) + " crossings", o,
           seconds_since(t0));
  }

  // 6. Gaussian parity.
  {
    const auto t0 = Clock::now();
    Outcome o;
    for (const auto &t : campaign) {
      const auto r = check_axioms(t, parse_parity_kind("gauss"));
      if (!r.ok())
        o.fail(axiom_failure(r));
    }
    std::mt19937_64 rng(kSeed + 6);
    for (int k = 0; k < 500; ++k) {
      const auto b = random_knotted_braid(rng, 2 + rng() % 4, 3 + rng() % 9);
      const Diagram d(0, braid_closure_code(b), std::vector<IntVec>{});
      const auto g = gaussian_parity(d);
      for (auto c : d.crossing_ids())
        if (oracle_gauss(d, c) != 0 || !g.at(c).is_zero())
          o.fail("odd crossing in a classical closure");
    }
    report(6, "Gaussian parity A1-A5 with a = 0; classical closures all even", o, seconds_since(t0));
  }

  // 7. Smith normal form.
  {
    const auto t0 = Clock::now();
    Outcome o;
    std::mt19937_64 rng(kSeed + 7);
    for (int k = 0; k < 1000; ++k) {
      const auto a = random_matrix(rng, 6, 20);
      const auto s = smith_normal_form(a);
      if (s.u * a * s.v != s.d)
        o.fail("U A V != D");
      if (abs(determinant(s.u)) != 1 || abs(determinant(s.v)) != 1)
        o.fail("U or V not unimodular");
      const auto diag = s.diagonal();
      for (std::size_t i = 0; i + 1 < diag.size(); ++i)
        if (diag[i].is_zero() ? !diag[i + 1].is_zero() : BigInt(diag[i + 1] % diag[i]) != 0)
          o.fail("divisibility chain broken");
      for (std::size_t i = 0; i < s.d.rows(); ++i)
        for (std::size_t j = 0; j < s.d.cols(); ++j)
          if (i != j && !s.d(i, j).is_zero())
            o.fail("D not diagonal");
    }
    const double secs = seconds_since(t0);
    if (secs > 5)
      o.fail("slower than 5 s");
    report(7, "Smith normal form of 1000 random matrices", o, secs);
  }

  // 8. Universal factorization.
  {
    const auto t0 = Clock::now();
    Outcome o;
    std::size_t homs = 0, detected = 0;
    const auto homological = parse_parity_kind("homological");
    for (const auto &t : campaign) {
      if (t.steps.size() < 50)
        o.fail("trace shorter than 50 steps");
      auto u = build_universal(t);
      for (const auto *k : {"label", "gauss", "homological"}) {
        const auto spec = parse_parity_kind(k);
        const auto ps = trace_parities(t, spec);
        const auto res = factor(u, t, spec);
        if (!std::holds_alternative<Hom>(res)) {
          o.fail(std::string(k) + " does not factor");
          continue;
        }
        if (const auto bad = verify_factorization(u, std::get<Hom>(res), ps))
          o.fail(std::string(k) + ": " + *bad);
        else
          ++homs;
      }
      // Corrupt the first relation whose flip is visible to the homological parity.
      const auto ps = trace_parities(t, homological);
      for (std::size_t k = 0; k < u.relations.size(); ++k) {
        const auto &[g, f] = *u.relations[k].terms.rbegin();
        const auto value = g == u.one ? ps[0].fixed : ps[u.generators[g].first].at(u.generators[g].second);
        if ((f * value + f * value).is_zero())
          continue;
        auto bad = u;
        corrupt_relation(bad, k);
        const auto res = factor(bad, ps);
        if (const auto *w = std::get_if<FactorWitness>(&res); w && w->relation == k)
          ++detected;
        else
          o.fail("corruption of relation " + std::to_string(k) + " not named");
        break;
      }
    }
    if (homs < 3 * campaign.size())
      o.fail("not every parity factored");
    if (detected < campaign.size() / 2)
      o.fail("too few corruption checks");
    report(8,
           "universal group: " + std::to_string(homs) + " factorizations, " + std::to_string(detected) +
               " corruptions named",
           o, seconds_since(t0));
  }

  // 9. Codec.
  {
    const auto t0 = Clock::now();
    Outcome o;
    std::mt19937_64 rng(kSeed + 9);
    for (int k = 0; k < 10000; ++k) {
      const auto d = random_start(rng);
      const auto text = serialize(d);
      const auto back = parse(text);
      if (!(back == d) || serialize(back) != text)
        o.fail("round trip broke on " + text);
    }
    const std::vector<std::pair<std::string, std::string>> bad = {
        {"code J+", "SyntaxError"},
        {"genus 0", "SyntaxError"},
        {"genus -1\ncode", "SyntaxError"},
        {"genus 0\ncode X1+", "SyntaxError"},
        {"genus 0\ncode O1", "SyntaxError"},
        {"genus 0\ncode J", "SyntaxError"},
        {"genus 0\ncode\nfoo 1", "SyntaxError"},
        {"genus 0\ncode O1+", "StructureError"},
        {"genus 0\ncode O1+ O1+", "StructureError"},
        {"genus 0\ncode O1+ U1-", "StructureError"},
        {"genus 0\ncode O1+ U1+ U1+", "StructureError"},
        {"genus 1\ncode O1+ U1+\nmark 2 1 0", "MarkError"},
        {"genus 1\ncode O1+ U1+\nmark 0 1", "MarkError"},
        {"genus 1\ncode O1+ U1+\nmark 0 1 0\nmark 0 0 1", "MarkError"},
    };
    for (const auto &[text, category] : bad) {
      try {
        parse(text);
        o.fail("accepted malformed input");
      } catch (const Error &e) {
        if (e.category() != category)
          o.fail("got " + e.category() + ", wanted " + category);
      }
    }
    report(9, "10000 codec round trips and " + std::to_string(bad.size()) + " malformed inputs", o,
           seconds_since(t0));
  }

  std::cout << (failures ? "FAILED " + std::to_string(failures) + " criteria" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
