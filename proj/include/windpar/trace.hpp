#pragma once

// Move traces: recording, seeded random walks, and the JSON-lines file form
//
//   {"start": "<diagram text>"}
//   {"move": {...}, "surviving": {...}, "created": [...], "destroyed": [...],
//    "r3_roles": [...], "m4_target": c, "result": "<diagram text>"}
//
// Reading replays every move and rejects the file unless each stored result
// and correspondence is reproduced exactly.

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "windpar/codec.hpp"
#include "windpar/moves.hpp"

namespace windpar {

struct TraceStep {
  Move move;
  Correspondence correspondence;
  Diagram diagram;
};

struct MoveTrace {
  Diagram start;
  std::vector<TraceStep> steps;

  /// Diagram at index i: 0 is the start, i > 0 the result of step i-1.
  const Diagram &diagram(std::size_t i) const { return i == 0 ? start : steps.at(i - 1).diagram; }
  std::size_t diagram_count() const { return steps.size() + 1; }
  const Diagram &last() const { return steps.empty() ? start : steps.back().diagram; }

  void push(const Move &m) {
    auto app = apply(last(), m);
    steps.push_back(TraceStep{m, std::move(app.correspondence), std::move(app.diagram)});
  }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of trial i under a master seed; independent of how trials are scheduled.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t i) { return splitmix64(master + i); }

namespace detail {

inline std::vector<Move> capped_moves(const Diagram &d, std::size_t cap) {
  const auto all = list_moves(d);
  const auto len = static_cast<std::int64_t>(d.size());
  std::vector<Move> out;
  auto keep = [&](auto pred) {
    for (const auto &m : all)
      if (pred(m))
        out.push_back(m);
    return !out.empty();
  };
  if (keep([&](const Move &m) { return len + growth(m) <= static_cast<std::int64_t>(cap); }))
    return out;
  if (keep([](const Move &m) { return growth(m) < 0; }))
    return out;
  if (keep([](const Move &m) { return growth(m) <= 0; }))
    return out;
  return all;
}

} // namespace detail

/// Seeded walk. Each step picks a move kind uniformly among the kinds that
/// have an admissible move, then a move of that kind uniformly.
inline MoveTrace random_walk(const Diagram &d, std::size_t steps, std::uint64_t seed, std::size_t size_cap) {
  std::mt19937_64 rng(seed);
  MoveTrace t{d, {}};
  t.steps.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const auto moves = detail::capped_moves(t.last(), size_cap);
    std::map<MoveKind, std::vector<const Move *>> by_kind;
    for (const auto &m : moves)
      by_kind[m.kind].push_back(&m);
    if (by_kind.empty())
      throw Stuck("no admissible move at step " + std::to_string(i));
    auto kind_it = by_kind.begin();
    std::advance(kind_it, static_cast<std::ptrdiff_t>(rng() % by_kind.size()));
    const auto &bucket = kind_it->second;
    t.push(*bucket[rng() % bucket.size()]);
  }
  return t;
}

// ---- JSON form ------------------------------------------------------------

using json = nlohmann::ordered_json;

namespace detail {

inline Symbol symbol_from_json(const json &j) {
  if (!j.is_string())
    throw MalformedTrace("symbol must be a string");
  try {
    return parse_symbol(j.get<std::string>(), 0);
  } catch (const SyntaxError &e) {
    throw MalformedTrace(e.what());
  }
}

} // namespace detail

inline json to_json(const Move &m) {
  json j;
  j["kind"] = name(m.kind);
  j["site"] = m.site;
  json p = json::object();
  if (!m.params.symbols.empty()) {
    p["symbols"] = json::array();
    for (const auto &s : m.params.symbols)
      p["symbols"].push_back(to_string(s));
  }
  if (!m.params.marks.empty())
    p["marks"] = m.params.marks;
  if (!m.params.targets.empty())
    p["targets"] = m.params.targets;
  if (m.params.direction)
    p["direction"] = m.params.direction;
  if (m.params.absorb)
    p["absorb"] = true;
  j["params"] = p;
  return j;
}

inline Move move_from_json(const json &j) {
  try {
    Move m;
    m.kind = parse_move_kind(j.at("kind").get<std::string>());
    m.site = j.at("site").get<std::vector<std::int64_t>>();
    if (j.contains("params")) {
      const auto &p = j.at("params");
      if (!p.is_object())
        throw MalformedTrace("params must be an object");
      for (const auto &[key, value] : p.items()) {
        if (key == "symbols") {
          for (const auto &s : value)
            m.params.symbols.push_back(detail::symbol_from_json(s));
        } else if (key == "marks") {
          m.params.marks = value.get<std::vector<IntVec>>();
        } else if (key == "targets") {
          m.params.targets = value.get<std::vector<std::size_t>>();
        } else if (key == "direction") {
          m.params.direction = value.get<int>();
        } else if (key == "absorb") {
          m.params.absorb = value.get<bool>();
        } else {
          throw MalformedTrace("unknown move parameter '" + key + "'");
        }
      }
    }
    return m;
  } catch (const json::exception &e) {
    throw MalformedTrace(std::string("bad move object: ") + e.what());
  } catch (const NotApplicable &e) {
    throw MalformedTrace(e.what());
  }
}

inline json to_json(const TraceStep &s) {
  json j;
  j["move"] = to_json(s.move);
  json surv = json::object();
  for (const auto &[from, to] : s.correspondence.surviving)
    surv[std::to_string(from)] = to;
  j["surviving"] = surv;
  j["created"] = s.correspondence.created;
  j["destroyed"] = s.correspondence.destroyed;
  if (s.correspondence.r3_roles)
    j["r3_roles"] = *s.correspondence.r3_roles;
  if (s.correspondence.m4_target)
    j["m4_target"] = *s.correspondence.m4_target;
  j["result"] = serialize(s.diagram);
  return j;
}

inline void write_trace(std::ostream &out, const MoveTrace &t) {
  out << json{{"start", serialize(t.start)}}.dump() << '\n';
  for (const auto &s : t.steps)
    out << to_json(s).dump() << '\n';
}

inline std::string trace_text(const MoveTrace &t) {
  std::ostringstream out;
  write_trace(out, t);
  return out.str();
}

namespace detail {

inline Correspondence correspondence_from_json(const json &j) {
  Correspondence c;
  for (const auto &[key, value] : j.at("surviving").items()) {
    std::size_t used = 0;
    const CrossingId from = std::stoll(key, &used);
    if (used != key.size())
      throw MalformedTrace("bad surviving key '" + key + "'");
    c.surviving[from] = value.get<CrossingId>();
  }
  c.created = j.at("created").get<std::set<CrossingId>>();
  c.destroyed = j.at("destroyed").get<std::set<CrossingId>>();
  if (j.contains("r3_roles"))
    c.r3_roles = j.at("r3_roles").get<std::array<CrossingId, 3>>();
  if (j.contains("m4_target"))
    c.m4_target = j.at("m4_target").get<CrossingId>();
  return c;
}

} // namespace detail

inline MoveTrace read_trace(std::istream &in) {
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        return true;
    }
    return false;
  };
  if (!next())
    throw MalformedTrace("empty trace file");
  MoveTrace t;
  try {
    const json head = json::parse(line);
    t.start = parse(head.at("start").get<std::string>());
  } catch (const json::exception &e) {
    throw MalformedTrace(where() + e.what());
  } catch (const Error &e) {
    throw MalformedTrace(where() + "start diagram: " + e.what());
  }
  while (next()) {
    json j;
    Correspondence stored;
    std::string result;
    Move m;
    try {
      j = json::parse(line);
      m = move_from_json(j.at("move"));
      stored = detail::correspondence_from_json(j);
      result = j.at("result").get<std::string>();
    } catch (const json::exception &e) {
      throw MalformedTrace(where() + e.what());
    } catch (const std::invalid_argument &) {
      throw MalformedTrace(where() + "bad surviving key");
    } catch (const MalformedTrace &e) {
      throw MalformedTrace(where() + e.what());
    }
    Application app;
    try {
      app = apply(t.last(), m);
    } catch (const Error &e) {
      throw MalformedTrace(where() + "replay failed: " + e.what());
    }
    if (serialize(app.diagram) != result)
      throw MalformedTrace(where() + "replayed result differs from the stored diagram");
    if (!app.correspondence.same_record(stored))
      throw MalformedTrace(where() + "replayed correspondence differs from the stored one");
    t.steps.push_back(TraceStep{std::move(m), std::move(app.correspondence), std::move(app.diagram)});
  }
  return t;
}

inline MoveTrace read_trace_text(const std::string &text) {
  std::istringstream in(text);
  return read_trace(in);
}

} // namespace windpar
