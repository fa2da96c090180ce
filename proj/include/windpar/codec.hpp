#pragma once

// Line-oriented diagram text format:
//
//   # comment
//   genus <g>
//   code <sym> <sym> ...        sym in { O<id><+|->, U<id><+|->, J+, J- }
//   mark <edge> <int> ... <int> exactly 2g integers
//
// serialize() emits the canonical form: zero marks omitted, mark lines sorted
// by edge index, no trailing newline.

#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "windpar/diagram.hpp"

namespace windpar {

namespace detail {

inline std::vector<std::string> split_ws(const std::string &line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;)
    out.push_back(tok);
  return out;
}

template <typename Int> Int parse_int(std::string_view tok, std::size_t line_no) {
  Int value{};
  const char *first = tok.data();
  if (!tok.empty() && tok.front() == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw SyntaxError("line " + std::to_string(line_no) + ": bad integer '" + std::string(tok) + "'");
  return value;
}

inline Symbol parse_symbol(const std::string &tok, std::size_t line_no) {
  auto bad = [&] {
    return SyntaxError("line " + std::to_string(line_no) + ": bad symbol '" + tok + "'");
  };
  if (tok.size() < 2)
    throw bad();
  const char last = tok.back();
  if (last != '+' && last != '-')
    throw bad();
  const int sign = last == '+' ? 1 : -1;
  if (tok.front() == 'J') {
    if (tok.size() != 2)
      throw bad();
    return jump(sign);
  }
  if (tok.front() != 'O' && tok.front() != 'U')
    throw bad();
  const std::string_view digits(tok.data() + 1, tok.size() - 2);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                     [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    throw bad();
  const auto id = parse_int<CrossingId>(digits, line_no);
  if (id <= 0)
    throw bad();
  return tok.front() == 'O' ? over(id, sign) : under(id, sign);
}

} // namespace detail

inline Diagram parse(const std::string &text) {
  std::istringstream in(text);
  std::optional<std::size_t> genus;
  std::optional<std::vector<Symbol>> code;
  std::map<std::size_t, IntVec> marks;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> mark_lines;

  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto toks = detail::split_ws(line);
    if (toks.empty() || toks.front().front() == '#')
      continue;
    const std::string &key = toks.front();
    if (!genus && key != "genus")
      throw SyntaxError("line " + std::to_string(line_no) + ": expected 'genus' first");
    if (key == "genus") {
      if (genus)
        throw SyntaxError("line " + std::to_string(line_no) + ": duplicate 'genus' line");
      if (toks.size() != 2)
        throw SyntaxError("line " + std::to_string(line_no) + ": 'genus' takes one integer");
      const auto g = detail::parse_int<long long>(toks[1], line_no);
      if (g < 0)
        throw SyntaxError("line " + std::to_string(line_no) + ": negative genus");
      genus = static_cast<std::size_t>(g);
    } else if (key == "code") {
      if (code)
        throw SyntaxError("line " + std::to_string(line_no) + ": duplicate 'code' line");
      code.emplace();
      for (std::size_t i = 1; i < toks.size(); ++i)
        code->push_back(detail::parse_symbol(toks[i], line_no));
    } else if (key == "mark") {
      mark_lines.emplace_back(line_no, toks);
    } else {
      throw SyntaxError("line " + std::to_string(line_no) + ": unknown keyword '" + key + "'");
    }
  }
  if (!genus)
    throw SyntaxError("missing 'genus' line");
  if (!code)
    throw SyntaxError("missing 'code' line");

  const std::size_t edges = std::max<std::size_t>(code->size(), 1);
  for (const auto &[ln, toks] : mark_lines) {
    if (toks.size() < 2)
      throw SyntaxError("line " + std::to_string(ln) + ": 'mark' needs an edge index");
    const auto edge = detail::parse_int<long long>(toks[1], ln);
    IntVec v;
    for (std::size_t i = 2; i < toks.size(); ++i)
      v.push_back(detail::parse_int<std::int64_t>(toks[i], ln));
    if (edge < 0 || static_cast<std::size_t>(edge) >= edges)
      throw MarkError("line " + std::to_string(ln) + ": edge index " + std::to_string(edge) +
                      " out of range (" + std::to_string(edges) + " edges)");
    if (v.size() != 2 * *genus)
      throw MarkError("line " + std::to_string(ln) + ": mark has " + std::to_string(v.size()) +
                      " entries, expected " + std::to_string(2 * *genus));
    if (!marks.emplace(static_cast<std::size_t>(edge), std::move(v)).second)
      throw MarkError("line " + std::to_string(ln) + ": duplicate mark for edge " +
                      std::to_string(edge));
  }
  return Diagram(*genus, std::move(*code), marks);
}

inline std::string serialize(const Diagram &d) {
  std::string out = "genus " + std::to_string(d.genus()) + "\ncode";
  for (const auto &s : d.code())
    out += " " + to_string(s);
  for (std::size_t e = 0; e < d.edge_count(); ++e) {
    if (is_zero(d.mark(e)))
      continue;
    out += "\nmark " + std::to_string(e);
    for (auto x : d.mark(e))
      out += " " + std::to_string(x);
  }
  return out;
}

} // namespace windpar
