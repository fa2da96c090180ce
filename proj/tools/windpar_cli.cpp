// windpar: command-line front end.
//
// Exit codes: 0 success, 1 input or validation error, 2 violation found
// (counterexamples on stdout).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "windpar/windpar.hpp"

using namespace windpar;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kInputError = 1, kViolation = 2;

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("IOError", "cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out)
    throw Error("IOError", "cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> strs(const BigVec &v) {
  std::vector<std::string> out;
  for (const auto &x : v)
    out.push_back(x.str());
  return out;
}

std::string join(const std::vector<std::string> &v, const char *sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? sep : "") + v[i];
  return out;
}

template <typename T> std::vector<std::string> strs(const std::vector<T> &v) {
  std::vector<std::string> out;
  for (const auto &x : v)
    out.push_back(std::to_string(x));
  return out;
}

// Full invariant factors are in the --json output; they can run to thousands.
std::string group_line(const FgAbelianGroup &g) { return g.describe(); }

ojson correspondence_json(const Correspondence &c) {
  TraceStep s{Move{}, c, Diagram{}};
  ojson j = to_json(s);
  j.erase("move");
  j.erase("result");
  return j;
}

// ---- subcommands ------------------------------------------------------------

int cmd_validate(const std::string &file, bool as_json) {
  const Diagram d = parse(read_file(file));
  if (as_json)
    std::cout << ojson{{"valid", true}, {"diagram", serialize(d)}}.dump(2) << '\n';
  else
    std::cout << serialize(d) << '\n';
  return kOk;
}

int cmd_info(const std::string &file, bool as_json) {
  const Diagram d = parse(read_file(file));
  const auto labels = arc_labels(d);
  const auto kc = knot_class(d);
  if (as_json) {
    ojson j;
    j["genus"] = d.genus();
    j["length"] = d.size();
    j["degree"] = degree(d);
    j["arc_labels"] = labels;
    j["knot_class"] = kc;
    ojson cs = ojson::array();
    for (auto c : d.crossing_ids()) {
      const auto l = crossing_label(d, c);
      cs.push_back({{"crossing", c},
                    {"sign", crossing_sign(d, c)},
                    {"raw_label", l.raw},
                    {"reduced_label", l.reduced.str()},
                    {"half_curve", half_curve_class(d, c)}});
    }
    j["crossings"] = cs;
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  std::cout << "genus " << d.genus() << '\n'
            << "length " << d.size() << '\n'
            << "degree " << degree(d) << '\n'
            << "arc_labels " << join(strs(labels)) << '\n'
            << "knot_class " << join(strs(kc)) << '\n';
  for (auto c : d.crossing_ids()) {
    const auto l = crossing_label(d, c);
    std::cout << "crossing " << c << " sign " << (crossing_sign(d, c) > 0 ? "+" : "-") << " raw " << l.raw
              << " reduced " << l.reduced.str() << " half_curve " << join(strs(half_curve_class(d, c))) << '\n';
  }
  return kOk;
}

int cmd_parity(const std::string &file, const std::string &kind, bool as_json) {
  const Diagram d = parse(read_file(file));
  const auto spec = parse_parity_kind(kind);
  const auto p = compute_parity(d, spec);
  if (as_json) {
    ojson j;
    j["kind"] = spec.name();
    j["group"] = p.group->describe();
    j["invariant_factors"] = strs(p.group->diagonal());
    j["fixed"] = strs(p.fixed.rep());
    ojson vals = ojson::object();
    for (const auto &[c, v] : p.values)
      vals[std::to_string(c)] = strs(v.rep());
    j["values"] = vals;
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  std::cout << "kind " << spec.name() << '\n'
            << "group " << group_line(*p.group) << '\n'
            << "fixed " << p.fixed.str() << '\n';
  for (const auto &[c, v] : p.values)
    std::cout << "crossing " << c << " " << v.str() << '\n';
  return kOk;
}

std::vector<std::int64_t> parse_site(const std::string &at) {
  std::vector<std::int64_t> out;
  std::stringstream in(at);
  for (std::string tok; std::getline(in, tok, ',');) {
    if (tok.empty())
      continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size())
        throw std::invalid_argument(tok);
    } catch (const std::exception &) {
      throw Error("SyntaxError", "bad --at entry '" + tok + "'");
    }
  }
  return out;
}

int cmd_apply(const std::string &file, const std::string &kind, const std::string &at, const std::string &params,
              const std::string &out_path, bool as_json) {
  const Diagram d = parse(read_file(file));
  ojson mj{{"kind", kind}, {"site", parse_site(at)}};
  if (!params.empty()) {
    try {
      mj["params"] = ojson::parse(params);
    } catch (const ojson::exception &e) {
      throw Error("SyntaxError", std::string("--params is not JSON: ") + e.what());
    }
  }
  Move m;
  try {
    m = move_from_json(mj);
  } catch (const MalformedTrace &e) {
    throw NotApplicable(e.what());
  }
  const auto app = apply(d, m);
  if (!out_path.empty())
    write_file(out_path, serialize(app.diagram) + "\n");
  if (as_json) {
    ojson j{{"move", to_json(m)}, {"result", serialize(app.diagram)}};
    j["correspondence"] = correspondence_json(app.correspondence);
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  std::cout << "move " << describe(m) << '\n';
  if (out_path.empty())
    std::cout << serialize(app.diagram) << '\n';
  else
    std::cout << "wrote " << out_path << '\n';
  std::cout << "correspondence " << correspondence_json(app.correspondence).dump() << '\n';
  return kOk;
}

struct WalkOptions {
  std::size_t steps = 100;
  std::uint64_t seed = 1;
  std::size_t cap = 40;
  std::string trace_out;
  std::vector<std::string> checks;
  bool inject_fault = false;
  bool as_json = false;
};

int cmd_walk(const std::string &file, const WalkOptions &o) {
  const Diagram d = parse(read_file(file));
  std::vector<ParitySpec> specs;
  for (const auto &k : o.checks)
    specs.push_back(parse_parity_kind(k));
  for (const auto &s : specs)
    compute_parity(d, s); // reject unusable kinds (e.g. BadModulus) before walking

  const MoveTrace t = random_walk(d, o.steps, o.seed, o.cap);
  if (!o.trace_out.empty()) {
    std::ofstream out(o.trace_out);
    if (!out)
      throw Error("IOError", "cannot write '" + o.trace_out + "'");
    write_trace(out, t);
  }

  std::vector<std::string> violations;
  const auto deg = degree(d);
  const auto kc = knot_class(d);
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto &r = t.steps[i].diagram;
    if (degree(r) != deg || knot_class(r) != kc)
      violations.push_back("step " + std::to_string(i) + " invariant: knot_class " + join(strs(kc)) +
                           " became " + join(strs(knot_class(r))));
  }

  std::optional<FaultInjection> fault;
  if (o.inject_fault)
    for (std::size_t i = 1; i < t.diagram_count() && !fault; ++i)
      for (const auto &[from, to] : t.steps[i - 1].correspondence.surviving)
        if (from != t.steps[i - 1].correspondence.m4_target) {
          fault = FaultInjection{to, i};
          break;
        }

  ojson reports = ojson::array();
  std::vector<std::string> summary;
  for (const auto &spec : specs) {
    const auto rep = check_axioms(t, spec, fault);
    ojson counts = ojson::object();
    std::string line = spec.name();
    for (auto a : all_axioms) {
      counts[name(a)] = {{"pass", rep.passed(a)}, {"fail", rep.failed(a)}};
      line += std::string(" ") + name(a) + " " + std::to_string(rep.passed(a)) + "/" +
              std::to_string(rep.passed(a) + rep.failed(a));
    }
    summary.push_back(line);
    reports.push_back({{"kind", spec.name()}, {"axioms", counts}});
    for (const auto &c : rep.counterexamples)
      violations.push_back("step " + std::to_string(c.step) + " " + spec.name() + " " + name(c.axiom) +
                           " crossings " + join(strs(c.crossings)) + " expected " + c.expected + " actual " +
                           c.actual);
  }

  std::map<std::string, std::size_t> kinds;
  for (const auto &s : t.steps)
    ++kinds[name(s.move.kind)];

  if (o.as_json) {
    ojson j{{"steps", t.steps.size()}, {"seed", o.seed}, {"cap", o.cap}, {"final", serialize(t.last())}};
    j["move_counts"] = kinds;
    j["checks"] = reports;
    j["violations"] = violations;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "steps " << t.steps.size() << " seed " << o.seed << " cap " << o.cap << '\n';
    for (const auto &[k, n] : kinds)
      std::cout << "moves " << k << " " << n << '\n';
    for (const auto &l : summary)
      std::cout << "check " << l << '\n';
    for (const auto &v : violations)
      std::cout << "violation " << v << '\n';
    std::cout << (violations.empty() ? "ok" : "FAILED") << '\n';
  }
  return violations.empty() ? kOk : kViolation;
}

int cmd_universal(const std::string &file, const std::vector<std::string> &factor_kinds,
                  std::optional<std::size_t> corrupt, bool as_json) {
  std::ifstream in(file);
  if (!in)
    throw Error("IOError", "cannot open '" + file + "'");
  const MoveTrace t = read_trace(in);
  UniversalPresentation u = build_universal(t);
  if (corrupt)
    corrupt_relation(u, *corrupt);

  ojson factors = ojson::array();
  std::vector<std::string> lines, violations;
  for (const auto &k : factor_kinds) {
    const auto spec = parse_parity_kind(k);
    const auto ps = trace_parities(t, spec);
    const auto res = factor(u, t, spec);
    if (const auto *w = std::get_if<FactorWitness>(&res)) {
      const auto &r = u.relations[w->relation];
      violations.push_back(spec.name() + " relation " + std::to_string(w->relation) + " (type " +
                           std::to_string(r.type) + ", " + r.note + ") maps to " + w->image.str());
      factors.push_back({{"kind", spec.name()}, {"hom", false}, {"relation", w->relation}, {"note", r.note},
                         {"image", strs(w->image.rep())}});
      continue;
    }
    const Hom &rho = std::get<Hom>(res);
    if (auto bad = verify_factorization(u, rho, ps)) {
      violations.push_back(spec.name() + " " + *bad);
      factors.push_back({{"kind", spec.name()}, {"hom", true}, {"commutes", false}, {"detail", *bad}});
      continue;
    }
    lines.push_back(spec.name() + " hom rho(1) = " + rho(u.one_class).str());
    factors.push_back({{"kind", spec.name()}, {"hom", true}, {"commutes", true},
                       {"rho_one", strs(rho(u.one_class).rep())}});
  }

  if (as_json) {
    ojson j = presentation_report(u);
    j["factor"] = factors;
    j["violations"] = violations;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "generators " << u.generators.size() << " (" << u.reduced_members.size() << " after identification)\n"
              << "relations " << u.relations.size() << '\n'
              << "group " << group_line(*u.group) << '\n'
              << "one_class " << u.one_class.str() << '\n';
    for (const auto &[key, cls] : u.classes)
      std::cout << "class " << key.first << ":" << key.second << " " << cls.str() << '\n';
    for (const auto &l : lines)
      std::cout << "factor " << l << '\n';
    for (const auto &v : violations)
      std::cout << "violation " << v << '\n';
  }
  return violations.empty() ? kOk : kViolation;
}

IntMatrix read_matrix(const std::string &text) {
  std::istringstream in(text);
  long long rows = -1, cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw Error("SyntaxError", "matrix file must start with 'rows cols'");
  std::vector<BigVec> data(static_cast<std::size_t>(rows), BigVec(static_cast<std::size_t>(cols)));
  for (auto &row : data)
    for (auto &x : row) {
      std::string tok;
      if (!(in >> tok))
        throw Error("SyntaxError", "matrix file has too few entries");
      try {
        x = BigInt(tok);
      } catch (const std::exception &) {
        throw Error("SyntaxError", "bad matrix entry '" + tok + "'");
      }
    }
  if (std::string extra; in >> extra)
    throw Error("SyntaxError", "matrix file has extra entries");
  IntMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      m(i, j) = data[i][j];
  return m;
}

ojson matrix_json(const IntMatrix &m) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

int cmd_snf(const std::string &file, bool as_json) {
  const IntMatrix a = read_matrix(read_file(file));
  const auto s = smith_normal_form(a);
  if (as_json) {
    std::cout << ojson{{"U", matrix_json(s.u)}, {"D", matrix_json(s.d)}, {"V", matrix_json(s.v)},
                       {"diagonal", strs(s.diagonal())}}
                     .dump(2)
              << '\n';
    return kOk;
  }
  std::cout << "U\n" << s.u << "D\n" << s.d << "V\n" << s.v << "diagonal " << join(strs(s.diagonal())) << '\n';
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Knot diagrams in S_g x S^1: moves, winding parities, universal parity group"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  std::string file, kind, move, at, params, out_path, factor_list;
  auto *validate = app.add_subcommand("validate", "Parse a diagram and print its canonical form");
  validate->add_option("file", file, "Diagram file")->required();
  validate->add_flag("--json", as_json);

  auto *info = app.add_subcommand("info", "Degree, arc labels, crossing labels, knot class");
  info->add_option("file", file, "Diagram file")->required();
  info->add_flag("--json", as_json);

  auto *parity = app.add_subcommand("parity", "Print a parity assignment");
  parity->add_option("file", file, "Diagram file")->required();
  parity->add_option("--kind", kind, "label | label-mod:<n> | gauss | homological | homological-s1 | "
                                     "homological-sg-oriented")
      ->required();
  parity->add_flag("--json", as_json);

  auto *applyc = app.add_subcommand("apply", "Apply one move");
  applyc->add_option("file", file, "Diagram file")->required();
  applyc->add_option("--move", move, "Move kind, e.g. R1_remove, M4prime")->required();
  applyc->add_option("--at", at, "Comma-separated site (crossing ids or positions)");
  applyc->add_option("--params", params, "Move parameters as a JSON object");
  applyc->add_option("--out", out_path, "Write the resulting diagram here");
  applyc->add_flag("--json", as_json);

  WalkOptions wo;
  std::string checks;
  auto *walk = app.add_subcommand("walk", "Seeded random walk with invariant and axiom checks");
  walk->add_option("file", file, "Start diagram file")->required();
  walk->add_option("--steps", wo.steps, "Number of moves")->capture_default_str();
  walk->add_option("--seed", wo.seed, "RNG seed")->capture_default_str();
  walk->add_option("--cap", wo.cap, "Code length cap")->capture_default_str();
  walk->add_option("--trace-out", wo.trace_out, "Write the trace (JSON lines)");
  walk->add_option("--check", checks, "Comma-separated parity kinds to check");
  walk->add_flag("--inject-fault", wo.inject_fault, "Shift one parity value mid-walk (self-test)");
  walk->add_flag("--json", as_json);

  std::optional<std::size_t> corrupt;
  auto *universal = app.add_subcommand("universal", "Universal winding parity group of a trace");
  universal->add_option("file", file, "Trace file (JSON lines)")->required();
  universal->add_option("--factor", factor_list, "Comma-separated parity kinds to factor");
  universal->add_option("--corrupt-relation", corrupt, "Flip one relation before factoring (self-test)");
  universal->add_flag("--json", as_json);

  auto *snf = app.add_subcommand("snf", "Smith normal form of an integer matrix");
  snf->add_option("file", file, "Matrix file: 'rows cols' then entries")->required();
  snf->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  auto split = [](const std::string &s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string tok; std::getline(in, tok, ',');)
      if (!tok.empty())
        out.push_back(tok);
    return out;
  };

  try {
    if (*validate)
      return cmd_validate(file, as_json);
    if (*info)
      return cmd_info(file, as_json);
    if (*parity)
      return cmd_parity(file, kind, as_json);
    if (*applyc)
      return cmd_apply(file, move, at, params, out_path, as_json);
    if (*walk) {
      wo.checks = split(checks);
      wo.as_json = as_json;
      return cmd_walk(file, wo);
    }
    if (*universal)
      return cmd_universal(file, split(factor_list), corrupt, as_json);
    if (*snf)
      return cmd_snf(file, as_json);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
