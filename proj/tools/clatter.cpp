// clatter: command-line front end for the cluster library.
//
// Every command builds one JSON report. --json prints it as is; otherwise
// the same report is rendered as text, preceded by a headline that restates
// its verdict or count.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "clatter/geometry.hpp"
#include "clatter/inductive.hpp"
#include "clatter/isomorphism.hpp"
#include "clatter/json.hpp"
#include "clatter/peaks.hpp"
#include "clatter/rewriting.hpp"
#include "clatter/terms.hpp"

using namespace clatter;

namespace {

enum Exit { kOk = 0, kRefuted = 1, kInputError = 2, kCapExceeded = 3, kUnknown = 4 };

// -- text rendering ---------------------------------------------------------

bool is_cluster_object(const Json& j) {
  return j.is_object() && j.size() == 2 && j.contains("skeleton") &&
         j.contains("assignment");
}

bool is_redex_object(const Json& j) {
  return j.is_object() && j.size() == 2 && j.contains("rule") && j.contains("pos");
}

bool looks_like_position(const std::string& s) {
  return s.size() > 2 && s[s.size() - 2] == ':' &&
         (s.back() == 'v' || s.back() == 'e');
}

std::optional<std::string> inline_text(const std::string& key, const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
  if (j.is_number() || j.is_null()) return j.dump();
  if (is_cluster_object(j)) {
    std::string out = "⟨" + j["skeleton"].get<std::string>() + ", [";
    bool first = true;
    for (const auto& [gap, pattern] : j["assignment"].items()) {
      out += (first ? "" : ", ") + gap + " := " + pattern.get<std::string>();
      first = false;
    }
    return out + "]⟩";
  }
  if (is_redex_object(j))
    return j["rule"].get<std::string>() + "@" + j["pos"].get<std::string>();
  if (!j.is_array()) return std::nullopt;

  // Position sets print as {..}, pairs of terms as (a, b), other lists as [..].
  static const std::set<std::string> position_keys{
      "tree", "internal", "geometric", "roundTrip", "positions",
      "joinPositions", "topPositions", "missing"};
  std::vector<std::string> items;
  bool positions = position_keys.contains(key);
  for (const auto& item : j) {
    auto text = inline_text("", item);
    if (!text) return std::nullopt;
    if (!item.is_string() || !looks_like_position(*text)) positions = false;
    items.push_back(*text);
  }
  const bool pair = !positions && items.size() == 2 && j[0].is_string() &&
                    (key == "targets" || key.empty());
  std::string out = positions ? "{" : pair ? "(" : "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + (positions ? "}" : pair ? ")" : "]");
}

void render(std::ostream& out, const Json& report, int indent) {
  const std::string pad(indent, ' ');
  for (const auto& [key, value] : report.items()) {
    if (auto text = inline_text(key, value)) {
      out << pad << key << ": " << *text << '\n';
    } else if (value.is_object()) {
      out << pad << key << ":\n";
      render(out, value, indent + 2);
    } else {
      out << pad << key << ": " << value.size() << '\n';
      std::size_t i = 0;
      for (const auto& item : value) {
        out << pad << "  [" << ++i << "]";
        if (auto text = inline_text("", item)) {
          out << ' ' << *text << '\n';
        } else {
          out << '\n';
          render(out, item, indent + 4);
        }
      }
    }
  }
}

struct Output {
  bool json = false;

  int emit(const std::string& headline, const Json& report, int code) const {
    if (json) {
      std::cout << report.dump(2) << '\n';
    } else {
      std::cout << headline << '\n';
      render(std::cout, report, 0);
    }
    return code;
  }
};

// -- inputs -----------------------------------------------------------------

Term parse_standalone(const std::string& text, const std::vector<std::string>& vars) {
  return parse_term(text, std::set<std::string>(vars.begin(), vars.end()));
}

// Terms read against a TRS use its VAR block; x<digits> names are reserved
// for variables, so standardized output can be fed back in.
Term parse_against(const std::string& text, const TRS& trs) {
  auto vars = trs.declared_variables;
  static const std::regex standard("x[0-9]+");
  for (std::sregex_iterator it(text.begin(), text.end(), standard), end; it != end; ++it)
    vars.insert(it->str());
  Signature sig = trs.signature;
  return parse_term(text, vars, sig);
}

Json parse_json_arg(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON in ") + what + ": " + e.what(), e.byte);
  }
}

// --left/--right take a JSON list of {"rule", "pos"}; --peak takes a file
// with {"source", "left", "right"} instead.
struct PeakArgs {
  std::string file, source, left, right, peak_file;

  void add(CLI::App* cmd) {
    cmd->add_option("file", file, "TRS in the COPS subset")->required();
    cmd->add_option("--source", source, "source term");
    cmd->add_option("--left", left, R"(left step, e.g. '[{"rule":"r1","pos":"eps"}]')");
    cmd->add_option("--right", right, "right step, same format");
    cmd->add_option("--peak", peak_file, "JSON file with source, left and right");
  }

  Peak read(const TRS& trs) const {
    Json spec;
    if (!peak_file.empty()) {
      std::ifstream in(peak_file);
      if (!in) throw ParseError("cannot read " + peak_file, 0);
      std::stringstream buf;
      buf << in.rdbuf();
      spec = parse_json_arg(buf.str(), peak_file.c_str());
    } else {
      if (source.empty() || left.empty() || right.empty())
        throw ParseError("give --source, --left and --right, or --peak", 0);
      spec = Json{{"source", source},
                  {"left", parse_json_arg(left, "--left")},
                  {"right", parse_json_arg(right, "--right")}};
    }
    try {
      Term t = parse_against(spec.at("source").get<std::string>(), trs);
      return Peak{t, multistep_from_redexes(t, spec.at("left"), trs),
                  multistep_from_redexes(t, spec.at("right"), trs)};
    } catch (const Json::exception& e) {
      throw ParseError(std::string("bad peak specification: ") + e.what(), 0);
    }
  }
};

// -- commands ---------------------------------------------------------------

int cmd_positions(const Output& out, const std::string& text,
                  const std::vector<std::string>& vars) {
  Term t = parse_standalone(text, vars);
  Json report{{"term", t.to_string()},
              {"tree", to_json(tree_positions(t))},
              {"internal", to_json(internal_positions(t))}};
  return out.emit("positions of " + t.to_string(), report, kOk);
}

int cmd_clusters(const Output& out, const std::string& text,
                 const std::vector<std::string>& vars, std::size_t max_positions) {
  Term t = parse_standalone(text, vars);
  Json list = Json::array();
  for (const auto& g : enumerate_clusters(t, max_positions))
    list.push_back(Json{{"positions", to_json(g.positions())},
                        {"cluster", to_json(to_inductive(g))}});
  std::size_t n = list.size();
  Json report{{"term", t.to_string()}, {"count", n}, {"clusters", std::move(list)}};
  return out.emit(std::to_string(n) + (n == 1 ? " cluster" : " clusters"), report, kOk);
}

int cmd_iso(const Output& out, const std::string& text,
            const std::vector<std::string>& positions,
            const std::vector<std::string>& vars) {
  Term t = parse_standalone(text, vars);
  auto ps = parse_position_set(positions);
  auto ind = to_inductive(t, ps);
  auto back = to_geometric(ind).positions();
  Json report{{"term", t.to_string()},
              {"geometric", to_json(ps)},
              {"inductive", to_json(ind)},
              {"roundTrip", to_json(back)},
              {"roundTripOk", back == ps}};
  return out.emit(ind.to_string(), report, back == ps ? kOk : kRefuted);
}

int cmd_critical_pairs(const Output& out, const std::string& file, bool verify) {
  auto trs = load_trs_file(file);
  Json pairs = Json::array();
  std::size_t mismatches = 0;
  for (const auto& cp : classical_critical_peaks(trs)) {
    Json j = to_json(cp);
    if (verify) {
      auto r = is_critical(cp.peak);
      if (!r.is_critical) ++mismatches;
      j["lattice"] = to_json(r);
    }
    pairs.push_back(std::move(j));
  }
  std::size_t n = pairs.size();
  std::string verdict = !verify ? "listed" : mismatches ? "mismatch" : "verified";
  Json report{{"verdict", verdict}, {"criticalPairs", std::move(pairs)},
              {"counterexamples", Json::array()}};
  if (mismatches) {
    for (const auto& cp : report["criticalPairs"])
      if (!cp["lattice"]["isCritical"].get<bool>())
        report["counterexamples"].push_back(cp["source"]);
    std::cerr << "error: " << mismatches
              << " classical critical pair(s) are not critical in the lattice sense\n";
  }
  std::string headline = std::to_string(n) + " critical pair" + (n == 1 ? "" : "s");
  if (verify) headline += mismatches ? ", LATTICE MISMATCH" : ", all lattice-verified";
  return out.emit(headline, report, mismatches ? kRefuted : kOk);
}

int cmd_is_critical(const Output& out, const PeakArgs& args) {
  auto trs = load_trs_file(args.file);
  Peak p = args.read(trs);
  auto r = is_critical(p);
  Json report = to_json(r);
  report["peak"] = to_json(p);
  return out.emit(report["verdict"].get<std::string>(), report, kOk);
}

int cmd_decompose(const Output& out, const PeakArgs& args) {
  auto trs = load_trs_file(args.file);
  Peak p = args.read(trs);
  Json report{{"verdict", ""}, {"peak", to_json(p)}};
  auto r = is_critical(p);
  if (r.is_critical) {
    report["verdict"] = "critical";
    if (auto g = critical_generalization(p)) {
      report["criticalPeak"] = to_json(g->critical);
      Json sigma = Json::object();
      for (const auto& [v, t] : g->instance) sigma[v] = t.to_string();
      report["instance"] = sigma;
    }
    return out.emit("critical peak; nothing to decompose", report, kOk);
  }
  if (p.pattern_count() < 2) {
    report["verdict"] = "single pattern";
    return out.emit(
        "proper instance of a rule application, no analysis", report, kOk);
  }
  auto d = decompose(p);
  report["verdict"] = "decomposed";
  report["splitEdge"] = d.split_edge.to_string();
  report["variable"] = d.variable;
  report["outer"] = to_json(d.outer);
  report["inner"] = to_json(d.inner);
  return out.emit("decomposed at " + d.split_edge.to_string(), report, kOk);
}

int cmd_local_confluence(const Output& out, const std::string& file, std::size_t depth) {
  auto trs = load_trs_file(file);
  auto lc = local_confluence_report(trs, depth);
  Json pairs = Json::array();
  for (std::size_t i = 0; i < lc.pairs.size(); ++i) {
    Json j = to_json(lc.pairs[i]);
    j["join"] = to_json(lc.joins[i]);
    pairs.push_back(std::move(j));
  }
  Json counter = Json::array();
  for (const auto& [a, b] : lc.counterexamples)
    counter.push_back(Json::array({a.to_string(), b.to_string()}));
  Json report{{"verdict", to_string(lc.verdict)},
              {"depth", depth},
              {"criticalPairs", std::move(pairs)},
              {"counterexamples", std::move(counter)}};
  switch (lc.verdict) {
    case Verdict::Holds:
      return out.emit("locally confluent", report, kOk);
    case Verdict::Refuted:
      return out.emit("NOT locally confluent", report, kRefuted);
    case Verdict::Unknown:
      break;
  }
  return out.emit("local confluence unknown within depth " + std::to_string(depth),
                  report, kUnknown);
}

int cmd_orthogonal(const Output& out, const std::string& file) {
  auto trs = load_trs_file(file);
  auto o = orthogonality(trs);
  Json pairs = Json::array();
  for (const auto& cp : o.pairs) pairs.push_back(to_json(cp));
  Json report{{"verdict", o.orthogonal ? "orthogonal" : "not orthogonal"},
              {"criticalPairs", std::move(pairs)},
              {"counterexamples", Json::array()}};
  return out.emit(o.orthogonal ? "orthogonal" : "NOT orthogonal", report,
                  o.orthogonal ? kOk : kRefuted);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clusters, steps and critical peaks of left-linear rewrite systems"};
  app.require_subcommand(1);
  Output out;
  std::vector<std::string> vars;
  auto add_common = [&](CLI::App* cmd, bool with_vars) {
    cmd->add_flag("--json", out.json, "print the report as JSON");
    if (with_vars)
      cmd->add_option("--var", vars, "variable name (repeatable)")
          ->allow_extra_args(false)
          ->delimiter(',');
  };

  std::string term;
  std::vector<std::string> positions;
  std::size_t max_positions = kDefaultMaxClusterPositions;
  std::string file;
  bool verify = false;
  std::size_t depth = kDefaultMaxDepth;
  PeakArgs peak_args;

  auto* pos_cmd = app.add_subcommand("positions", "tree and internal positions of a term");
  pos_cmd->add_option("term", term)->required();
  add_common(pos_cmd, true);

  auto* cl_cmd = app.add_subcommand("clusters", "enumerate the clusters of a term");
  cl_cmd->add_option("term", term)->required();
  cl_cmd->add_option("--max-positions", max_positions, "cap on internal positions");
  add_common(cl_cmd, true);

  auto* iso_cmd = app.add_subcommand("iso", "geometric cluster to inductive and back");
  iso_cmd->add_option("term", term)->required();
  iso_cmd->add_option("positions", positions, "positions such as 1:v or 1.2:e");
  add_common(iso_cmd, true);

  auto* cp_cmd = app.add_subcommand("critical-pairs", "classical critical pairs of a TRS");
  cp_cmd->add_option("file", file)->required();
  cp_cmd->add_flag("--verify-lattice", verify, "check each pair with the lattice definition");
  add_common(cp_cmd, false);

  auto* ic_cmd = app.add_subcommand("is-critical", "decide whether a peak is critical");
  peak_args.add(ic_cmd);
  add_common(ic_cmd, false);

  auto* dc_cmd = app.add_subcommand("decompose", "split a non-critical peak");
  peak_args.add(dc_cmd);
  add_common(dc_cmd, false);

  auto* lc_cmd = app.add_subcommand("local-confluence", "join every critical pair");
  lc_cmd->add_option("file", file)->required();
  lc_cmd->add_option("--depth", depth, "rewrite steps allowed on each side");
  add_common(lc_cmd, false);

  auto* or_cmd = app.add_subcommand("orthogonal", "check orthogonality");
  or_cmd->add_option("file", file)->required();
  add_common(or_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*pos_cmd) return cmd_positions(out, term, vars);
    if (*cl_cmd) return cmd_clusters(out, term, vars, max_positions);
    if (*iso_cmd) return cmd_iso(out, term, positions, vars);
    if (*cp_cmd) return cmd_critical_pairs(out, file, verify);
    if (*ic_cmd) return cmd_is_critical(out, peak_args);
    if (*dc_cmd) return cmd_decompose(out, peak_args);
    if (*lc_cmd) return cmd_local_confluence(out, file, depth);
    if (*or_cmd) return cmd_orthogonal(out, file);
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
