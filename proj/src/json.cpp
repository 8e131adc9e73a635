#include "clatter/json.hpp"

namespace clatter {

Json to_json(const PositionSet& s) {
  Json out = Json::array();
  for (const auto& p : s) out.push_back(p.to_string());
  return out;
}

PositionSet position_set_from_json(const Json& j) {
  PositionSet out;
  for (const auto& item : j) out.insert(Position::parse(item.get<std::string>()));
  return out;
}

Json to_json(const InductiveCluster& c) {
  Json assignment = Json::object();
  for (const auto& gap : gap_order(c.skeleton)) {
    auto it = c.assignment.find(gap);
    if (it != c.assignment.end()) assignment[gap] = it->second.to_string();
  }
  for (const auto& [gap, pattern] : c.assignment)
    if (!assignment.contains(gap)) assignment[gap] = pattern.to_string();
  return Json{{"skeleton", c.skeleton.to_string()}, {"assignment", assignment}};
}

InductiveCluster cluster_from_json(const Json& j,
                                   const std::set<std::string>& vars,
                                   Signature& sig) {
  std::set<std::string> gaps;
  for (const auto& [gap, pattern] : j.at("assignment").items()) gaps.insert(gap);
  InductiveCluster c{
      parse_term(j.at("skeleton").get<std::string>(), vars, sig, gaps), {}};
  for (const auto& [gap, pattern] : j.at("assignment").items()) {
    // Pattern variables are x1..xn whatever the subject's vocabulary; a
    // pattern cannot have more variables than characters.
    auto text = pattern.get<std::string>();
    std::set<std::string> pattern_vars;
    for (std::size_t i = 1; i <= text.size(); ++i)
      pattern_vars.insert(standard_variable(i));
    c.assignment.emplace(gap, parse_term(text, pattern_vars, sig));
  }
  require_valid(c);
  return c;
}

Json redexes_to_json(const MultiStep& m) {
  Json out = Json::array();
  for (const auto& occ : occurrences_of(m))
    out.push_back(
        Json{{"rule", occ.rule.name}, {"pos", path_to_string(occ.position)}});
  return out;
}

Json to_json(const MultiStep& m) {
  return Json{{"source", m.source.to_string()}, {"redexes", redexes_to_json(m)}};
}

MultiStep multistep_from_redexes(const Term& source, const Json& redexes,
                                 const TRS& trs) {
  std::vector<std::pair<std::string, Path>> list;
  for (const auto& r : redexes)
    list.emplace_back(r.at("rule").get<std::string>(),
                      parse_path(r.at("pos").get<std::string>()));
  return make_multistep(source, trs, list);
}

MultiStep multistep_from_json(const Json& j, const TRS& trs,
                              const std::set<std::string>& vars) {
  Signature sig = trs.signature;
  Term source = parse_term(j.at("source").get<std::string>(), vars, sig);
  return multistep_from_redexes(source, j.at("redexes"), trs);
}

Json to_json(const Peak& p) {
  return Json{{"source", p.source.to_string()},
              {"left", redexes_to_json(p.left)},
              {"right", redexes_to_json(p.right)},
              {"leftTarget", project(p.left, Side::Right).to_string()},
              {"rightTarget", project(p.right, Side::Right).to_string()}};
}

Json to_json(const CriticalityReport& r) {
  return Json{{"verdict", r.is_critical ? "critical" : "not critical"},
              {"joinPositions", to_json(r.join_positions)},
              {"topPositions", to_json(r.top_positions)},
              {"missing", to_json(r.missing)},
              {"isCritical", r.is_critical},
              {"isTrivial", r.is_trivial},
              {"overlapSize", r.overlap_size},
              {"sourceLinear", r.source_linear}};
}

Json to_json(const CriticalPair& cp) {
  return Json{{"source", cp.peak.source.to_string()},
              {"outerRule", cp.outer_rule},
              {"innerRule", cp.inner_rule},
              {"position", path_to_string(cp.position)},
              {"targets",
               Json::array({cp.targets.first.to_string(),
                            cp.targets.second.to_string()})}};
}

Json to_json(const JoinResult& r) {
  Json out{{"verdict", to_string(r.verdict)}};
  if (r.witness) {
    out["witness"] = r.witness->to_string();
    Json left = Json::array(), right = Json::array();
    for (const auto& t : r.left_trace) left.push_back(t.to_string());
    for (const auto& t : r.right_trace) right.push_back(t.to_string());
    out["leftTrace"] = left;
    out["rightTrace"] = right;
  }
  return out;
}

}  // namespace clatter
