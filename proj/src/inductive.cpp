#include "clatter/inductive.hpp"

#include <stdexcept>

#include "clatter/geometry.hpp"
#include "clatter/isomorphism.hpp"

namespace clatter {

std::string canonical_gap(std::size_t index) {
  return "X" + std::to_string(index);
}

namespace {

void collect_gaps(const Term& t, std::vector<std::string>& out) {
  if (t.is_gap()) out.push_back(t.name());
  for (const auto& a : t.args()) collect_gaps(a, out);
}

void collect_gap_arities(const Term& t,
                         std::vector<std::pair<std::string, std::size_t>>& out) {
  if (t.is_gap()) out.emplace_back(t.name(), t.arity());
  for (const auto& a : t.args()) collect_gap_arities(a, out);
}

Term rename_gaps(const Term& t, const std::map<std::string, std::string>& to) {
  if (!t.has_gaps()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(rename_gaps(a, to));
  if (t.is_gap()) return Term::gap(to.at(t.name()), std::move(args));
  return Term::function(t.name(), std::move(args));
}

}  // namespace

std::vector<std::string> gap_order(const Term& skeleton) {
  std::vector<std::string> out;
  collect_gaps(skeleton, out);
  return out;
}

Term instantiate_gaps(const Term& skeleton,
                      const std::map<std::string, Term>& templates) {
  if (!skeleton.has_gaps() || skeleton.is_variable()) return skeleton;
  std::vector<Term> args;
  args.reserve(skeleton.arity());
  for (const auto& a : skeleton.args())
    args.push_back(instantiate_gaps(a, templates));
  if (skeleton.is_gap()) {
    auto it = templates.find(skeleton.name());
    if (it != templates.end()) {
      Substitution sigma;
      for (std::size_t i = 0; i < args.size(); ++i)
        sigma.emplace(standard_variable(i + 1), args[i]);
      return apply_subst(sigma, it->second);
    }
    return Term::gap(skeleton.name(), std::move(args));
  }
  return Term::function(skeleton.name(), std::move(args));
}

std::vector<std::string> validate(const InductiveCluster& c) {
  std::vector<std::string> violations;
  std::vector<std::pair<std::string, std::size_t>> occurrences;
  collect_gap_arities(c.skeleton, occurrences);
  std::map<std::string, std::size_t> arity;
  for (const auto& [gap, n] : occurrences) {
    if (!arity.emplace(gap, n).second)
      violations.push_back("skeleton not linear in gaps: gap " + gap +
                           " occurs more than once");
  }
  for (const auto& [gap, n] : arity) {
    auto it = c.assignment.find(gap);
    if (it == c.assignment.end()) {
      violations.push_back("gap " + gap + " has no pattern");
      continue;
    }
    const Term& pattern = it->second;
    if (pattern.is_variable()) {
      violations.push_back("pattern is a variable: " + gap + " := " +
                           pattern.to_string());
      continue;
    }
    if (pattern.has_gaps())
      violations.push_back("pattern for " + gap + " contains gaps");
    if (!is_standard(pattern))
      violations.push_back("pattern for " + gap + " is not standard: " +
                           pattern.to_string());
    auto pattern_arity = variable_occurrences(pattern).size();
    if (pattern_arity != n)
      violations.push_back("arity mismatch: gap " + gap + " applied to " +
                           std::to_string(n) + " argument(s), pattern " +
                           pattern.to_string() + " has arity " +
                           std::to_string(pattern_arity));
  }
  for (const auto& [gap, pattern] : c.assignment)
    if (!arity.contains(gap))
      violations.push_back("assignment names gap " + gap +
                           " which does not occur in the skeleton");
  return violations;
}

void require_valid(const InductiveCluster& c) {
  auto violations = validate(c);
  if (violations.empty()) return;
  std::string message = "invalid inductive cluster " + c.to_string() + ":";
  for (const auto& v : violations) message += " " + v + ";";
  throw InvalidCluster(message);
}

Term flatten(const InductiveCluster& c) {
  return instantiate_gaps(c.skeleton, c.assignment);
}

InductiveCluster canonicalize(const InductiveCluster& c) {
  std::map<std::string, std::string> to;
  for (const auto& gap : gap_order(c.skeleton))
    to.emplace(gap, canonical_gap(to.size() + 1));
  InductiveCluster out{rename_gaps(c.skeleton, to), {}};
  for (const auto& [gap, pattern] : c.assignment) {
    auto it = to.find(gap);
    out.assignment.emplace(it == to.end() ? gap : it->second, pattern);
  }
  return out;
}

bool operator==(const InductiveCluster& a, const InductiveCluster& b) {
  auto ca = canonicalize(a);
  auto cb = canonicalize(b);
  return ca.skeleton == cb.skeleton && ca.assignment == cb.assignment;
}

std::string InductiveCluster::to_string() const {
  std::string out = "⟨" + skeleton.to_string() + ", [";
  bool first = true;
  auto emit = [&](const std::string& gap, const Term& pattern) {
    if (!first) out += ", ";
    first = false;
    out += gap + " := " + pattern.to_string();
  };
  std::set<std::string> done;
  for (const auto& gap : gap_order(skeleton)) {
    auto it = assignment.find(gap);
    if (it == assignment.end() || !done.insert(gap).second) continue;
    emit(gap, it->second);
  }
  for (const auto& [gap, pattern] : assignment)
    if (!done.contains(gap)) emit(gap, pattern);
  return out + "]⟩";
}

namespace {

void collect_sites(const Term& skel, const PatternAssignment& assignment,
                   Path& here, std::vector<GapSite>& out) {
  if (skel.is_variable()) return;
  if (skel.is_function()) {
    for (std::size_t i = 0; i < skel.arity(); ++i) {
      here.push_back(i + 1);
      collect_sites(skel.arg(i), assignment, here, out);
      here.pop_back();
    }
    return;
  }
  out.push_back({skel.name(), here});
  const Term& pattern = assignment.at(skel.name());
  std::size_t j = 0;
  for (const auto& q : node_paths(pattern)) {
    if (!subterm_at(pattern, q).is_variable()) continue;
    Path below = here;
    below.insert(below.end(), q.begin(), q.end());
    collect_sites(skel.arg(j++), assignment, below, out);
  }
}

class WitnessBuilder {
 public:
  WitnessBuilder(const InductiveCluster& fine)
      : fine_(fine) {
    for (auto& site : gap_sites(fine)) fine_roots_.emplace(site.root, site.gap);
  }

  Term build(const Term& coarse_pattern, const Path& base, const Path& rel) {
    const Term& node = subterm_at(coarse_pattern, rel);
    if (node.is_variable()) return node;
    Path abs = base;
    abs.insert(abs.end(), rel.begin(), rel.end());
    if (auto it = fine_roots_.find(abs); it != fine_roots_.end()) {
      const Term& fine_pattern = fine_.assignment.at(it->second);
      std::vector<Term> args;
      for (const auto& q : node_paths(fine_pattern)) {
        if (!subterm_at(fine_pattern, q).is_variable()) continue;
        Path below = rel;
        below.insert(below.end(), q.begin(), q.end());
        args.push_back(build(coarse_pattern, base, below));
      }
      return Term::gap(it->second, std::move(args));
    }
    std::vector<Term> args;
    for (std::size_t i = 0; i < node.arity(); ++i) {
      Path below = rel;
      below.push_back(i + 1);
      args.push_back(build(coarse_pattern, base, below));
    }
    return Term::function(node.name(), std::move(args));
  }

 private:
  const InductiveCluster& fine_;
  std::map<Path, std::string> fine_roots_;
};

}  // namespace

std::vector<GapSite> gap_sites(const InductiveCluster& c) {
  std::vector<GapSite> out;
  Path here;
  collect_sites(c.skeleton, c.assignment, here, out);
  return out;
}

std::optional<Witness> coarsening_le(const InductiveCluster& fine,
                                     const InductiveCluster& coarse) {
  auto g_fine = to_geometric(fine);
  auto g_coarse = to_geometric(coarse);
  if (!(g_fine.subject() == g_coarse.subject()))
    throw SubjectMismatch("clusters are for different terms: " +
                          g_fine.subject().to_string() + " vs " +
                          g_coarse.subject().to_string());
  if (!is_subset(g_fine.positions(), g_coarse.positions())) return std::nullopt;

  WitnessBuilder builder(fine);
  Witness gamma;
  for (const auto& site : gap_sites(coarse))
    gamma.emplace(site.gap,
                  builder.build(coarse.assignment.at(site.gap), site.root, {}));
  if (!witness_check(fine, coarse, gamma))
    throw std::logic_error("constructed witness " + witness_to_string(gamma) +
                           " fails the coarsening equations for " +
                           fine.to_string() + " and " + coarse.to_string());
  return gamma;
}

bool witness_check(const InductiveCluster& fine,
                   const InductiveCluster& coarse, const Witness& gamma) {
  auto coarse_gaps = gap_order(coarse.skeleton);
  if (gamma.size() != coarse_gaps.size()) return false;
  for (const auto& gap : coarse_gaps)
    if (!gamma.contains(gap)) return false;
  if (!(instantiate_gaps(coarse.skeleton, gamma) == fine.skeleton))
    return false;
  for (const auto& [gap, image] : gamma) {
    auto it = coarse.assignment.find(gap);
    if (it == coarse.assignment.end()) return false;
    if (!(instantiate_gaps(image, fine.assignment) == it->second)) return false;
  }
  return true;
}

std::string witness_to_string(const Witness& w) {
  std::string out = "[";
  bool first = true;
  for (const auto& [gap, image] : w) {
    if (!first) out += ", ";
    first = false;
    out += gap + " := " + image.to_string();
  }
  return out + "]";
}

}  // namespace clatter
