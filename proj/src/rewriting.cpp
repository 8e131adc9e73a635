#include "clatter/rewriting.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "clatter/isomorphism.hpp"

namespace clatter {

std::string Rule::to_string() const {
  return name + ": " + lhs.to_string() + " -> " + rhs.to_string();
}

void check_rule(const Rule& r) {
  const std::string where = "rule " + r.name + " (" + r.lhs.to_string() +
                            " -> " + r.rhs.to_string() + ")";
  if (r.lhs.is_variable())
    throw PreconditionError(where + ": left-hand side is a variable");
  if (r.lhs.has_gaps() || r.rhs.has_gaps())
    throw PreconditionError(where + ": rules cannot contain gaps");
  if (!is_linear(r.lhs))
    throw PreconditionError(
        where +
        ": non-left-linear rule; only first-order left-linear systems are "
        "supported");
  if (!is_standard(r.lhs))
    throw PreconditionError(where + ": left-hand side is not standard");
  auto lhs_vars = variables(r.lhs);
  for (const auto& v : variables(r.rhs))
    if (!lhs_vars.contains(v))
      throw PreconditionError(where + ": right-hand side variable " + v +
                              " does not occur on the left");
}

const Rule& TRS::rule(const std::string& name) const {
  for (const auto& r : rules)
    if (r.name == name) return r;
  throw PreconditionError("no rule named '" + name + "'");
}

// ---------------------------------------------------------------------------
// COPS reader

namespace {

enum class Tok { Open, Close, Comma, Arrow, Ident, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

bool cops_ident_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return !std::isspace(u) && c != '(' && c != ')' && c != ',' && c != '"' &&
         c != '|' && c != '\\';
}

class CopsLexer {
 public:
  explicit CopsLexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    if (pos_ >= text_.size()) return {Tok::End, "", pos_};
    auto start = pos_;
    char c = text_[pos_];
    if (c == '(') return ++pos_, Token{Tok::Open, "(", start};
    if (c == ')') return ++pos_, Token{Tok::Close, ")", start};
    if (c == ',') return ++pos_, Token{Tok::Comma, ",", start};
    if (text_.substr(pos_, 3) == "->=")
      throw ParseError("relative rules (->=) are not supported", pos_);
    if (text_.substr(pos_, 2) == "->")
      return pos_ += 2, Token{Tok::Arrow, "->", start};
    if (!cops_ident_char(c))
      throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    while (pos_ < text_.size() && cops_ident_char(text_[pos_]) &&
           text_.substr(pos_, 2) != "->")
      ++pos_;
    return {Tok::Ident, std::string(text_.substr(start, pos_ - start)), start};
  }

  /// Skips to the parenthesis closing the block already opened; returns the
  /// raw text in between.
  std::string skip_block() {
    auto start = pos_;
    int depth = 1;
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0)
        return std::string(text_.substr(start, pos_ - 1 - start));
    }
    throw ParseError("unterminated block", start);
  }

  std::size_t offset() const { return pos_; }

  /// True when the next token is the keyword COMMENT; consumes nothing.
  bool comment_follows() {
    auto saved = pos_;
    auto t = next();
    pos_ = saved;
    return t.kind == Tok::Ident && t.text == "COMMENT";
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

const std::regex& standard_variable_name() {
  static const std::regex re("x[0-9]+");
  return re;
}

class CopsParser {
 public:
  explicit CopsParser(std::string_view text) : lex_(text) { advance(); }

  TRS parse() {
    bool seen_rules = false;
    while (cur_.kind != Tok::End) {
      expect(Tok::Open, "'('");
      if (cur_.kind != Tok::Ident)
        throw ParseError("expected block keyword", cur_.offset);
      std::string keyword = cur_.text;
      auto at = cur_.offset;
      if (keyword == "VAR") {
        advance();
        while (cur_.kind == Tok::Ident) {
          trs_.declared_variables.insert(cur_.text);
          advance();
        }
        expect(Tok::Close, "')' closing VAR");
      } else if (keyword == "RULES") {
        if (seen_rules) throw ParseError("duplicate RULES block", at);
        seen_rules = true;
        advance();
        rules();
        expect(Tok::Close, "')' closing RULES");
      } else if (keyword == "COMMENT") {
        lex_.skip_block();
        advance();
      } else {
        throw ParseError("unsupported COPS block (" + keyword +
                             " ...); only VAR, RULES and COMMENT are accepted",
                         at);
      }
    }
    if (!seen_rules) throw ParseError("missing RULES block", lex_.offset());
    return std::move(trs_);
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind)
      throw ParseError(std::string("expected ") + what + ", found '" +
                           cur_.text + "'",
                       cur_.offset);
    advance();
  }

  void rules() {
    std::optional<std::string> pending_name;
    while (cur_.kind != Tok::Close && cur_.kind != Tok::End) {
      if (cur_.kind == Tok::Open) {
        // (COMMENT @name) names the following rule.
        auto at = cur_.offset;
        advance();
        if (cur_.kind != Tok::Ident || cur_.text != "COMMENT")
          throw ParseError("unexpected '(' inside RULES", at);
        auto body = lex_.skip_block();
        advance();
        std::istringstream in(body);
        std::string word;
        in >> word;
        if (word.size() > 1 && word[0] == '@') pending_name = word.substr(1);
        continue;
      }
      auto at = cur_.offset;
      Term lhs = term();
      expect(Tok::Arrow, "'->'");
      Term rhs = term();
      std::string name = pending_name.value_or(
          "r" + std::to_string(trs_.rules.size() + 1));
      pending_name.reset();
      add_rule(std::move(name), lhs, rhs, at);
    }
  }

  Term term() {
    if (cur_.kind != Tok::Ident)
      throw ParseError("expected term, found '" + cur_.text + "'",
                       cur_.offset);
    std::string name = cur_.text;
    auto at = cur_.offset;
    advance();
    std::vector<Term> args;
    bool parenthesised = false;
    // "x (COMMENT @r) ..." is a rule boundary, not an argument list.
    if (cur_.kind == Tok::Open && !lex_.comment_follows()) {
      parenthesised = true;
      advance();
      if (cur_.kind != Tok::Close) {
        for (;;) {
          args.push_back(term());
          if (cur_.kind == Tok::Comma) {
            advance();
            continue;
          }
          break;
        }
      }
      expect(Tok::Close, "')' closing argument list");
    }
    if (trs_.declared_variables.contains(name)) {
      if (parenthesised)
        throw ParseError("variable '" + name + "' applied to arguments", at);
      return Term::variable(name);
    }
    if (std::regex_match(name, standard_variable_name()))
      throw ParseError("undeclared variable " + name +
                           " (names x<n> are reserved for variables; declare "
                           "it in the VAR block)",
                       at);
    try {
      trs_.signature.declare(name, args.size());
    } catch (const ArityError& e) {
      throw ParseError(e.what(), at);
    }
    return Term::function(name, std::move(args));
  }

  void add_rule(std::string name, const Term& lhs, const Term& rhs,
                std::size_t at) {
    for (const auto& r : trs_.rules)
      if (r.name == name) throw ParseError("duplicate rule name " + name, at);
    if (lhs.is_variable())
      throw ParseError("left-hand side of rule " + name + " is a variable",
                       at);
    if (!is_linear(lhs))
      throw ParseError("non-left-linear rule " + lhs.to_string() + " -> " +
                           rhs.to_string() +
                           ": only first-order left-linear systems are "
                           "supported",
                       at);
    auto std_lhs = standardize(lhs);
    Substitution renaming;
    for (const auto& [from, to] : std_lhs.renaming)
      renaming.emplace(from, Term::variable(to));
    for (const auto& v : variables(rhs))
      if (!std_lhs.renaming.contains(v))
        throw ParseError("right-hand side variable " + v +
                             " does not occur in the left-hand side of rule " +
                             name,
                         at);
    Rule rule{std::move(name), std_lhs.term, apply_subst(renaming, rhs)};
    check_rule(rule);
    trs_.rules.push_back(std::move(rule));
  }

  CopsLexer lex_;
  Token cur_;
  TRS trs_;
};

}  // namespace

TRS load_trs(std::string_view text) { return CopsParser(text).parse(); }

TRS load_trs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_trs(buf.str());
}

std::string print_trs(const TRS& trs) {
  std::size_t max_arity = 0;
  for (const auto& r : trs.rules) max_arity = std::max(max_arity, r.arity());
  std::string out = "(VAR";
  for (std::size_t i = 1; i <= max_arity; ++i)
    out += " " + standard_variable(i);
  out += ")\n(RULES\n";
  for (std::size_t i = 0; i < trs.rules.size(); ++i) {
    const auto& r = trs.rules[i];
    if (r.name != "r" + std::to_string(i + 1))
      out += "  (COMMENT @" + r.name + ")\n";
    out += "  " + r.lhs.to_string() + " -> " + r.rhs.to_string() + "\n";
  }
  out += ")\n";
  return out;
}

TRS make_trs(const std::vector<std::pair<std::string, std::string>>& rules,
             const std::set<std::string>& vars) {
  std::string text = "(VAR";
  for (const auto& v : vars) text += " " + v;
  text += ") (RULES";
  for (const auto& [lhs, rhs] : rules) text += " " + lhs + " -> " + rhs;
  text += ")";
  return load_trs(text);
}

// ---------------------------------------------------------------------------
// Positional rewriting

std::optional<Term> rewrite_step_at(const Term& t, const Path& p,
                                    const Rule& rule) {
  const Term& redex = subterm_at(t, p);
  auto sigma = match_pattern(rule.lhs, redex);
  if (!sigma) return std::nullopt;
  return replace_at(t, p, apply_subst(*sigma, rule.rhs));
}

std::vector<Reduct> one_step_reducts(const Term& t, const TRS& trs) {
  std::vector<Reduct> out;
  for (const auto& p : node_paths(t))
    for (const auto& r : trs.rules)
      if (auto s = rewrite_step_at(t, p, r)) out.push_back({*s, p, r.name});
  return out;
}

std::vector<RedexOccurrence> redex_occurrences(const Term& t, const TRS& trs) {
  std::vector<RedexOccurrence> out;
  for (const auto& p : node_paths(t)) {
    const Term& sub = subterm_at(t, p);
    for (const auto& r : trs.rules) {
      auto sigma = match_pattern(r.lhs, sub);
      if (!sigma) continue;
      out.push_back({r, p, shifted(p, internal_positions(r.lhs)), *sigma});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multi-steps

InductiveCluster MultiStep::lhs_cluster() const {
  InductiveCluster c{skeleton, {}};
  for (const auto& [gap, rule] : assignment) c.assignment.emplace(gap, rule.lhs);
  return c;
}

InductiveCluster MultiStep::rule_cluster() const {
  InductiveCluster c{skeleton, {}};
  for (const auto& [gap, rule] : assignment) {
    std::vector<Term> vars;
    for (std::size_t i = 1; i <= rule.arity(); ++i)
      vars.push_back(Term::variable(standard_variable(i)));
    c.assignment.emplace(gap, Term::function(rule.symbol(), std::move(vars)));
  }
  return c;
}

std::string MultiStep::to_string() const { return rule_cluster().to_string(); }

bool operator==(const MultiStep& a, const MultiStep& b) {
  return a.source == b.source && a.rule_cluster() == b.rule_cluster();
}

MultiStep make_multistep(const Term& t,
                         const std::vector<RedexOccurrence>& occurrences) {
  for (std::size_t i = 0; i < occurrences.size(); ++i) {
    const auto& occ = occurrences[i];
    auto sigma = match_pattern(occ.rule.lhs, subterm_at(t, occ.position));
    if (!sigma)
      throw PreconditionError("rule " + occ.rule.name + " does not match " +
                              t.to_string() + " at " +
                              path_to_string(occ.position));
    for (std::size_t j = 0; j < i; ++j) {
      auto shared = set_intersection(occ.pattern_positions,
                                     occurrences[j].pattern_positions);
      if (!shared.empty())
        throw OverlapError(
            "overlapping redexes: " + occurrences[j].rule.name + " at " +
            path_to_string(occurrences[j].position) + " and " +
            occ.rule.name + " at " + path_to_string(occ.position) +
            " share " + clatter::to_string(shared));
    }
  }
  PositionSet all;
  std::map<Path, const Rule*> by_root;
  for (const auto& occ : occurrences) {
    all.insert(occ.pattern_positions.begin(), occ.pattern_positions.end());
    by_root.emplace(occ.position, &occ.rule);
  }
  auto cluster = to_inductive(t, all);
  MultiStep m{t, cluster.skeleton, {}};
  for (const auto& site : gap_sites(cluster)) {
    const Rule& rule = *by_root.at(site.root);
    if (!(cluster.assignment.at(site.gap) == rule.lhs))
      throw std::logic_error("pattern at " + path_to_string(site.root) +
                             " differs from the left-hand side of " +
                             rule.name);
    m.assignment.emplace(site.gap, rule);
  }
  if (!(project(m, Side::Left) == t))
    throw std::logic_error("left projection of " + m.to_string() +
                           " is not the source " + t.to_string());
  return m;
}

MultiStep make_multistep(
    const Term& t, const TRS& trs,
    const std::vector<std::pair<std::string, Path>>& redexes) {
  std::vector<RedexOccurrence> occs;
  for (const auto& [name, path] : redexes) {
    const Rule& r = trs.rule(name);
    auto sigma = match_pattern(r.lhs, subterm_at(t, path));
    if (!sigma)
      throw PreconditionError("rule " + name + " does not match " +
                              t.to_string() + " at " + path_to_string(path));
    occs.push_back({r, path, shifted(path, internal_positions(r.lhs)), *sigma});
  }
  return make_multistep(t, occs);
}

std::vector<RedexOccurrence> occurrences_of(const MultiStep& m) {
  std::vector<RedexOccurrence> out;
  for (const auto& site : gap_sites(m.lhs_cluster())) {
    const Rule& r = m.assignment.at(site.gap);
    auto sigma = match_pattern(r.lhs, subterm_at(m.source, site.root));
    out.push_back({r, site.root, shifted(site.root, internal_positions(r.lhs)),
                   sigma.value()});
  }
  return out;
}

Term project(const MultiStep& m, Side side) {
  std::map<std::string, Term> templates;
  for (const auto& [gap, rule] : m.assignment)
    templates.emplace(gap, side == Side::Left ? rule.lhs : rule.rhs);
  return instantiate_gaps(m.skeleton, templates);
}

std::vector<MultiStep> multisteps_from(const Term& t, const TRS& trs,
                                       std::size_t max_occurrences) {
  auto occs = redex_occurrences(t, trs);
  if (occs.size() > max_occurrences)
    throw CapExceeded(t.to_string() + " has " + std::to_string(occs.size()) +
                      " redex occurrences; multi-step enumeration is capped "
                      "at " +
                      std::to_string(max_occurrences));
  std::vector<MultiStep> out;
  std::vector<RedexOccurrence> chosen;
  auto disjoint_from_chosen = [&](const RedexOccurrence& o) {
    return std::all_of(chosen.begin(), chosen.end(), [&](const auto& c) {
      return set_intersection(c.pattern_positions, o.pattern_positions)
          .empty();
    });
  };
  auto dfs = [&](auto&& self, std::size_t start) -> void {
    out.push_back(make_multistep(t, chosen));
    for (std::size_t i = start; i < occs.size(); ++i) {
      if (!disjoint_from_chosen(occs[i])) continue;
      chosen.push_back(occs[i]);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

std::string to_string(StepClass c) {
  switch (c) {
    case StepClass::Empty:
      return "empty";
    case StepClass::Single:
      return "single";
    case StepClass::Parallel:
      return "parallel";
    case StepClass::Multi:
      return "multi";
  }
  return "?";
}

namespace {

bool gap_nested_in_gap(const Term& t, bool inside_gap) {
  if (t.is_gap() && inside_gap) return true;
  for (const auto& a : t.args())
    if (gap_nested_in_gap(a, inside_gap || t.is_gap())) return true;
  return false;
}

}  // namespace

StepClass classify(const MultiStep& m) {
  switch (m.pattern_count()) {
    case 0:
      return StepClass::Empty;
    case 1:
      return StepClass::Single;
    default:
      return gap_nested_in_gap(m.skeleton, false) ? StepClass::Multi
                                                  : StepClass::Parallel;
  }
}

MultiStep substitute(const Substitution& sigma, const MultiStep& m) {
  return {apply_subst(sigma, m.source), apply_subst(sigma, m.skeleton),
          m.assignment};
}

}  // namespace clatter
