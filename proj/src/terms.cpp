#include "clatter/terms.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <sstream>

namespace clatter {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : Error(message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

ArityError::ArityError(const std::string& symbol, std::size_t expected,
                       std::size_t actual)
    : Error("arity mismatch for symbol '" + symbol + "': declared with " +
            std::to_string(expected) + " argument(s), used with " +
            std::to_string(actual)) {}

std::string path_to_string(const Path& p) {
  if (p.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

Path parse_path(std::string_view text) {
  Path p;
  if (text.empty() || text == "eps") return p;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto dot = text.find('.', start);
    auto piece = text.substr(start, dot == std::string_view::npos
                                        ? std::string_view::npos
                                        : dot - start);
    std::size_t value = 0;
    auto [ptr, ec] =
        std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc{} || ptr != piece.data() + piece.size() || value == 0)
      throw ParseError("bad path component '" + std::string(piece) + "'",
                       start);
    p.push_back(value);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return p;
}

// ---------------------------------------------------------------------------

Term Term::make(TermKind kind, std::string name, std::vector<Term> args) {
  std::size_t size = 1;
  bool has_gaps = kind == TermKind::Gap;
  for (const auto& a : args) {
    size += a.size();
    has_gaps = has_gaps || a.has_gaps();
  }
  return Term(std::make_shared<const Node>(
      Node{kind, std::move(name), std::move(args), size, has_gaps}));
}

Term Term::variable(std::string name) {
  return make(TermKind::Variable, std::move(name), {});
}

Term Term::function(std::string symbol, std::vector<Term> args) {
  return make(TermKind::Function, std::move(symbol), std::move(args));
}

Term Term::gap(std::string name, std::vector<Term> args) {
  return make(TermKind::Gap, std::move(name), std::move(args));
}

std::string Term::to_string() const {
  std::string out = name();
  if (is_variable() || args().empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < arity(); ++i) {
    if (i) out += ',';
    out += arg(i).to_string();
  }
  out += ')';
  return out;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size() || a.name() != b.name() ||
      a.arity() != b.arity())
    return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.arg(i) == b.arg(i))) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (auto c = a.arg(i) <=> b.arg(i); c != 0) return c;
  return std::strong_ordering::equal;
}

namespace {

std::pair<std::string_view, std::optional<unsigned long>> split_index(
    std::string_view name) {
  auto pos = name.size();
  while (pos > 0 && std::isdigit(static_cast<unsigned char>(name[pos - 1])))
    --pos;
  if (pos == name.size() || pos == 0) return {name, std::nullopt};
  unsigned long value = 0;
  auto [ptr, ec] =
      std::from_chars(name.data() + pos, name.data() + name.size(), value);
  if (ec != std::errc{}) return {name, std::nullopt};
  return {name.substr(0, pos), value};
}

}  // namespace

bool variable_less(const std::string& a, const std::string& b) {
  auto [pa, ia] = split_index(a);
  auto [pb, ib] = split_index(b);
  if (pa != pb) return pa < pb;
  if (ia != ib) return ia < ib;  // unindexed before indexed
  return a < b;
}

void Signature::declare(const std::string& name, std::size_t arity) {
  auto [it, inserted] = arities_.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw ArityError(name, it->second, arity);
}

std::optional<std::size_t> Signature::arity(const std::string& name) const {
  auto it = arities_.find(name);
  if (it == arities_.end()) return std::nullopt;
  return it->second;
}

void Signature::absorb(const Term& t) {
  if (t.is_function()) declare(t.name(), t.arity());
  for (const auto& a : t.args()) absorb(a);
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_' || u == '\'';
  });
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const std::set<std::string>& vars,
             Signature& sig, const std::set<std::string>& gaps)
      : text_(text), vars_(vars), sig_(sig), gaps_(gaps) {}

  Term parse() {
    Term t = term();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("trailing input", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  std::string identifier() {
    skip_ws();
    auto start = pos_;
    if (pos_ < text_.size()) {
      auto c = static_cast<unsigned char>(text_[pos_]);
      if (std::isalpha(c) || c == '_') {
        ++pos_;
        while (pos_ < text_.size()) {
          auto d = static_cast<unsigned char>(text_[pos_]);
          if (!(std::isalnum(d) || d == '_' || d == '\'')) break;
          ++pos_;
        }
      } else if (std::isdigit(c)) {
        // Numerals such as 0 are ordinary constants.
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      }
    }
    if (start == pos_) throw ParseError("expected identifier", start);
    return std::string(text_.substr(start, pos_ - start));
  }

  Term term() {
    skip_ws();
    auto start = pos_;
    std::string name = identifier();
    skip_ws();
    std::vector<Term> args;
    bool parenthesised = false;
    if (pos_ < text_.size() && text_[pos_] == '(') {
      parenthesised = true;
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
      } else {
        for (;;) {
          args.push_back(term());
          skip_ws();
          if (pos_ < text_.size() && text_[pos_] == ',') {
            ++pos_;
            continue;
          }
          if (pos_ < text_.size() && text_[pos_] == ')') {
            ++pos_;
            break;
          }
          throw ParseError("expected ',' or ')'", pos_);
        }
      }
    }
    if (vars_.contains(name)) {
      if (parenthesised)
        throw ParseError("variable '" + name + "' applied to arguments",
                         start);
      return Term::variable(std::move(name));
    }
    if (gaps_.contains(name)) {
      auto [it, inserted] = gap_arity_.emplace(name, args.size());
      if (!inserted && it->second != args.size())
        throw ArityError(name, it->second, args.size());
      return Term::gap(std::move(name), std::move(args));
    }
    sig_.declare(name, args.size());
    return Term::function(std::move(name), std::move(args));
  }

  std::string_view text_;
  const std::set<std::string>& vars_;
  Signature& sig_;
  const std::set<std::string>& gaps_;
  std::map<std::string, std::size_t> gap_arity_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view text, const std::set<std::string>& vars,
                Signature& sig, const std::set<std::string>& gaps) {
  return TermParser(text, vars, sig, gaps).parse();
}

Term parse_term(std::string_view text, const std::set<std::string>& vars) {
  Signature sig;
  return parse_term(text, vars, sig);
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s) {
    if (!first) out += ", ";
    first = false;
    out += v + " -> " + t.to_string();
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Structural operations

namespace {

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable()) {
    out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

void collect_paths(const Term& t, Path& here, std::vector<Path>& out) {
  out.push_back(here);
  for (std::size_t i = 0; i < t.arity(); ++i) {
    here.push_back(i + 1);
    collect_paths(t.arg(i), here, out);
    here.pop_back();
  }
}

Term rebuild(const Term& t, std::vector<Term> args) {
  switch (t.kind()) {
    case TermKind::Function:
      return Term::function(t.name(), std::move(args));
    case TermKind::Gap:
      return Term::gap(t.name(), std::move(args));
    case TermKind::Variable:
      break;
  }
  return t;
}

}  // namespace

std::vector<std::string> variable_occurrences(const Term& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

std::set<std::string> variables(const Term& t) {
  auto occ = variable_occurrences(t);
  return {occ.begin(), occ.end()};
}

bool is_linear(const Term& t) {
  auto occ = variable_occurrences(t);
  std::set<std::string> seen;
  for (const auto& v : occ)
    if (!seen.insert(v).second) return false;
  return true;
}

std::string standard_variable(std::size_t index) {
  return "x" + std::to_string(index);
}

bool is_standard(const Term& t) {
  auto occ = variable_occurrences(t);
  for (std::size_t i = 0; i < occ.size(); ++i)
    if (occ[i] != standard_variable(i + 1)) return false;
  return true;
}

const Term& subterm_at(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (std::size_t depth = 0; depth < p.size(); ++depth) {
    auto i = p[depth];
    if (i == 0 || i > cur->arity())
      throw PathError("path " + path_to_string(p) + " does not address a node of " +
                      t.to_string());
    cur = &cur->arg(i - 1);
  }
  return *cur;
}

namespace {

Term replace_from(const Term& t, const Path& p, std::size_t depth,
                  const Term& s, const Term& whole) {
  if (depth == p.size()) return s;
  auto i = p[depth];
  if (i == 0 || i > t.arity())
    throw PathError("path " + path_to_string(p) + " does not address a node of " +
                    whole.to_string());
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[i - 1] = replace_from(t.arg(i - 1), p, depth + 1, s, whole);
  return rebuild(t, std::move(args));
}

}  // namespace

Term replace_at(const Term& t, const Path& p, const Term& s) {
  return replace_from(t, p, 0, s, t);
}

std::vector<Path> node_paths(const Term& t) {
  std::vector<Path> out;
  Path here;
  collect_paths(t, here, out);
  return out;
}

Term apply_subst(const Substitution& sigma, const Term& t) {
  if (t.is_variable()) {
    auto it = sigma.find(t.name());
    return it == sigma.end() ? t : it->second;
  }
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(apply_subst(sigma, a));
  return rebuild(t, std::move(args));
}

namespace {

bool match_into(const Term& pattern, const Term& subject, Substitution& out) {
  if (pattern.is_variable()) {
    out.insert_or_assign(pattern.name(), subject);
    return true;
  }
  if (pattern.kind() != subject.kind() || pattern.name() != subject.name() ||
      pattern.arity() != subject.arity())
    return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_into(pattern.arg(i), subject.arg(i), out)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> match_pattern(const Term& pattern,
                                          const Term& subject) {
  if (!is_linear(pattern))
    throw PreconditionError("match_pattern: pattern " + pattern.to_string() +
                            " is not linear");
  Substitution out;
  if (!match_into(pattern, subject, out)) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// Unification

namespace {

class Unifier {
 public:
  bool unify(const Term& s, const Term& t) {
    Term a = walk(s);
    Term b = walk(t);
    if (a.is_variable() && b.is_variable()) {
      if (a.name() == b.name()) return true;
      if (variable_less(a.name(), b.name()))
        bind(a.name(), b);
      else
        bind(b.name(), a);
      return true;
    }
    if (a.is_variable()) return bind_checked(a.name(), b);
    if (b.is_variable()) return bind_checked(b.name(), a);
    if (a.kind() != b.kind() || a.name() != b.name() ||
        a.arity() != b.arity())
      return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!unify(a.arg(i), b.arg(i))) return false;
    return true;
  }

  Substitution solved() const {
    Substitution out;
    for (const auto& [v, t] : bindings_) out.emplace(v, resolve(t));
    return out;
  }

 private:
  Term walk(const Term& t) const {
    Term cur = t;
    while (cur.is_variable()) {
      auto it = bindings_.find(cur.name());
      if (it == bindings_.end()) break;
      cur = it->second;
    }
    return cur;
  }

  Term resolve(const Term& t) const {
    Term w = walk(t);
    if (w.is_variable() || w.arity() == 0) return w;
    std::vector<Term> args;
    for (const auto& a : w.args()) args.push_back(resolve(a));
    return rebuild(w, std::move(args));
  }

  bool occurs(const std::string& v, const Term& t) const {
    Term w = walk(t);
    if (w.is_variable()) return w.name() == v;
    for (const auto& a : w.args())
      if (occurs(v, a)) return true;
    return false;
  }

  bool bind_checked(const std::string& v, const Term& t) {
    if (occurs(v, t)) return false;
    bind(v, t);
    return true;
  }

  void bind(const std::string& v, const Term& t) { bindings_.emplace(v, t); }

  std::map<std::string, Term> bindings_;
};

}  // namespace

std::optional<Substitution> unify(const Term& s, const Term& t) {
  Unifier u;
  if (!u.unify(s, t)) return std::nullopt;
  return u.solved();
}

// ---------------------------------------------------------------------------

Standardized rename_with_prefix(const Term& t, const std::string& prefix) {
  Standardized out{t, {}};
  std::size_t next = 1;
  for (const auto& v : variable_occurrences(t))
    if (!out.renaming.contains(v))
      out.renaming.emplace(v, prefix + std::to_string(next++));
  Substitution sigma;
  for (const auto& [from, to] : out.renaming)
    sigma.emplace(from, Term::variable(to));
  out.term = apply_subst(sigma, t);
  return out;
}

Standardized standardize(const Term& t) {
  if (!is_linear(t))
    throw PreconditionError("cannot standardize non-linear term " +
                            t.to_string());
  return rename_with_prefix(t, "x");
}

namespace {

Term number_fresh_variables(const Term& t, std::size_t& next) {
  if (t.is_variable()) return Term::variable(standard_variable(next++));
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(number_fresh_variables(a, next));
  return rebuild(t, std::move(args));
}

}  // namespace

std::vector<Term> enumerate_standard_terms(const Signature& sig,
                                           std::size_t max_size,
                                           bool with_variables,
                                           std::size_t cap) {
  // by_size[n] holds all shapes with exactly n nodes; variables are
  // placeholders renumbered at the end.
  std::vector<std::vector<Term>> by_size(max_size + 1);
  std::size_t total = 0;
  auto push = [&](std::size_t n, Term t) {
    if (++total > cap)
      throw CapExceeded("term enumeration exceeds cap of " +
                        std::to_string(cap) + " terms");
    by_size[n].push_back(std::move(t));
  };
  for (std::size_t n = 1; n <= max_size; ++n) {
    if (n == 1 && with_variables) push(1, Term::variable("_"));
    for (const auto& [name, arity] : sig.symbols()) {
      if (arity == 0) {
        if (n == 1) push(1, Term::function(name));
        continue;
      }
      if (n < arity + 1) continue;
      // Distribute n-1 nodes over `arity` children, each of size >= 1.
      std::vector<Term> chosen;
      std::function<void(std::size_t, std::size_t)> fill =
          [&](std::size_t child, std::size_t remaining) {
            if (child == arity) {
              if (remaining == 0) push(n, Term::function(name, chosen));
              return;
            }
            std::size_t rest = arity - child - 1;
            for (std::size_t s = 1; s + rest <= remaining; ++s) {
              for (const auto& sub : by_size[s]) {
                chosen.push_back(sub);
                fill(child + 1, remaining - s);
                chosen.pop_back();
              }
            }
          };
      fill(0, n - 1);
    }
  }
  std::vector<Term> out;
  out.reserve(total);
  for (const auto& bucket : by_size)
    for (const auto& t : bucket) {
      std::size_t next = 1;
      out.push_back(number_fresh_variables(t, next));
    }
  return out;
}

}  // namespace clatter
