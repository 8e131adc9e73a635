#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clatter {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed concrete syntax. `offset()` is the byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class ArityError : public Error {
 public:
  ArityError(const std::string& symbol, std::size_t expected,
             std::size_t actual);
};

/// A path does not address a node of the term.
class PathError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A desk-scale enumeration limit was hit. Never silently truncated.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

/// Vertex address: sequence of 1-based child indices, empty for the root.
using Path = std::vector<std::size_t>;

std::string path_to_string(const Path& p);  // "eps" or "1.2.1"
Path parse_path(std::string_view text);

enum class TermKind : std::uint8_t { Variable, Function, Gap };

/// Immutable first-order term, shared structurally.
///
/// The same type carries skeletons: a `Gap` node is a second-order variable
/// applied to arguments. Plain terms never contain gap nodes.
class Term {
 public:
  static Term variable(std::string name);
  static Term function(std::string symbol, std::vector<Term> args = {});
  static Term gap(std::string name, std::vector<Term> args = {});

  TermKind kind() const { return node_->kind; }
  bool is_variable() const { return kind() == TermKind::Variable; }
  bool is_function() const { return kind() == TermKind::Function; }
  bool is_gap() const { return kind() == TermKind::Gap; }

  const std::string& name() const { return node_->name; }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }
  std::size_t arity() const { return node_->args.size(); }

  /// Number of nodes (variables, symbols and gaps).
  std::size_t size() const { return node_->size; }
  bool has_gaps() const { return node_->has_gaps; }

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    TermKind kind;
    std::string name;
    std::vector<Term> args;
    std::size_t size;
    bool has_gaps;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(TermKind kind, std::string name, std::vector<Term> args);

  std::shared_ptr<const Node> node_;
};

/// Orders variable names by (alphabetic prefix, numeric suffix), so that
/// x2 < x10 and every xL-variable precedes every yR-variable.
bool variable_less(const std::string& a, const std::string& b);

/// Function symbol name to arity. The first use of a name fixes its arity.
class Signature {
 public:
  /// Records `name/arity`; throws ArityError on a conflicting earlier use.
  void declare(const std::string& name, std::size_t arity);
  std::optional<std::size_t> arity(const std::string& name) const;
  bool contains(const std::string& name) const {
    return arities_.contains(name);
  }
  const std::map<std::string, std::size_t>& symbols() const {
    return arities_;
  }
  /// Declares every function symbol of `t`.
  void absorb(const Term& t);

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, std::size_t> arities_;
};

bool is_identifier(std::string_view s);

/// Parses `ident | ident(t1,...,tn)`. Identifiers in `vars` become variables,
/// those in `gaps` become gap applications, all others function symbols whose
/// arities are checked against (and recorded in) `sig`.
Term parse_term(std::string_view text, const std::set<std::string>& vars,
                Signature& sig, const std::set<std::string>& gaps = {});
Term parse_term(std::string_view text, const std::set<std::string>& vars = {});

using Substitution = std::map<std::string, Term>;

std::string to_string(const Substitution& s);

/// Variables from left to right, with repetitions.
std::vector<std::string> variable_occurrences(const Term& t);
std::set<std::string> variables(const Term& t);
bool is_linear(const Term& t);
/// Linear, and the left-to-right variable vector is x1,...,xn.
bool is_standard(const Term& t);

std::string standard_variable(std::size_t index);  // "x<index>"

const Term& subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& s);
/// Vertex paths of all nodes, in preorder.
std::vector<Path> node_paths(const Term& t);

/// First-order substitution; descends through gap arguments.
Term apply_subst(const Substitution& sigma, const Term& t);

/// One-sided matching of a linear pattern. Throws PreconditionError if the
/// pattern is not linear.
std::optional<Substitution> match_pattern(const Term& pattern,
                                          const Term& subject);

/// Idempotent most general unifier with occurs check, or nullopt.
/// Variable-variable bindings map the `variable_less`-smaller variable.
std::optional<Substitution> unify(const Term& s, const Term& t);

struct Standardized {
  Term term;
  std::map<std::string, std::string> renaming;
};

/// Renames the variables of a linear term to x1,...,xn left to right.
Standardized standardize(const Term& t);

/// Renames every variable v to prefix+index where index is its
/// first-occurrence rank (1-based). Used to rename apart.
Standardized rename_with_prefix(const Term& t, const std::string& prefix);

/// All standard terms with at most `max_size` nodes over `sig`; when
/// `with_variables` is set, leaves may also be fresh variables. Ordered by
/// size, then structurally. Throws CapExceeded beyond `cap` results.
std::vector<Term> enumerate_standard_terms(const Signature& sig,
                                           std::size_t max_size,
                                           bool with_variables = true,
                                           std::size_t cap = 200000);

}  // namespace clatter
