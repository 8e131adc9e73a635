// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: clatter_acceptance <cops-corpus-dir> <rejected-file>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

#include "support.hpp"

using namespace clatter;
using namespace clatter::testing;

namespace {

// Collects the first few failures of a criterion.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 5) notes_.push_back(what);
  }
  void note(const std::string& s) { info_ += (info_.empty() ? "" : ", ") + s; }

  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    std::ostringstream out;
    out << checks_ << " checks";
    if (!info_.empty()) out << ", " << info_;
    if (failures_) {
      out << "; " << failures_ << " failed:";
      for (const auto& n : notes_) out << "\n      " << n;
    }
    return out.str();
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::vector<std::string> notes_;
  std::string info_;
};

const Signature& corpus_signature() {
  static const Signature sig = small_signature();
  return sig;
}

// -- 1 --------------------------------------------------------------------
void running_term_clusters(Tally& t) {
  for (const auto& row : running_rows()) {
    auto ind = to_inductive(running_term(), row.positions);
    t.check(ind.skeleton == row.cluster.skeleton &&
                ind.assignment == row.cluster.assignment,
            to_string(row.positions) + " gave " + ind.to_string());
    t.check(to_geometric(row.cluster).positions() == row.positions,
            row.cluster.to_string() + " does not map back");
  }
}

// -- 2 --------------------------------------------------------------------
void worked_algebra(Tally& t) {
  auto g = to_geometric(IC("a(X(e,0))", {{"X", "b(c(x1),x2)"}}));
  t.check(g.positions() == P({"1:v", "1.1:e", "1.1:v"}), to_string(g.positions()));
  t.check(g.subject() == running_term(), g.subject().to_string());
}

// -- 3 --------------------------------------------------------------------
void refinement_example(Tally& t) {
  auto fine = IC("X1(X2)", {{"X1", "a(x1)"}, {"X2", "0"}});
  auto coarse = IC("X1", {{"X1", "a(0)"}});
  auto gamma = coarsening_le(fine, coarse);
  t.check(gamma.has_value(), "no witness");
  if (gamma) {
    t.check(witness_check(fine, coarse, *gamma), witness_to_string(*gamma));
    t.check(witness_to_string(*gamma) == "[X1 := X1(X2)]", witness_to_string(*gamma));
  }
  t.check(!coarsening_le(coarse, fine), "order is not strict");
  auto gc = to_geometric(coarse).positions();
  auto gf = to_geometric(fine).positions();
  t.check(gc == P({"eps:v", "1:e", "1:v"}), to_string(gc));
  t.check(gf == P({"eps:v", "1:v"}), to_string(gf));
  t.check(is_subset(gf, gc) && gf != gc, "not a strict inclusion");
}

// -- 4 --------------------------------------------------------------------
void criticality_triple(Tally& t) {
  auto trs = drop_trs();
  struct Case {
    Peak peak;
    bool critical;
    PositionSet missing;
  };
  std::vector<Case> cases{
      {make_peak(T("a(x1)"), trs, {{"r1", {}}}, {{"r2", {}}}), true, {}},
      {make_peak(T("a(b')"), trs, {{"r1", {}}}, {{"r2", {}}}), false,
       P({"1:e", "1:v"})},
      {make_peak(T("a(a(x1))"), trs, {{"r2", {}}}, {{"r2", {1}}}), false,
       P({"1:e"})},
  };
  for (const auto& c : cases) {
    auto r = is_critical(c.peak);
    t.check(r.is_critical == c.critical && r.missing == c.missing,
            c.peak.to_string() + ": missing " + to_string(r.missing));
  }
}

// -- 5 --------------------------------------------------------------------
void known_peaks_critical(Tally& t) {
  std::vector<Peak> peaks{
      make_peak(T("f(0,0)"), parallel_trs(), {{"r1", {}}}, {{"r2", {1}}, {"r2", {2}}}),
      make_peak(T("b'(a(0))"), development_trs(), {{"r1", {1}}},
                {{"r2", {}}, {"r3", {1, 1}}}),
      tower_peak(1),
      tower_peak(2),
  };
  for (const auto& p : peaks) {
    auto r = is_critical(p);
    t.check(r.is_critical, p.to_string() + ": missing " + to_string(r.missing));
  }
}

// -- 6 --------------------------------------------------------------------
// Round trips and the bijection on every cluster of every term. The order
// comparison runs on all pairs up to five symbols; at six symbols on all
// pairs of a per-term sample that always contains bottom and top.
void isomorphism_suite(Tally& t) {
  std::mt19937 rng(6);
  std::size_t terms = 0, clusters = 0, pairs = 0;
  for (const auto& term : enumerate_standard_terms(corpus_signature(), 6)) {
    ++terms;
    auto gs = enumerate_clusters(term);
    auto oracle = oracle_clusters(term);
    t.check(gs.size() == oracle.size(), term.to_string() + ": cluster count");
    std::vector<InductiveCluster> inds;
    std::set<std::string> distinct;
    for (const auto& g : gs) {
      ++clusters;
      auto c = to_inductive(g);
      t.check(to_geometric(c) == g, "A fails on " + c.to_string());
      auto back = to_inductive(flatten(c), to_geometric(c).positions());
      t.check(back == canonicalize(c) && back.to_string() == c.to_string(),
              "B fails on " + c.to_string());
      distinct.insert(c.to_string());
      inds.push_back(std::move(c));
    }
    t.check(distinct.size() == gs.size(), term.to_string() + ": not injective");

    std::vector<std::size_t> sample(gs.size());
    std::iota(sample.begin(), sample.end(), 0);
    if (term.size() == 6 && sample.size() > 12) {
      std::shuffle(sample.begin() + 1, sample.end() - 1, rng);
      sample.resize(11);
      sample.push_back(gs.size() - 1);  // top is last in enumeration order
    }
    for (auto i : sample)
      for (auto j : sample) {
        ++pairs;
        auto w = coarsening_le(inds[i], inds[j]);
        bool geometric = is_subset(gs[i].positions(), gs[j].positions());
        t.check(w.has_value() == geometric,
                inds[i].to_string() + " vs " + inds[j].to_string());
        if (w) t.check(witness_check(inds[i], inds[j], *w), witness_to_string(*w));
      }
  }
  t.note(std::to_string(terms) + " terms");
  t.note(std::to_string(clusters) + " clusters");
  t.note(std::to_string(pairs) + " ordered pairs");
}

// -- 7 --------------------------------------------------------------------
// Operation tables built from g_join and g_meet, laws checked on the
// tables. All triples up to five symbols; at six symbols all triples over a
// per-term sample, with results outside the sample computed on demand.
class OpTable {
 public:
  explicit OpTable(const Term& term) : gs_(enumerate_clusters(term)) {
    for (std::size_t i = 0; i < gs_.size(); ++i) index_.emplace(gs_[i].positions(), i);
    internal_ = oracle_internal_positions(term);
  }
  std::size_t size() const { return gs_.size(); }

  std::size_t join(std::size_t a, std::size_t b, Tally& t) { return op(a, b, true, t); }
  std::size_t meet(std::size_t a, std::size_t b, Tally& t) { return op(a, b, false, t); }
  std::size_t ops() const { return memo_.size(); }

 private:
  std::size_t op(std::size_t a, std::size_t b, bool is_join, Tally& t) {
    auto key = (static_cast<std::uint64_t>(a) << 32 | b) << 1 | is_join;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto r = is_join ? g_join(gs_[a], gs_[b]) : g_meet(gs_[a], gs_[b]);
    bool closed = oracle_edge_closed(r.positions()) && is_subset(r.positions(), internal_);
    t.check(closed, "result " + to_string(r.positions()) + " is not a cluster");
    auto it = index_.find(r.positions());
    std::size_t out = it == index_.end() ? a : it->second;
    t.check(it != index_.end(), "result missing from the enumeration");
    memo_.emplace(key, out);
    return out;
  }

  std::vector<GeometricCluster> gs_;
  std::map<PositionSet, std::size_t> index_;
  PositionSet internal_;
  std::unordered_map<std::uint64_t, std::size_t> memo_;
};

void lattice_laws(Tally& t) {
  std::mt19937 rng(7);
  std::size_t triples = 0, ops = 0;
  for (const auto& term : enumerate_standard_terms(corpus_signature(), 6)) {
    OpTable tab(term);
    std::vector<std::size_t> sample(tab.size());
    std::iota(sample.begin(), sample.end(), 0);
    if (term.size() == 6 && sample.size() > 8) {
      std::shuffle(sample.begin(), sample.end(), rng);
      sample.resize(8);
    }
    for (auto a : sample)
      for (auto b : sample) {
        auto ab = tab.join(a, b, t), mab = tab.meet(a, b, t);
        t.check(ab == tab.join(b, a, t) && mab == tab.meet(b, a, t), "commutativity");
        t.check(tab.join(a, mab, t) == a && tab.meet(a, ab, t) == a, "absorption");
        for (auto c : sample) {
          ++triples;
          t.check(tab.join(ab, c, t) == tab.join(a, tab.join(b, c, t), t) &&
                      tab.meet(mab, c, t) == tab.meet(a, tab.meet(b, c, t), t),
                  "associativity");
          t.check(tab.meet(a, tab.join(b, c, t), t) ==
                          tab.join(mab, tab.meet(a, c, t), t) &&
                      tab.join(a, tab.meet(b, c, t), t) ==
                          tab.meet(ab, tab.join(a, c, t), t),
                  "distributivity");
        }
      }
    ops += tab.ops();
  }
  t.note(std::to_string(triples) + " triples");
  t.note(std::to_string(ops) + " distinct operations");
}

// -- 8 --------------------------------------------------------------------
void single_steps_agree(Tally& t) {
  std::size_t terms = 0, steps = 0;
  for (const auto& trs : {drop_trs(), parallel_trs(), development_trs()}) {
    for (const auto& term : enumerate_standard_terms(trs.signature, 7)) {
      ++terms;
      std::set<std::pair<Term, Term>> from_clusters;
      for (const auto& m : multisteps_from(term, trs)) {
        if (m.pattern_count() != 1) continue;
        ++steps;
        from_clusters.emplace(project(m, Side::Left), project(m, Side::Right));
      }
      t.check(from_clusters == oracle_step_pairs(term, trs), term.to_string());
    }
  }
  t.note(std::to_string(terms) + " terms");
  t.note(std::to_string(steps) + " single steps");
}

// -- 9 --------------------------------------------------------------------
void classical_equivalence(Tally& t) {
  std::size_t peaks = 0;
  for (const auto& trs : {drop_trs(), collapse_trs(), parallel_trs()}) {
    auto r = equivalence_check(trs, 5);
    peaks += r.local_peaks_checked;
    t.check(r.classical_are_critical, "direction 1");
    t.check(r.critical_are_classical, "direction 2");
    for (const auto& c : r.counterexamples) t.check(false, c);
  }
  t.note(std::to_string(peaks) + " local peaks");
}

// -- 10 -------------------------------------------------------------------
void non_critical_decomposition(Tally& t) {
  std::size_t decomposed = 0;
  for (const auto& trs :
       {drop_trs(), collapse_trs(), parallel_trs(), development_trs()}) {
    for (const auto& term : enumerate_standard_terms(trs.signature, 6)) {
      auto steps = multisteps_from(term, trs);
      for (const auto& l : steps)
        for (const auto& r : steps) {
          Peak p{term, l, r};
          if (p.pattern_count() < 2 || is_critical(p).is_critical) continue;
          ++decomposed;
          try {
            auto d = decompose(p);
            bool smaller = skeleton_size(d.outer.left) < skeleton_size(l) &&
                           skeleton_size(d.inner.left) < skeleton_size(l) &&
                           skeleton_size(d.outer.right) < skeleton_size(r) &&
                           skeleton_size(d.inner.right) < skeleton_size(r);
            t.check(smaller, p.to_string() + ": skeletons do not shrink");
            bool back =
                recompose(d.outer.left, d.variable, d.inner.left) == l &&
                recompose(d.outer.right, d.variable, d.inner.right) == r &&
                apply_subst({{d.variable, d.inner.source}}, d.outer.source) == term;
            t.check(back, p.to_string() + ": does not recompose");
          } catch (const std::exception& e) {
            t.check(false, p.to_string() + ": " + e.what());
          }
        }
    }
  }
  t.note(std::to_string(decomposed) + " non-critical peaks");
}

// -- 11 -------------------------------------------------------------------
void diamond_and_local_confluence(Tally& t) {
  auto orth = orthogonal_trs();
  t.check(orthogonality(orth).orthogonal, "sample system is not orthogonal");
  std::size_t terms = 0, peaks = 0;
  for (const auto& term : enumerate_standard_terms(orth.signature, 6)) {
    ++terms;
    auto d = diamond_check(orth, term);
    peaks += d.peaks_checked;
    t.check(d.verdict == Verdict::Holds, term.to_string());
  }
  t.note(std::to_string(terms) + " terms");
  t.note(std::to_string(peaks) + " multi-step peaks");

  auto lc = local_confluence_report(drop_trs(), kDefaultMaxDepth);
  t.check(lc.verdict == Verdict::Refuted, "local confluence not refuted");
  t.check(!lc.counterexamples.empty() &&
              lc.counterexamples.front() == std::pair{T("x1"), T("0")},
          "first counterexample is not (x1, 0)");
}

// -- 12 -------------------------------------------------------------------
void cops_round_trip(Tally& t, const std::string& dir, const std::string& rejected) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".trs") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  t.check(files.size() >= 10, "corpus has only " + std::to_string(files.size()) + " files");
  for (const auto& f : files) {
    try {
      auto first = load_trs_file(f.string());
      auto printed = print_trs(first);
      auto second = load_trs(printed);
      t.check(second == first, f.filename().string() + ": round trip changed the system");
      t.check(print_trs(second) == printed, f.filename().string() + ": printing not stable");
    } catch (const std::exception& e) {
      t.check(false, f.filename().string() + ": " + e.what());
    }
  }
  t.note(std::to_string(files.size()) + " files");
  try {
    load_trs_file(rejected);
    t.check(false, "non-left-linear input accepted");
  } catch (const ParseError& e) {
    t.check(std::string(e.what()).find("non-left-linear") != std::string::npos, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <cops-dir> <rejected-trs>\n", argv[0]);
    return 2;
  }
  const std::string dir = argv[1], rejected = argv[2];

  struct Criterion {
    const char* name;
    std::function<void(Tally&)> run;
  };
  const std::vector<Criterion> criteria{
      {"running-term clusters: to_inductive/to_geometric on the six clusters", running_term_clusters},
      {"worked algebra example", worked_algebra},
      {"refinement example and witness", refinement_example},
      {"criticality triple with missing positions", criticality_triple},
      {"parallel, development and multi-multi peaks critical", known_peaks_critical},
      {"isomorphism suite up to 6 symbols", isomorphism_suite},
      {"lattice laws up to 6 symbols", lattice_laws},
      {"single steps agree with positional rewriting (size <= 7)", single_steps_agree},
      {"classical vs lattice critical peaks (bound 5)", classical_equivalence},
      {"non-critical peak decomposition (size <= 6)", non_critical_decomposition},
      {"diamond property and local confluence refutation", diamond_and_local_confluence},
      {"COPS round trip and left-linearity check",
       [&](Tally& t) { cops_round_trip(t, dir, rejected); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Tally tally;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].run(tally);
    } catch (const std::exception& e) {
      tally.check(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu  %s  [%s; %.1fs]\n", tally.ok() ? "PASS" : "FAIL", i + 1,
                criteria[i].name, tally.summary().c_str(), secs);
    std::fflush(stdout);
    if (!tally.ok()) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
