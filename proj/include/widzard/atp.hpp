#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "widzard/core.hpp"
#include "widzard/graph.hpp"
#include "widzard/itd.hpp"
#include "widzard/property.hpp"

namespace widzard {

/// A node of the search graph: a bag plus one witness set per bound
/// variable, in binding order.
struct SearchState {
  Bag bag;
  std::vector<WitnessSet> sets;

  std::size_t hash() const;
  SearchState relabeled(const LabelMap &map) const;
  std::size_t max_witness_set() const;

  friend bool operator==(const SearchState &a, const SearchState &b);
  /// Bag first, then the witness sets in binding order.
  friend bool operator<(const SearchState &a, const SearchState &b);
};

SearchState initial_state(const std::vector<CorePtr> &cores);

/// State after `ins`. `partner` is the second operand of a Join.
SearchState apply(const std::vector<CorePtr> &cores, const Instruction &ins,
                  const SearchState &s, const SearchState *partner = nullptr);

struct CanonicalForm {
  SearchState state;
  /// Full permutation with state == original.relabeled(sigma).
  LabelMap sigma;
};

/// Least relabeling of `s` over all label bijections; its bag is {1..|bag|}.
CanonicalForm canonicalize(const SearchState &s);

/// Premise check on an intermediate state: a variable is accepted iff its
/// witness set is nonempty, INV is the min/max (Min/Max cores) of inv over
/// the current witnesses. Undefined values keep the state.
bool premise_holds(const FormulaNode &premise, const PropertySpec &spec,
                   const std::vector<CorePtr> &cores, const SearchState &s);

struct Assignment {
  std::string variable;
  CoreType core_type = CoreType::Bool;
  bool accepted = false;
  std::optional<long long> inv;
};

/// Root environment at an empty-bag state.
std::vector<Assignment> assignments(const PropertySpec &spec, const std::vector<CorePtr> &cores,
                                    const SearchState &s);

enum class WidthKind { Tree, Path };
enum class Verdict { Satisfied, NotSatisfied, Undecided };

struct IterationRow {
  std::size_t iteration = 0;
  std::size_t all_states = 0;
  std::size_t new_states = 0;
  std::size_t max_witness_set = 0;

  friend bool operator==(const IterationRow &, const IterationRow &) = default;
};

struct SearchOptions {
  WidthKind width = WidthKind::Tree;
  unsigned k = 1;
  bool isomorphism = false;
  unsigned threads = 1;
  bool premise = false;
  /// 0 = unbounded. Hitting a cap ends the search as Undecided.
  std::size_t max_iterations = 0;
  std::size_t max_states = 0;
  /// Called after every iteration (progress printing).
  std::function<void(const IterationRow &)> on_row;
};

struct Counterexample {
  std::vector<Assignment> assignment;
  ItdTerm term;
  MultiGraph graph;
};

struct SearchResult {
  Verdict verdict = Verdict::Undecided;
  std::vector<IterationRow> rows;
  std::optional<Counterexample> counterexample;
  std::size_t pooled_states = 0;
  std::string undecided_reason;
  /// Filled only when requested through search_with_pool().
  std::vector<SearchState> pool;
};

const char *to_string(Verdict v);

/// Throws FormulaDomainError if the formula cannot be evaluated on a state.
SearchResult search(const PropertySpec &spec, const SearchOptions &options);

/// search() that also returns every pooled state (for tests and tooling).
SearchResult search_with_pool(const PropertySpec &spec, const SearchOptions &options);

struct AtpReportInfo {
  std::string strategy;
  WidthKind width = WidthKind::Tree;
  unsigned k = 1;
  bool premise = false;
  bool print_loop = false;
};

/// "Property information" and "Search information" blocks.
std::string format_atp_header(const PropertySpec &spec, const AtpReportInfo &info);
std::string format_iteration_header();
std::string format_iteration_row(const IterationRow &row);
std::string format_atp_result(const SearchResult &result);

} // namespace widzard
