#include "widzard/atp.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "widzard/kernel.hpp"

namespace widzard {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kShards = 64;

struct Provenance {
  Instruction ins = Instruction::leaf();
  std::size_t parent1 = kNone;
  std::size_t parent2 = kNone;
  LabelMap sigma; // raw successor -> stored state
  LabelMap pi;    // applied to parent2 before the join
};

struct Record {
  SearchState state;
  std::size_t hash = 0;
  Provenance prov;
};

/// Discovery order of a successor: frontier position, operation, permutation.
using Key = std::tuple<std::size_t, std::size_t, std::size_t>;

struct Candidate {
  Key key;
  SearchState state;
  std::size_t hash = 0;
  Provenance prov;
};

/// Join partner images under bag permutations, deduplicated.
struct Image {
  LabelMap pi;
  SearchState state;
};

template <class V> class ShardedMap {
public:
  using Bucket = std::vector<V>;

  template <class F> void with_bucket(std::size_t hash, F &&f) {
    Shard &s = shards_[hash % kShards];
    std::lock_guard<std::mutex> lock(s.mutex);
    f(s.map[hash]);
  }

  template <class F> void for_each(F &&f) {
    for (auto &s : shards_)
      for (auto &[h, bucket] : s.map)
        for (auto &v : bucket)
          f(v);
  }

  void clear() {
    for (auto &s : shards_)
      s.map.clear();
  }

private:
  struct Shard {
    std::mutex mutex;
    std::unordered_map<std::size_t, Bucket> map;
  };
  std::array<Shard, kShards> shards_;
};

std::vector<LabelMap> bag_permutations(unsigned m) {
  std::vector<Label> targets(m);
  std::iota(targets.begin(), targets.end(), Label{1});
  std::vector<LabelMap> out;
  do {
    LabelMap pi;
    for (unsigned i = 0; i < m; ++i)
      pi.set(i + 1, targets[i]);
    out.push_back(pi);
  } while (std::next_permutation(targets.begin(), targets.end()));
  return out;
}

class Engine {
public:
  Engine(const PropertySpec &spec, const SearchOptions &opt)
      : spec_(spec), opt_(opt), cores_(instantiate_cores(spec)) {
    if (opt_.premise)
      premise_ = premise_of(spec.formula);
  }

  SearchResult run(bool keep_pool) {
    SearchResult result;
    SearchState init = initial_state(cores_);
    if (opt_.isomorphism)
      init = canonicalize(init).state;
    add_record(Record{init, init.hash(), {}});
    max_witness_ = init.max_witness_set();

    std::vector<std::size_t> frontier{0};
    if (auto bad = violation({0})) {
      finish_refuted(result, *bad);
    } else {
      for (std::size_t iteration = 1;; ++iteration) {
        std::vector<std::size_t> fresh = expand(frontier);
        for (std::size_t id : fresh)
          max_witness_ = std::max(max_witness_, records_[id].state.max_witness_set());
        // A refuting iteration ends the search mid-way: no row for it.
        if (auto bad = violation(fresh)) {
          finish_refuted(result, *bad);
          break;
        }
        IterationRow row{iteration, records_.size(), fresh.size(), max_witness_};
        result.rows.push_back(row);
        if (opt_.on_row)
          opt_.on_row(row);
        if (fresh.empty()) {
          result.verdict = Verdict::Satisfied;
          break;
        }
        if (opt_.max_states && records_.size() >= opt_.max_states) {
          result.verdict = Verdict::Undecided;
          result.undecided_reason = "state limit reached";
          break;
        }
        if (opt_.max_iterations && iteration >= opt_.max_iterations) {
          result.verdict = Verdict::Undecided;
          result.undecided_reason = "iteration limit reached";
          break;
        }
        frontier = std::move(fresh);
      }
    }
    result.pooled_states = records_.size();
    if (keep_pool)
      for (const auto &r : records_)
        result.pool.push_back(r.state);
    return result;
  }

private:
  void add_record(Record r) {
    const std::size_t id = records_.size();
    records_.push_back(std::move(r));
    const Record &rec = records_.back();
    index_[rec.hash].push_back(id);
    by_bag_[rec.state.bag].push_back(id);
  }

  bool pooled(const SearchState &s, std::size_t hash) const {
    auto it = index_.find(hash);
    if (it == index_.end())
      return false;
    for (std::size_t id : it->second)
      if (records_[id].state == s)
        return true;
    return false;
  }

  CanonicalForm canonical(const SearchState &raw, std::size_t raw_hash) {
    std::optional<CanonicalForm> hit;
    memo_.with_bucket(raw_hash, [&](auto &bucket) {
      for (const auto &[state, form] : bucket)
        if (state == raw) {
          hit = form;
          return;
        }
    });
    if (hit)
      return *hit;
    CanonicalForm form = canonicalize(raw);
    form.state.hash();
    memo_.with_bucket(raw_hash, [&](auto &bucket) {
      for (const auto &[state, f] : bucket)
        if (state == raw)
          return;
      bucket.emplace_back(raw, form);
    });
    return form;
  }

  void offer(const Key &key, const Instruction &ins, SearchState raw, std::size_t p1,
             std::size_t p2, const LabelMap &pi) {
    if (premise_ && !premise_holds(*premise_, spec_, cores_, raw))
      return;
    Provenance prov{ins, p1, p2, LabelMap{}, pi};
    SearchState state;
    if (opt_.isomorphism) {
      CanonicalForm form = canonical(raw, raw.hash());
      state = std::move(form.state);
      prov.sigma = form.sigma;
    } else {
      state = std::move(raw);
    }
    const std::size_t h = state.hash();
    if (pooled(state, h))
      return;
    fresh_.with_bucket(h, [&](auto &bucket) {
      for (auto &c : bucket) {
        if (c.state == state) {
          if (key < c.key) {
            c.key = key;
            c.prov = prov;
          }
          return;
        }
      }
      bucket.push_back(Candidate{key, std::move(state), h, prov});
    });
  }

  void successors(std::size_t pos, std::size_t id) {
    const SearchState &s = records_[id].state;
    const unsigned width = opt_.k + 1;
    std::size_t op = 0;
    auto key = [&](std::size_t perm = 0) { return Key{pos, op, perm}; };

    if (s.bag.size() < width) {
      for (Label l = 1; l <= width; ++l, ++op) {
        if (s.bag.contains(l))
          continue;
        Instruction ins = Instruction::intro_vertex(l);
        offer(key(), ins, apply(cores_, ins, s), id, kNone, LabelMap{});
      }
    }
    const std::vector<Label> labels = s.bag.elements();
    for (std::size_t a = 0; a < labels.size(); ++a)
      for (std::size_t b = a + 1; b < labels.size(); ++b, ++op) {
        Instruction ins = Instruction::intro_edge(labels[a], labels[b]);
        offer(key(), ins, apply(cores_, ins, s), id, kNone, LabelMap{});
      }
    for (Label l : labels) {
      Instruction ins = Instruction::forget_vertex(l);
      offer(key(), ins, apply(cores_, ins, s), id, kNone, LabelMap{});
      ++op;
    }
    if (opt_.width != WidthKind::Tree)
      return;
    const Instruction join = Instruction::join();
    for (std::size_t partner : partners_.at(s.bag)) {
      if (opt_.isomorphism) {
        const auto &imgs = images_.at(partner);
        for (std::size_t p = 0; p < imgs.size(); ++p)
          offer(key(p), join, apply(cores_, join, s, &imgs[p].state), id, partner, imgs[p].pi);
      } else {
        offer(key(), join, apply(cores_, join, s, &records_[partner].state), id, partner,
              LabelMap{});
      }
      ++op;
    }
  }

  void prepare_joins() {
    partners_ = by_bag_;
    if (!opt_.isomorphism || opt_.width != WidthKind::Tree)
      return;
    for (std::size_t id = images_.size(); id < records_.size(); ++id) {
      const SearchState &t = records_[id].state;
      std::vector<Image> imgs;
      for (const LabelMap &pi : bag_permutations(t.bag.size())) {
        SearchState img = t.relabeled(pi);
        if (std::none_of(imgs.begin(), imgs.end(),
                         [&](const Image &i) { return i.state == img; }))
          imgs.push_back(Image{pi, std::move(img)});
      }
      images_.push_back(std::move(imgs));
    }
  }

  std::vector<std::size_t> expand(const std::vector<std::size_t> &frontier) {
    prepare_joins();
    fresh_.clear();
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
      try {
        for (std::size_t i = next++; i < frontier.size(); i = next++)
          successors(i, frontier[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error)
          error = std::current_exception();
        next = frontier.size();
      }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(opt_.threads, frontier.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t)
      pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
      t.join();
    if (error)
      std::rethrow_exception(error);

    std::vector<Candidate> found;
    fresh_.for_each([&](Candidate &c) { found.push_back(std::move(c)); });
    fresh_.clear();
    std::sort(found.begin(), found.end(),
              [](const Candidate &a, const Candidate &b) { return a.key < b.key; });
    std::vector<std::size_t> ids;
    for (auto &c : found) {
      ids.push_back(records_.size());
      add_record(Record{std::move(c.state), c.hash, c.prov});
    }
    return ids;
  }

  /// State of the term closed by forgetting every active label, ascending.
  SearchState closure(const SearchState &s) const {
    SearchState closed = s;
    s.bag.for_each([&](Label l) { closed = apply(cores_, Instruction::forget_vertex(l), closed); });
    return closed;
  }

  /// Least state among `ids` whose closure falsifies the formula.
  std::optional<std::size_t> violation(const std::vector<std::size_t> &ids) const {
    std::optional<std::size_t> best;
    for (std::size_t id : ids) {
      const SearchState &s = records_[id].state;
      Environment env;
      for (const auto &a : assignments(spec_, cores_, closure(s))) {
        env.accepted[a.variable] = a.accepted;
        env.inv[a.variable] =
            a.inv ? std::optional<double>(static_cast<double>(*a.inv)) : std::nullopt;
      }
      if (evaluate_formula(*spec_.formula, env))
        continue;
      if (!best || s < records_[*best].state)
        best = id;
    }
    return best;
  }

  /// Term whose state is mu(state[id]).
  NodeId build(ItdTerm &term, std::size_t id, const LabelMap &mu) const {
    const Provenance &p = records_[id].prov;
    if (p.parent1 == kNone)
      return term.add(Instruction::leaf());
    const LabelMap nu = mu.compose(p.sigma);
    std::vector<NodeId> children{build(term, p.parent1, nu)};
    if (p.parent2 != kNone)
      children.push_back(build(term, p.parent2, nu.compose(p.pi)));
    return term.add(p.ins.relabeled(nu), std::move(children));
  }

  void finish_refuted(SearchResult &result, std::size_t id) const {
    result.verdict = Verdict::NotSatisfied;
    Counterexample ce;
    const SearchState &s = records_[id].state;
    ce.assignment = assignments(spec_, cores_, closure(s));
    build(ce.term, id, LabelMap{});
    s.bag.for_each([&](Label l) { ce.term.add(Instruction::forget_vertex(l), {ce.term.root()}); });
    ce.graph = evaluate(ce.term).graph;
    result.counterexample = std::move(ce);
  }

  const PropertySpec &spec_;
  const SearchOptions &opt_;
  std::vector<CorePtr> cores_;
  Formula premise_;

  std::deque<Record> records_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> index_;
  std::map<Bag, std::vector<std::size_t>> by_bag_;
  std::map<Bag, std::vector<std::size_t>> partners_;
  std::vector<std::vector<Image>> images_;
  std::size_t max_witness_ = 0;

  ShardedMap<Candidate> fresh_;
  ShardedMap<std::pair<SearchState, CanonicalForm>> memo_;
};

} // namespace

const char *to_string(Verdict v) {
  switch (v) {
  case Verdict::Satisfied:
    return "PROPERTY SATISFIED";
  case Verdict::NotSatisfied:
    return "PROPERTY NOT SATISFIED";
  case Verdict::Undecided:
    return "UNDECIDED";
  }
  return "?";
}

SearchResult search(const PropertySpec &spec, const SearchOptions &options) {
  return Engine(spec, options).run(false);
}

SearchResult search_with_pool(const PropertySpec &spec, const SearchOptions &options) {
  return Engine(spec, options).run(true);
}

namespace {
std::string cell(const std::string &s) {
  std::string out = s;
  out.resize(std::max<std::size_t>(25, s.size() + 1), ' ');
  return out;
}
} // namespace

std::string format_atp_header(const PropertySpec &spec, const AtpReportInfo &info) {
  std::ostringstream os;
  os << "----------------------------------------------------------\n";
  os << "Property information:\n\n";
  os << "Formula: " << to_string(*spec.formula) << "\n\n";
  for (const auto &b : spec.bindings) {
    os << format_binding(b) << "\n";
    const CoreDescriptor *d = CoreRegistry::builtin().find(b.core_name);
    os << "Core type: " << (d ? to_string(d->core_type) : "?") << "\n";
  }
  os << "\nSearch information:\n\n";
  os << "Width parameter: " << (info.width == WidthKind::Tree ? "tree_width" : "path_width")
     << " = " << info.k << "\n";
  os << "Search method: " << info.strategy << "\n";
  os << "Premise flag: " << (info.premise ? "ACTIVATED" : "NOT ACTIVATED") << "\n\n";
  if (info.print_loop)
    os << "Search process:\n" << format_iteration_header();
  return os.str();
}

std::string format_iteration_header() {
  return cell("Iteration") + cell("ALLSTATES") + cell("NEWSTATES") + "Max WITNESSSET SIZE\n";
}

std::string format_iteration_row(const IterationRow &row) {
  return cell(std::to_string(row.iteration)) + cell(std::to_string(row.all_states)) +
         cell(std::to_string(row.new_states)) + std::to_string(row.max_witness_set) + "\n";
}

std::string format_atp_result(const SearchResult &result) {
  std::ostringstream os;
  os << "\nResult: " << to_string(result.verdict);
  if (result.verdict == Verdict::Undecided && !result.undecided_reason.empty())
    os << " (" << result.undecided_reason << ")";
  os << "\n";
  if (result.verdict == Verdict::NotSatisfied && result.counterexample) {
    os << "\nCounterexample found:\n";
    os << "The assignment that makes the formula false:\n";
    for (const auto &a : result.counterexample->assignment) {
      os << a.variable << "=" << (a.accepted ? 1 : 0) << "\n";
      if (a.core_type != CoreType::Bool) {
        os << "INV(" << a.variable << ")=";
        if (a.inv)
          os << *a.inv;
        else
          os << "undefined";
        os << "\n";
      }
    }
  }
  os << "-----------------------------------------\n";
  return os.str();
}

} // namespace widzard
