#include <algorithm>
#include <numeric>

#include "widzard/atp.hpp"

namespace widzard {

std::size_t SearchState::hash() const {
  Hasher h;
  h << bag;
  for (const auto &ws : sets)
    h << static_cast<std::uint64_t>(ws.hash());
  return h.value();
}

SearchState SearchState::relabeled(const LabelMap &map) const {
  SearchState out;
  out.bag = map.apply(bag);
  out.sets.reserve(sets.size());
  for (const auto &ws : sets)
    out.sets.push_back(ws.relabeled(map));
  return out;
}

std::size_t SearchState::max_witness_set() const {
  std::size_t m = 0;
  for (const auto &ws : sets)
    m = std::max(m, ws.size());
  return m;
}

bool operator==(const SearchState &a, const SearchState &b) {
  return a.bag == b.bag && a.sets == b.sets;
}

bool operator<(const SearchState &a, const SearchState &b) {
  if (a.bag != b.bag)
    return a.bag < b.bag;
  return a.sets < b.sets;
}

SearchState initial_state(const std::vector<CorePtr> &cores) {
  SearchState s;
  for (const auto &core : cores)
    s.sets.push_back(apply_instruction(*core, Instruction::leaf(), Bag{}, {}));
  return s;
}

SearchState apply(const std::vector<CorePtr> &cores, const Instruction &ins,
                  const SearchState &s, const SearchState *partner) {
  SearchState out;
  out.bag = bag_after(ins, s.bag);
  out.sets.reserve(cores.size());
  for (std::size_t v = 0; v < cores.size(); ++v)
    out.sets.push_back(apply_instruction(*cores[v], ins, s.bag, s.sets[v],
                                         partner ? partner->sets[v] : WitnessSet{}));
  return out;
}

CanonicalForm canonicalize(const SearchState &s) {
  const std::vector<Label> elems = s.bag.elements();
  std::vector<Label> targets(elems.size());
  std::iota(targets.begin(), targets.end(), Label{1});

  std::optional<CanonicalForm> best;
  do {
    LabelMap partial;
    for (std::size_t i = 0; i < elems.size(); ++i)
      partial.set(elems[i], targets[i]);
    const LabelMap sigma = LabelMap::complete(s.bag, partial);

    // Compare set by set so a losing candidate is abandoned early.
    CanonicalForm cand{SearchState{sigma.apply(s.bag), {}}, sigma};
    bool better = !best, worse = false;
    for (std::size_t v = 0; v < s.sets.size() && !worse; ++v) {
      WitnessSet r = s.sets[v].relabeled(sigma);
      if (!better) {
        if (r < best->state.sets[v])
          better = true;
        else if (best->state.sets[v] < r)
          worse = true;
      }
      cand.state.sets.push_back(std::move(r));
    }
    if (better && !worse)
      best = std::move(cand);
  } while (std::next_permutation(targets.begin(), targets.end()));
  return std::move(*best);
}

namespace {

Environment intermediate_env(const PropertySpec &spec, const std::vector<CorePtr> &cores,
                             const SearchState &s) {
  Environment env;
  for (std::size_t v = 0; v < cores.size(); ++v) {
    const std::string &name = spec.bindings[v].variable;
    const WitnessSet &ws = s.sets[v];
    const CoreType type = cores[v]->descriptor().core_type;
    env.accepted[name] = !ws.empty();
    std::optional<double> inv;
    if (type == CoreType::Bool) {
      inv = ws.empty() ? 0.0 : 1.0;
    } else {
      for (const auto &w : ws) {
        double x = static_cast<double>(cores[v]->inv(s.bag, *w));
        if (!inv || (type == CoreType::Max ? x > *inv : x < *inv))
          inv = x;
      }
    }
    env.inv[name] = inv;
  }
  return env;
}

} // namespace

bool premise_holds(const FormulaNode &premise, const PropertySpec &spec,
                   const std::vector<CorePtr> &cores, const SearchState &s) {
  try {
    return evaluate_value(premise, intermediate_env(spec, cores, s)) != 0.0;
  } catch (const UndefinedInvariant &) {
    return true;
  }
}

std::vector<Assignment> assignments(const PropertySpec &spec, const std::vector<CorePtr> &cores,
                                    const SearchState &s) {
  std::vector<Assignment> out;
  for (std::size_t v = 0; v < cores.size(); ++v) {
    RootResult r = root_result(*cores[v], s.bag, s.sets[v]);
    out.push_back({spec.bindings[v].variable, cores[v]->descriptor().core_type, r.accepted, r.inv});
  }
  return out;
}

} // namespace widzard
