#include "widzard/cores/independence.hpp"

#include <ostream>

namespace widzard {

void IndependenceWitness::witness_info(std::ostream &os) const {
  os << "size=" << size << " used=" << used << "\n";
}

void IndependenceNumber::initialize_leaf_impl(WitnessSet &out) const {
  out.emplace(IndependenceWitness{});
}

void IndependenceNumber::intro_v_impl(Label i, Bag, const WPtr &w, WitnessSet &out) const {
  out.insert(w);
  Bag used = w->used;
  used.insert(i);
  out.emplace(IndependenceWitness{w->size + 1, used});
}

void IndependenceNumber::intro_e_impl(Label i, Label j, Bag, const WPtr &w,
                                      WitnessSet &out) const {
  if (w->used.contains(i) && w->used.contains(j))
    return;
  out.insert(w);
}

void IndependenceNumber::forget_v_impl(Label i, Bag, const WPtr &w, WitnessSet &out) const {
  Bag used = w->used;
  used.erase(i);
  out.emplace(IndependenceWitness{w->size, used});
}

void IndependenceNumber::join_impl(Bag, const WPtr &w1, const WPtr &w2, WitnessSet &out) const {
  if (w1->used != w2->used)
    return;
  out.emplace(IndependenceWitness{w1->size + w2->size - static_cast<long long>(w1->used.size()),
                                  w1->used});
}

void IndependenceNumber::clean(WitnessSet &ws) const {
  // Witnesses are ordered by (used, size): the last of each used-run wins.
  WitnessSet kept;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const auto &w = static_cast<const IndependenceWitness &>(*ws[i]);
    if (i + 1 < ws.size() && static_cast<const IndependenceWitness &>(*ws[i + 1]).used == w.used)
      continue;
    kept.insert(ws[i]);
  }
  ws = std::move(kept);
}

std::optional<std::size_t> IndependenceNumber::join_key(Bag, const Witness &w) const {
  return static_cast<const IndependenceWitness &>(w).used.mask();
}

} // namespace widzard
