#pragma once

#include "widzard/core.hpp"

namespace widzard {

/// `size` counts every selected vertex below the node, `used` the selected
/// ones still active.
struct IndependenceWitness : WitnessWrapper<IndependenceWitness> {
  long long size = 0;
  Bag used;

  IndependenceWitness() = default;
  IndependenceWitness(long long s, Bag u) : size(s), used(u) {}

  IndependenceWitness relabeled(const LabelMap &map) const { return {size, map.apply(used)}; }
  void hash(Hasher &h) const override { h << size << used; }
  void witness_info(std::ostream &os) const override;

  friend bool operator==(const IndependenceWitness &a, const IndependenceWitness &b) {
    return a.size == b.size && a.used == b.used;
  }
  friend bool operator<(const IndependenceWitness &a, const IndependenceWitness &b) {
    if (a.used != b.used)
      return a.used < b.used;
    return a.size < b.size;
  }
};

class IndependenceNumber : public CoreWrapper<IndependenceNumber, IndependenceWitness> {
public:
  IndependenceNumber() = default;
  explicit IndependenceNumber(const std::vector<long long> &) {}

  static CoreDescriptor metadata() {
    return {"IndependenceNumber", CoreType::Max, ParameterType::None};
  }

  void initialize_leaf_impl(WitnessSet &out) const;
  void intro_v_impl(Label i, Bag bag, const WPtr &w, WitnessSet &out) const;
  void intro_e_impl(Label i, Label j, Bag bag, const WPtr &w, WitnessSet &out) const;
  void forget_v_impl(Label i, Bag bag, const WPtr &w, WitnessSet &out) const;
  void join_impl(Bag bag, const WPtr &w1, const WPtr &w2, WitnessSet &out) const;
  bool is_final_witness_impl(Bag, const IndependenceWitness &) const { return true; }
  long long inv_impl(Bag, const IndependenceWitness &w) const { return w.size; }
  void clean(WitnessSet &ws) const override;
  std::optional<std::size_t> join_key(Bag bag, const Witness &w) const override;
};

} // namespace widzard
