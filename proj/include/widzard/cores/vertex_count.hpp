#pragma once

#include "widzard/core.hpp"

namespace widzard {

struct VertexCountWitness : WitnessWrapper<VertexCountWitness> {
  long long count = 0;

  VertexCountWitness() = default;
  explicit VertexCountWitness(long long c) : count(c) {}

  VertexCountWitness relabeled(const LabelMap &) const { return *this; }
  void hash(Hasher &h) const override { h << count; }
  void witness_info(std::ostream &os) const override;

  friend bool operator==(const VertexCountWitness &a, const VertexCountWitness &b) {
    return a.count == b.count;
  }
  friend bool operator<(const VertexCountWitness &a, const VertexCountWitness &b) {
    return a.count < b.count;
  }
};

class VertexCount : public CoreWrapper<VertexCount, VertexCountWitness> {
public:
  VertexCount() = default;
  explicit VertexCount(const std::vector<long long> &) {}

  static CoreDescriptor metadata() { return {"VertexCount", CoreType::Min, ParameterType::None}; }

  void initialize_leaf_impl(WitnessSet &out) const;
  void intro_v_impl(Label i, Bag bag, const WPtr &w, WitnessSet &out) const;
  void intro_e_impl(Label i, Label j, Bag bag, const WPtr &w, WitnessSet &out) const;
  void forget_v_impl(Label i, Bag bag, const WPtr &w, WitnessSet &out) const;
  void join_impl(Bag bag, const WPtr &w1, const WPtr &w2, WitnessSet &out) const;
  bool is_final_witness_impl(Bag, const VertexCountWitness &) const { return true; }
  long long inv_impl(Bag, const VertexCountWitness &w) const { return w.count; }
};

} // namespace widzard
