#pragma once

#include <vector>

#include "widzard/core.hpp"

namespace widzard {

/// Partition of the active labels into at most c colour classes. Cells are
/// kept sorted by their smallest label, which makes the representation
/// canonical.
struct ColoringWitness : WitnessWrapper<ColoringWitness> {
  std::vector<Bag> cells;

  ColoringWitness() = default;
  explicit ColoringWitness(std::vector<Bag> c);

  void normalize();
  ColoringWitness relabeled(const LabelMap &map) const;
  void hash(Hasher &h) const override;
  void witness_info(std::ostream &os) const override;

  friend bool operator==(const ColoringWitness &a, const ColoringWitness &b) {
    return a.cells == b.cells;
  }
  friend bool operator<(const ColoringWitness &a, const ColoringWitness &b) {
    return a.cells < b.cells;
  }
};

class ChromaticNumberAtMost : public CoreWrapper<ChromaticNumberAtMost, ColoringWitness> {
public:
  explicit ChromaticNumberAtMost(const std::vector<long long> &params);
  explicit ChromaticNumberAtMost(unsigned colours) : colours_(colours) {}

  static CoreDescriptor metadata() {
    return {"ChromaticNumber_AtMost", CoreType::Bool, ParameterType::UnsignedInt};
  }

  unsigned colours() const { return colours_; }

  void initialize_leaf_impl(WitnessSet &out) const;
  void intro_v_impl(Label i, Bag bag, const WPtr &w, WitnessSet &out) const;
  void intro_e_impl(Label i, Label j, Bag bag, const WPtr &w, WitnessSet &out) const;
  void forget_v_impl(Label i, Bag bag, const WPtr &w, WitnessSet &out) const;
  void join_impl(Bag bag, const WPtr &w1, const WPtr &w2, WitnessSet &out) const;
  bool is_final_witness_impl(Bag, const ColoringWitness &) const { return true; }
  long long inv_impl(Bag, const ColoringWitness &) const { return 1; }
  bool join_is_intersection() const override { return true; }

private:
  unsigned colours_;
};

} // namespace widzard
