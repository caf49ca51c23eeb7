#include "widzard/cores/vertex_count.hpp"

#include <ostream>

namespace widzard {

void VertexCountWitness::witness_info(std::ostream &os) const {
  os << "vertexCount=" << count << "\n";
}

void VertexCount::initialize_leaf_impl(WitnessSet &out) const {
  out.emplace(VertexCountWitness{0});
}

void VertexCount::intro_v_impl(Label, Bag, const WPtr &w, WitnessSet &out) const {
  out.emplace(VertexCountWitness{w->count + 1});
}

void VertexCount::intro_e_impl(Label, Label, Bag, const WPtr &w, WitnessSet &out) const {
  out.insert(w);
}

void VertexCount::forget_v_impl(Label, Bag, const WPtr &w, WitnessSet &out) const {
  out.insert(w);
}

void VertexCount::join_impl(Bag bag, const WPtr &w1, const WPtr &w2, WitnessSet &out) const {
  out.emplace(VertexCountWitness{w1->count + w2->count - static_cast<long long>(bag.size())});
}

} // namespace widzard
