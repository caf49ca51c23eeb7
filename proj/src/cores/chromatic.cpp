#include "widzard/cores/chromatic.hpp"

#include <algorithm>
#include <ostream>

#include "widzard/errors.hpp"

namespace widzard {

namespace {
// Outside the range of any cell mask (masks use bits 1..31 only).
constexpr std::uint64_t kCellSentinel = 0xffffffffffffull;
} // namespace

ColoringWitness::ColoringWitness(std::vector<Bag> c) : cells(std::move(c)) { normalize(); }

void ColoringWitness::normalize() {
  std::sort(cells.begin(), cells.end(),
            [](Bag a, Bag b) { return a.min_label() < b.min_label(); });
}

ColoringWitness ColoringWitness::relabeled(const LabelMap &map) const {
  std::vector<Bag> out;
  out.reserve(cells.size());
  for (Bag c : cells)
    out.push_back(map.apply(c));
  return ColoringWitness(std::move(out));
}

void ColoringWitness::hash(Hasher &h) const {
  for (Bag c : cells)
    h << c << kCellSentinel;
}

void ColoringWitness::witness_info(std::ostream &os) const {
  os << "Partial coloring: {";
  for (std::size_t i = 0; i < cells.size(); ++i)
    os << (i ? "," : "") << cells[i];
  os << "}\n";
}

ChromaticNumberAtMost::ChromaticNumberAtMost(const std::vector<long long> &params)
    : colours_(static_cast<unsigned>(params.at(0))) {
  if (params.at(0) < 0)
    throw CoreError("ChromaticNumber_AtMost parameter must be non-negative");
}

void ChromaticNumberAtMost::initialize_leaf_impl(WitnessSet &out) const {
  out.emplace(ColoringWitness{});
}

void ChromaticNumberAtMost::intro_v_impl(Label i, Bag, const WPtr &w, WitnessSet &out) const {
  for (std::size_t c = 0; c < w->cells.size(); ++c) {
    ColoringWitness next = *w;
    next.cells[c].insert(i);
    next.normalize();
    out.emplace(std::move(next));
  }
  if (w->cells.size() < colours_) {
    ColoringWitness next = *w;
    Bag cell;
    cell.insert(i);
    next.cells.push_back(cell);
    next.normalize();
    out.emplace(std::move(next));
  }
}

void ChromaticNumberAtMost::intro_e_impl(Label i, Label j, Bag, const WPtr &w,
                                         WitnessSet &out) const {
  for (Bag c : w->cells)
    if (c.contains(i) && c.contains(j))
      return;
  out.insert(w);
}

void ChromaticNumberAtMost::forget_v_impl(Label i, Bag, const WPtr &w, WitnessSet &out) const {
  ColoringWitness next = *w;
  for (auto it = next.cells.begin(); it != next.cells.end(); ++it) {
    if (it->contains(i)) {
      it->erase(i);
      if (it->empty())
        next.cells.erase(it);
      break;
    }
  }
  next.normalize();
  out.emplace(std::move(next));
}

void ChromaticNumberAtMost::join_impl(Bag, const WPtr &w1, const WPtr &w2,
                                      WitnessSet &out) const {
  if (*w1 == *w2)
    out.insert(w1);
}

} // namespace widzard
