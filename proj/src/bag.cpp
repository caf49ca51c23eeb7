#include "widzard/bag.hpp"

#include <ostream>

namespace widzard {

std::vector<Label> Bag::elements() const {
  std::vector<Label> out;
  out.reserve(size());
  for_each([&](Label l) { out.push_back(l); });
  return out;
}

std::ostream &operator<<(std::ostream &os, Bag b) {
  os << '{';
  bool first = true;
  b.for_each([&](Label l) {
    if (!first)
      os << ',';
    os << l;
    first = false;
  });
  return os << '}';
}

LabelMap LabelMap::complete(Bag domain, const LabelMap &partial) {
  LabelMap out;
  Bag used;
  domain.for_each([&](Label l) {
    out.set(l, partial(l));
    used.insert(partial(l));
  });
  Label next = 1;
  for (Label l = 1; l <= kMaxLabel; ++l) {
    if (domain.contains(l))
      continue;
    while (used.contains(next))
      ++next;
    out.set(l, next);
    used.insert(next);
  }
  return out;
}

} // namespace widzard
