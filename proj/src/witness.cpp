#include "widzard/witness.hpp"

#include <algorithm>
#include <ostream>

namespace widzard {

namespace {
bool witness_less(const WitnessPtr &a, const WitnessPtr &b) { return a->less(*b); }
} // namespace

bool WitnessSet::insert(WitnessPtr w) {
  hash_ = 0;
  if (items_.empty() || items_.back()->less(*w)) {
    items_.push_back(std::move(w));
    return true;
  }
  auto it = std::lower_bound(items_.begin(), items_.end(), w, witness_less);
  if (it != items_.end() && (*it)->equals(*w))
    return false;
  items_.insert(it, std::move(w));
  return true;
}

bool WitnessSet::contains(const Witness &w) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), w,
                             [](const WitnessPtr &a, const Witness &b) { return a->less(b); });
  return it != items_.end() && (*it)->equals(w);
}

std::size_t WitnessSet::hash() const {
  if (hash_ == 0) {
    Hasher h;
    h << static_cast<std::uint64_t>(items_.size());
    for (const auto &w : items_)
      h << static_cast<std::uint64_t>(w->hash_value());
    hash_ = h.value() | 1u;
  }
  return hash_;
}

WitnessSet WitnessSet::relabeled(const LabelMap &map) const {
  WitnessSet out;
  out.items_.reserve(items_.size());
  for (const auto &w : items_)
    out.items_.push_back(w->relabel(map));
  std::sort(out.items_.begin(), out.items_.end(), witness_less);
  return out;
}

bool operator==(const WitnessSet &a, const WitnessSet &b) {
  if (a.items_.size() != b.items_.size() || a.hash() != b.hash())
    return false;
  for (std::size_t i = 0; i < a.items_.size(); ++i)
    if (!a.items_[i]->equals(*b.items_[i]))
      return false;
  return true;
}

bool operator<(const WitnessSet &a, const WitnessSet &b) {
  return std::lexicographical_compare(a.items_.begin(), a.items_.end(), b.items_.begin(),
                                      b.items_.end(), witness_less);
}

void WitnessSet::print(std::ostream &os) const {
  for (const auto &w : items_)
    w->witness_info(os);
}

} // namespace widzard
