#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace widzard {

/// Active labels are small positive integers in [1..kMaxLabel].
using Label = unsigned;

inline constexpr Label kMaxLabel = 31;

/// A set of active labels stored as a bitmask (bit i <=> label i).
///
/// Ordering is lexicographic on the ascending element sequence, the same order
/// std::set<unsigned> would give.
class Bag {
public:
  constexpr Bag() = default;
  Bag(std::initializer_list<Label> labels) {
    for (Label l : labels)
      insert(l);
  }

  static constexpr Bag from_mask(std::uint32_t mask) {
    Bag b;
    b.mask_ = mask;
    return b;
  }
  /// {1, ..., n}
  static constexpr Bag prefix(unsigned n) {
    return from_mask(n == 0 ? 0u : static_cast<std::uint32_t>(((1ull << n) - 1) << 1));
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool contains(Label l) const { return (mask_ >> l) & 1u; }
  constexpr void insert(Label l) { mask_ |= 1u << l; }
  constexpr void erase(Label l) { mask_ &= ~(1u << l); }
  constexpr unsigned size() const { return static_cast<unsigned>(std::popcount(mask_)); }
  constexpr bool empty() const { return mask_ == 0; }
  /// Largest label in the bag, 0 when empty.
  constexpr Label max_label() const {
    return mask_ == 0 ? 0 : 31u - static_cast<unsigned>(std::countl_zero(mask_));
  }
  constexpr Label min_label() const {
    return mask_ == 0 ? 0 : static_cast<unsigned>(std::countr_zero(mask_));
  }

  std::vector<Label> elements() const;

  /// Visit labels in ascending order.
  template <class F> void for_each(F &&f) const {
    for (std::uint32_t m = mask_; m != 0; m &= m - 1)
      f(static_cast<Label>(std::countr_zero(m)));
  }

  friend constexpr bool operator==(Bag a, Bag b) { return a.mask_ == b.mask_; }

  friend constexpr bool operator<(Bag a, Bag b) {
    std::uint32_t diff = a.mask_ ^ b.mask_;
    if (diff == 0)
      return false;
    std::uint32_t low = diff & (~diff + 1);
    std::uint32_t above = ~((low << 1) - 1);
    // Below `low` both sequences agree; the one holding `low` is smaller
    // unless the other one has run out of elements.
    if (a.mask_ & low)
      return (b.mask_ & above) != 0;
    return (a.mask_ & above) == 0;
  }

private:
  std::uint32_t mask_ = 0;
};

std::ostream &operator<<(std::ostream &os, Bag b);

/// A permutation of [1..kMaxLabel], used to relabel witnesses and terms.
class LabelMap {
public:
  LabelMap() {
    for (Label l = 0; l <= kMaxLabel; ++l)
      map_[l] = static_cast<std::uint8_t>(l);
  }

  Label operator()(Label l) const { return map_[l]; }
  void set(Label from, Label to) { map_[from] = static_cast<std::uint8_t>(to); }

  Bag apply(Bag b) const {
    Bag out;
    b.for_each([&](Label l) { out.insert(map_[l]); });
    return out;
  }

  /// (*this)(other(l))
  LabelMap compose(const LabelMap &other) const {
    LabelMap out;
    for (Label l = 0; l <= kMaxLabel; ++l)
      out.map_[l] = map_[other.map_[l]];
    return out;
  }

  LabelMap inverse() const {
    LabelMap out;
    for (Label l = 0; l <= kMaxLabel; ++l)
      out.map_[map_[l]] = static_cast<std::uint8_t>(l);
    return out;
  }

  bool is_identity() const {
    for (Label l = 0; l <= kMaxLabel; ++l)
      if (map_[l] != l)
        return false;
    return true;
  }

  /// Extend a partial injection (given on `domain`) to a permutation of
  /// [1..kMaxLabel]: unmapped labels take the unused targets in ascending order.
  static LabelMap complete(Bag domain, const LabelMap &partial);

  friend bool operator==(const LabelMap &, const LabelMap &) = default;

private:
  std::array<std::uint8_t, kMaxLabel + 1> map_{};
};

} // namespace widzard
