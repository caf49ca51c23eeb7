#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <type_traits>
#include <vector>

#include "widzard/bag.hpp"

namespace widzard {

/// Order-sensitive hash accumulator: `h << a << b`.
class Hasher {
public:
  Hasher &operator<<(std::uint64_t v) {
    // splitmix64 finalizer on the running state
    std::uint64_t x = state_ ^ (v + 0x9e3779b97f4a7c15ull + (state_ << 6) + (state_ >> 2));
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    state_ = x ^ (x >> 31);
    return *this;
  }
  Hasher &operator<<(int v) { return *this << static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }
  Hasher &operator<<(unsigned v) { return *this << static_cast<std::uint64_t>(v); }
  Hasher &operator<<(long long v) { return *this << static_cast<std::uint64_t>(v); }
  Hasher &operator<<(Bag b) { return *this << static_cast<std::uint64_t>(b.mask()); }

  std::size_t value() const { return static_cast<std::size_t>(state_); }

private:
  std::uint64_t state_ = 0x6a09e667f3bcc908ull;
};

class Witness;
using WitnessPtr = std::shared_ptr<const Witness>;

/// Type-erased local witness. Comparisons are only ever made between
/// witnesses produced by the same core, so implementations may assume the
/// other operand has their own dynamic type.
class Witness {
public:
  virtual ~Witness() = default;

  virtual bool equals(const Witness &other) const = 0;
  /// Strict total order, consistent with equals().
  virtual bool less(const Witness &other) const = 0;
  virtual void hash(Hasher &h) const = 0;
  /// Image under an injective label map defined on every label the witness mentions.
  virtual WitnessPtr relabel(const LabelMap &map) const = 0;
  virtual void witness_info(std::ostream &os) const = 0;

  std::size_t hash_value() const {
    Hasher h;
    hash(h);
    return h.value();
  }
};

/// CRTP bridge: Derived supplies operator==, operator<, relabeled(), hash()
/// and witness_info().
template <class Derived> class WitnessWrapper : public Witness {
public:
  using WitnessAlias = Derived;

  bool equals(const Witness &other) const final {
    return self() == static_cast<const Derived &>(other);
  }
  bool less(const Witness &other) const final {
    return self() < static_cast<const Derived &>(other);
  }
  WitnessPtr relabel(const LabelMap &map) const final {
    return std::make_shared<const Derived>(self().relabeled(map));
  }

private:
  const Derived &self() const { return static_cast<const Derived &>(*this); }
};

template <class W> std::shared_ptr<const W> witness_cast(const WitnessPtr &p) {
  return std::static_pointer_cast<const W>(p);
}

/// Deduplicated witnesses kept sorted by the witness order.
class WitnessSet {
public:
  using const_iterator = std::vector<WitnessPtr>::const_iterator;

  /// Returns false when an equal witness is already present.
  bool insert(WitnessPtr w);

  template <class W> bool emplace(W &&w) {
    return insert(std::make_shared<const std::decay_t<W>>(std::forward<W>(w)));
  }

  bool contains(const Witness &w) const;
  void clear() {
    items_.clear();
    hash_ = 0;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  const WitnessPtr &operator[](std::size_t i) const { return items_[i]; }

  /// Hash of the whole set; cached.
  std::size_t hash() const;

  WitnessSet relabeled(const LabelMap &map) const;

  friend bool operator==(const WitnessSet &a, const WitnessSet &b);
  /// Lexicographic in the witness order.
  friend bool operator<(const WitnessSet &a, const WitnessSet &b);

  void print(std::ostream &os) const;

private:
  std::vector<WitnessPtr> items_;
  mutable std::size_t hash_ = 0; // 0 = not computed
};

} // namespace widzard
