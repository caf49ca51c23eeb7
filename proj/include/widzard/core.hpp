#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "widzard/bag.hpp"
#include "widzard/itd.hpp"
#include "widzard/witness.hpp"

namespace widzard {

enum class CoreType { Bool, Min, Max };
enum class ParameterType { None, UnsignedInt };

const char *to_string(CoreType t);
const char *to_string(ParameterType t);

struct CoreDescriptor {
  std::string name;
  CoreType core_type = CoreType::Bool;
  ParameterType parameter_type = ParameterType::None;
};

/// A dynamic program over ITD instructions. Every transition receives the
/// bag *before* the instruction and appends its outputs to `out`.
/// Instances are immutable after construction.
class Core {
public:
  virtual ~Core() = default;

  virtual const CoreDescriptor &descriptor() const = 0;

  virtual void initialize_leaf(WitnessSet &out) const = 0;
  virtual void intro_v(Label i, Bag bag, const WitnessPtr &w, WitnessSet &out) const = 0;
  virtual void intro_e(Label i, Label j, Bag bag, const WitnessPtr &w, WitnessSet &out) const = 0;
  virtual void forget_v(Label i, Bag bag, const WitnessPtr &w, WitnessSet &out) const = 0;
  virtual void join(Bag bag, const WitnessPtr &w1, const WitnessPtr &w2,
                    WitnessSet &out) const = 0;
  virtual bool is_final_witness(Bag bag, const Witness &w) const = 0;
  virtual long long inv(Bag bag, const Witness &w) const = 0;
  virtual void clean(WitnessSet &ws) const { (void)ws; }

  /// True when join(w1, w2) is {w1} for equal witnesses and empty otherwise;
  /// Join then reduces to a sorted intersection.
  virtual bool join_is_intersection() const { return false; }

  /// Optional join filter. When defined for both operands, join(w1, w2) may
  /// only be nonempty if the keys are equal; lets apply_instruction avoid
  /// the quadratic pairing. Default: no key, every pair is tried.
  virtual std::optional<std::size_t> join_key(Bag bag, const Witness &w) const {
    (void)bag;
    (void)w;
    return std::nullopt;
  }
};

/// CRTP adapter from typed transitions to the type-erased interface.
/// Derived provides static metadata() and the *_impl functions taking
/// std::shared_ptr<const W>.
template <class Derived, class W> class CoreWrapper : public Core {
public:
  using WPtr = std::shared_ptr<const W>;

  const CoreDescriptor &descriptor() const final {
    static const CoreDescriptor d = Derived::metadata();
    return d;
  }
  void initialize_leaf(WitnessSet &out) const final { self().initialize_leaf_impl(out); }
  void intro_v(Label i, Bag bag, const WitnessPtr &w, WitnessSet &out) const final {
    self().intro_v_impl(i, bag, witness_cast<W>(w), out);
  }
  void intro_e(Label i, Label j, Bag bag, const WitnessPtr &w, WitnessSet &out) const final {
    self().intro_e_impl(i, j, bag, witness_cast<W>(w), out);
  }
  void forget_v(Label i, Bag bag, const WitnessPtr &w, WitnessSet &out) const final {
    self().forget_v_impl(i, bag, witness_cast<W>(w), out);
  }
  void join(Bag bag, const WitnessPtr &w1, const WitnessPtr &w2, WitnessSet &out) const final {
    self().join_impl(bag, witness_cast<W>(w1), witness_cast<W>(w2), out);
  }
  bool is_final_witness(Bag bag, const Witness &w) const final {
    return self().is_final_witness_impl(bag, static_cast<const W &>(w));
  }
  long long inv(Bag bag, const Witness &w) const final {
    return self().inv_impl(bag, static_cast<const W &>(w));
  }

private:
  const Derived &self() const { return static_cast<const Derived &>(*this); }
};

using CorePtr = std::shared_ptr<const Core>;

/// Transition for one instruction: union of per-witness outputs, then clean.
/// `second` is only read for Join.
WitnessSet apply_instruction(const Core &core, const Instruction &ins, Bag bag_before,
                             const WitnessSet &first, const WitnessSet &second = {});

struct RootResult {
  bool accepted = false;
  /// Empty for a Min/Max core without final witnesses.
  std::optional<long long> inv;
};

RootResult root_result(const Core &core, Bag bag, const WitnessSet &ws);

class CoreRegistry {
public:
  using Factory = std::function<CorePtr(const std::vector<long long> &)>;

  void add(const CoreDescriptor &d, Factory f);
  template <class C> void add() {
    add(C::metadata(), [](const std::vector<long long> &p) { return std::make_shared<const C>(p); });
  }

  /// Throws CoreError on unknown names or parameter mismatch.
  CorePtr instantiate(const std::string &name, const std::vector<long long> &params) const;
  const CoreDescriptor *find(const std::string &name) const;
  std::vector<CoreDescriptor> descriptors() const;

  static const CoreRegistry &builtin();

private:
  std::map<std::string, std::pair<CoreDescriptor, Factory>> entries_;
};

} // namespace widzard
