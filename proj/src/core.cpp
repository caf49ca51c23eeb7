#include "widzard/core.hpp"

#include <algorithm>

#include "widzard/errors.hpp"

namespace widzard {

const char *to_string(CoreType t) {
  switch (t) {
  case CoreType::Bool:
    return "Bool";
  case CoreType::Min:
    return "Min";
  case CoreType::Max:
    return "Max";
  }
  return "?";
}

const char *to_string(ParameterType t) {
  return t == ParameterType::None ? "None" : "UnsignedInt";
}

namespace {

void join_sets(const Core &core, Bag bag, const WitnessSet &a, const WitnessSet &b,
               WitnessSet &out) {
  if (a.empty() || b.empty())
    return;
  if (core.join_is_intersection()) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i]->less(*b[j]))
        ++i;
      else if (b[j]->less(*a[i]))
        ++j;
      else {
        out.insert(a[i]);
        ++i;
        ++j;
      }
    }
    return;
  }
  std::vector<std::pair<std::size_t, std::size_t>> keyed;
  keyed.reserve(b.size());
  bool keys = true;
  for (std::size_t i = 0; i < b.size() && keys; ++i) {
    auto k = core.join_key(bag, *b[i]);
    if (!k)
      keys = false;
    else
      keyed.emplace_back(*k, i);
  }
  if (keys) {
    std::sort(keyed.begin(), keyed.end());
    for (const auto &w1 : a) {
      auto k = core.join_key(bag, *w1);
      if (!k) {
        keys = false;
        break;
      }
      auto lo = std::lower_bound(keyed.begin(), keyed.end(), std::make_pair(*k, std::size_t{0}));
      for (; lo != keyed.end() && lo->first == *k; ++lo)
        core.join(bag, w1, b[lo->second], out);
    }
    if (keys)
      return;
    out.clear();
  }
  for (const auto &w1 : a)
    for (const auto &w2 : b)
      core.join(bag, w1, w2, out);
}

} // namespace

WitnessSet apply_instruction(const Core &core, const Instruction &ins, Bag bag,
                             const WitnessSet &first, const WitnessSet &second) {
  WitnessSet out;
  switch (ins.op) {
  case Op::Leaf:
    core.initialize_leaf(out);
    break;
  case Op::IntroVertex:
    for (const auto &w : first)
      core.intro_v(ins.a, bag, w, out);
    break;
  case Op::IntroEdge:
    for (const auto &w : first)
      core.intro_e(ins.a, ins.b, bag, w, out);
    break;
  case Op::ForgetVertex:
    for (const auto &w : first)
      core.forget_v(ins.a, bag, w, out);
    break;
  case Op::Join:
    join_sets(core, bag, first, second, out);
    break;
  }
  core.clean(out);
  return out;
}

RootResult root_result(const Core &core, Bag bag, const WitnessSet &ws) {
  RootResult r;
  const CoreType type = core.descriptor().core_type;
  for (const auto &w : ws) {
    if (!core.is_final_witness(bag, *w))
      continue;
    r.accepted = true;
    if (type == CoreType::Bool)
      break;
    long long v = core.inv(bag, *w);
    if (!r.inv || (type == CoreType::Max ? v > *r.inv : v < *r.inv))
      r.inv = v;
  }
  if (type == CoreType::Bool)
    r.inv = r.accepted ? 1 : 0;
  return r;
}

void CoreRegistry::add(const CoreDescriptor &d, Factory f) {
  if (entries_.count(d.name))
    throw CoreError("core registered twice: " + d.name);
  entries_.emplace(d.name, std::make_pair(d, std::move(f)));
}

const CoreDescriptor *CoreRegistry::find(const std::string &name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second.first;
}

CorePtr CoreRegistry::instantiate(const std::string &name,
                                  const std::vector<long long> &params) const {
  auto it = entries_.find(name);
  if (it == entries_.end())
    throw CoreError("unknown core: " + name);
  const CoreDescriptor &d = it->second.first;
  if (d.parameter_type == ParameterType::None && !params.empty())
    throw CoreError(name + " takes no parameters");
  if (d.parameter_type == ParameterType::UnsignedInt) {
    if (params.size() != 1)
      throw CoreError(name + " takes exactly one unsigned integer parameter");
    if (params[0] < 0)
      throw CoreError(name + " parameter must be non-negative");
  }
  return it->second.second(params);
}

std::vector<CoreDescriptor> CoreRegistry::descriptors() const {
  std::vector<CoreDescriptor> out;
  for (const auto &[name, entry] : entries_)
    out.push_back(entry.first);
  return out;
}

} // namespace widzard
