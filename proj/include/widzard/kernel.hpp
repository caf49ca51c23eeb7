#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "widzard/core.hpp"
#include "widzard/itd.hpp"
#include "widzard/property.hpp"

namespace widzard {

struct VariableReport {
  Binding binding;
  CoreDescriptor descriptor;
  bool accepted = false;
  std::optional<long long> inv;
  /// Largest witness set seen at any node for this variable.
  std::size_t max_witness_set = 0;
};

struct RunReport {
  std::string formula;
  bool satisfied = false;
  std::vector<VariableReport> variables;
};

/// Witness sets of one core over the whole term, plus the largest one seen.
struct CoreRun {
  WitnessSet root;
  Bag root_bag;
  std::size_t max_witness_set = 0;
};

CoreRun run_core(const Core &core, const ItdTerm &term, const ActiveLabelAnnotation &bags);

/// Model-checks `term` (validated against width k). The term is closed with
/// trailing forgets before the root decision.
RunReport run(const PropertySpec &spec, const ItdTerm &term, unsigned k);

/// Parses and validates the PACE pair, converts, then run().
RunReport run_pace(const PropertySpec &spec, std::string_view gr, std::string_view td);

std::string format_binding(const Binding &b);
std::string format_report(const RunReport &r);

} // namespace widzard
