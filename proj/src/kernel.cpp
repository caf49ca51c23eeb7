#include "widzard/kernel.hpp"

#include <map>
#include <sstream>

#include "widzard/errors.hpp"
#include "widzard/pace.hpp"

namespace widzard {

CoreRun run_core(const Core &core, const ItdTerm &term, const ActiveLabelAnnotation &bags) {
  CoreRun result;
  std::map<NodeId, WitnessSet> sets;
  for (NodeId id : term.post_order()) {
    const ItdNode &n = term.node(id);
    Bag before = n.children.empty() ? Bag{} : bags.at(n.children[0]);
    WitnessSet out;
    if (n.children.empty()) {
      out = apply_instruction(core, n.instruction, before, {});
    } else if (n.children.size() == 1) {
      out = apply_instruction(core, n.instruction, before, sets.at(n.children[0]));
    } else {
      out = apply_instruction(core, n.instruction, before, sets.at(n.children[0]),
                              sets.at(n.children[1]));
    }
    for (NodeId c : n.children)
      sets.erase(c);
    result.max_witness_set = std::max(result.max_witness_set, out.size());
    sets[id] = std::move(out);
  }
  result.root = std::move(sets.at(term.root()));
  result.root_bag = bags.at(term.root());
  return result;
}

RunReport run(const PropertySpec &spec, const ItdTerm &term, unsigned k) {
  validate(term, k);
  const ItdTerm closed = normalize_trailing_forgets(term);
  const ActiveLabelAnnotation bags = annotate(closed);
  const std::vector<CorePtr> cores = instantiate_cores(spec);

  RunReport report;
  report.formula = to_string(*spec.formula);
  Environment env;
  for (std::size_t i = 0; i < cores.size(); ++i) {
    CoreRun cr = run_core(*cores[i], closed, bags);
    RootResult rr = root_result(*cores[i], cr.root_bag, cr.root);
    VariableReport v;
    v.binding = spec.bindings[i];
    v.descriptor = cores[i]->descriptor();
    v.accepted = rr.accepted;
    v.inv = rr.inv;
    v.max_witness_set = cr.max_witness_set;
    env.accepted[v.binding.variable] = v.accepted;
    env.inv[v.binding.variable] =
        v.inv ? std::optional<double>(static_cast<double>(*v.inv)) : std::nullopt;
    report.variables.push_back(std::move(v));
  }
  report.satisfied = evaluate_formula(*spec.formula, env);
  return report;
}

RunReport run_pace(const PropertySpec &spec, std::string_view gr, std::string_view td) {
  MultiGraph g = parse_gr(gr);
  TreeDecomposition dec = parse_td(td);
  if (auto bad = validate_td(g, dec))
    throw ValidationError("invalid tree decomposition: " + bad->message);
  const unsigned k = static_cast<unsigned>(dec.width());
  if (k + 1 > kMaxLabel)
    throw ValidationError("tree decomposition too wide (at most " +
                          std::to_string(kMaxLabel) + " vertices per bag)");
  return run(spec, td_to_itd(g, dec, k), k);
}

std::string format_binding(const Binding &b) {
  std::string s = b.variable + " := " + b.core_name + "(";
  for (std::size_t i = 0; i < b.params.size(); ++i)
    s += (i ? "," : "") + std::to_string(b.params[i]);
  return s + ")";
}

std::string format_report(const RunReport &r) {
  std::ostringstream os;
  os << "----------------------------------------------------------\n";
  os << "Formula:" << r.formula << "\n\n";
  os << "Result:" << (r.satisfied ? "PROPERTY SATISFIED" : "PROPERTY NOT SATISFIED") << "\n\n";
  os << "Execution information:\n";
  for (const auto &v : r.variables) {
    const std::string &x = v.binding.variable;
    os << "\n" << format_binding(v.binding) << "\n";
    os << "Core type: " << to_string(v.descriptor.core_type) << "\n";
    os << "Final value: " << x << "=" << (v.accepted ? 1 : 0) << "\n";
    os << "Invariant value: INV(" << x << ")=";
    if (v.inv)
      os << *v.inv;
    else
      os << "undefined";
    os << "\n";
    os << "Max witness set: " << v.max_witness_set << "\n";
  }
  os << "-------------------------\n";
  return os.str();
}

} // namespace widzard
