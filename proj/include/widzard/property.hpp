#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "widzard/core.hpp"

namespace widzard {

enum class NodeKind {
  Number,
  Boolean,
  Var,
  Inv,
  Not,
  Neg,
  And,
  Or,
  Implies,
  Iff,
  Lt,
  Gt,
  Le,
  Ge,
  Eq,
  Add,
  Sub,
  Mul,
  Div,
  Call,
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;  // Number, Boolean (0/1)
  std::string text;     // literal spelling, variable or function name
  std::vector<Formula> children;
  std::size_t line = 0;
};

struct Binding {
  std::string variable;
  std::string core_name;
  std::vector<long long> params;
  std::size_t line = 0;
};

struct PropertySpec {
  std::vector<Binding> bindings; // in file order
  Formula formula;

  const Binding *find(const std::string &variable) const;
};

/// Throws ParseError with the offending line.
PropertySpec parse_property(std::string_view text);

/// Formula text only; `first_line` numbers the first line of `text`.
Formula parse_formula(std::string_view text, std::size_t first_line = 1);

/// Instantiates every binding from `registry`, in binding order. Unknown
/// cores and arity mismatches are reported as ParseError at the binding line.
std::vector<CorePtr> instantiate_cores(const PropertySpec &spec,
                                       const CoreRegistry &registry = CoreRegistry::builtin());

struct Environment {
  std::map<std::string, bool> accepted;
  /// nullopt when a Min/Max core produced no final witness.
  std::map<std::string, std::optional<double>> inv;
};

/// Logical context reads 0 as false and anything else as true. A reference
/// to an undefined INV makes the whole formula false. Throws
/// FormulaDomainError on NaN results and logarithms of non-positive values.
bool evaluate_formula(const FormulaNode &f, const Environment &env);

class UndefinedInvariant : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numeric value of a subterm; same error contract as evaluate_formula but
/// throws UndefinedInvariant on an undefined INV.
double evaluate_value(const FormulaNode &f, const Environment &env);

/// Antecedent of a top-level IMPLIES, else null.
Formula premise_of(const Formula &f);

/// Variables referenced by `f`, bare or inside INV.
std::set<std::string> variables_of(const FormulaNode &f);

/// Banner form: binary nodes print as "( lhs OP rhs)".
std::string to_string(const FormulaNode &f);

} // namespace widzard
