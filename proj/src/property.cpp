#include "widzard/property.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "widzard/errors.hpp"

namespace widzard {

namespace {

enum class Tok {
  End,
  Number,
  Ident,
  LParen,
  RParen,
  Comma,
  Plus,
  Minus,
  Star,
  Slash,
  Lt,
  Gt,
  Le,
  Ge,
  Eq,
  And,
  Or,
  Not,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 0;
};

const std::set<std::string> kUnary = {"abs", "acos",  "asin", "atan", "cos", "exp",
                                      "floor", "ln", "log", "sin", "sqrt", "tan"};
const std::set<std::string> kBinary = {"max", "min", "pow"};

std::string upper(std::string s) {
  for (char &c : s)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool is_reserved(const std::string &word) {
  static const std::set<std::string> words = {"AND", "OR", "NOT", "IMPLIES", "IFF", "INV"};
  std::string u = upper(word);
  return words.count(word) || u == "TRUE" || u == "FALSE" || u == "FORMULA" ||
         kUnary.count(word) || kBinary.count(word);
}

std::vector<Token> tokenize(std::string_view text, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string t) { out.push_back({k, std::move(t), line}); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n')
        ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
          ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-'))
          ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k])))
            ++k;
          j = k;
        }
      }
      push(Tok::Number, std::string(text.substr(i, j - i)));
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      push(Tok::Ident, std::string(text.substr(i, j - i)));
      i = j;
      continue;
    }
    auto next = [&](char d) { return i + 1 < text.size() && text[i + 1] == d; };
    switch (c) {
    case '(':
      push(Tok::LParen, "(");
      break;
    case ')':
      push(Tok::RParen, ")");
      break;
    case ',':
      push(Tok::Comma, ",");
      break;
    case '+':
      push(Tok::Plus, "+");
      break;
    case '-':
      push(Tok::Minus, "-");
      break;
    case '*':
      push(Tok::Star, "*");
      break;
    case '/':
      push(Tok::Slash, "/");
      break;
    case '<':
      if (next('=')) {
        push(Tok::Le, "<=");
        ++i;
      } else {
        push(Tok::Lt, "<");
      }
      break;
    case '>':
      if (next('=')) {
        push(Tok::Ge, ">=");
        ++i;
      } else {
        push(Tok::Gt, ">");
      }
      break;
    case '=':
      if (!next('='))
        throw ParseError(line, "unexpected '=' (use '==')");
      push(Tok::Eq, "==");
      ++i;
      break;
    case '&':
      if (!next('&'))
        throw ParseError(line, "unexpected '&' (use '&&' or AND)");
      push(Tok::And, "AND");
      ++i;
      break;
    case '|':
      if (next('|'))
        ++i;
      push(Tok::Or, "OR");
      break;
    case '!':
      if (next('='))
        throw ParseError(line, "'!=' is not supported");
      push(Tok::Not, "NOT");
      break;
    default:
      throw ParseError(line, std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Tok::End, "", line});
  return out;
}

// Callers parse operands into locals first: GCC 11 leaks the earlier elements
// of a braced list when a later element throws.
Formula make(NodeKind k, std::size_t line, std::vector<Formula> children = {},
             std::string text = {}, double number = 0.0) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->line = line;
  n->children = std::move(children);
  n->text = std::move(text);
  n->number = number;
  return n;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    if (peek().kind == Tok::End)
      throw ParseError(peek().line, "empty formula");
    Formula f = iff();
    if (peek().kind != Tok::End)
      throw ParseError(peek().line, "unexpected '" + peek().text + "'");
    return f;
  }

private:
  const Token &peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
  bool keyword(const char *w) const { return peek().kind == Tok::Ident && peek().text == w; }

  void expect(Tok k, const char *what) {
    if (peek().kind != k)
      throw ParseError(peek().line, std::string("expected ") + what +
                                        (peek().kind == Tok::End ? " at end of formula"
                                                                 : " before '" + peek().text + "'"));
    take();
  }

  struct DepthGuard {
    Parser &p;
    DepthGuard(Parser &parser) : p(parser) {
      if (++p.depth_ > kMaxDepth)
        throw ParseError(p.peek().line, "formula nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };
  static constexpr int kMaxDepth = 200;

  Formula iff() {
    DepthGuard guard(*this);
    Formula lhs = implies();
    while (keyword("IFF")) {
      std::size_t line = take().line;
      Formula rhs = implies();
      lhs = make(NodeKind::Iff, line, {lhs, rhs});
    }
    return lhs;
  }

  Formula implies() {
    Formula lhs = disjunction();
    if (keyword("IMPLIES")) {
      std::size_t line = take().line;
      Formula rhs = implies();
      return make(NodeKind::Implies, line, {lhs, rhs});
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (keyword("OR") || peek().kind == Tok::Or) {
      std::size_t line = take().line;
      Formula rhs = conjunction();
      lhs = make(NodeKind::Or, line, {lhs, rhs});
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = negation();
    while (keyword("AND") || peek().kind == Tok::And) {
      std::size_t line = take().line;
      Formula rhs = negation();
      lhs = make(NodeKind::And, line, {lhs, rhs});
    }
    return lhs;
  }

  Formula negation() {
    if (keyword("NOT") || peek().kind == Tok::Not) {
      DepthGuard guard(*this);
      std::size_t line = take().line;
      return make(NodeKind::Not, line, {negation()});
    }
    return comparison();
  }

  static bool comparison_token(Tok k) {
    return k == Tok::Lt || k == Tok::Gt || k == Tok::Le || k == Tok::Ge || k == Tok::Eq;
  }

  Formula comparison() {
    Formula lhs = sum();
    if (!comparison_token(peek().kind))
      return lhs;
    Token op = take();
    Formula rhs = sum();
    if (comparison_token(peek().kind))
      throw ParseError(peek().line, "chained comparison; add parentheses");
    NodeKind k = op.kind == Tok::Lt   ? NodeKind::Lt
                 : op.kind == Tok::Gt ? NodeKind::Gt
                 : op.kind == Tok::Le ? NodeKind::Le
                 : op.kind == Tok::Ge ? NodeKind::Ge
                                      : NodeKind::Eq;
    return make(k, op.line, {lhs, rhs});
  }

  Formula sum() {
    Formula lhs = product();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Token op = take();
      Formula rhs = product();
      lhs = make(op.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub, op.line, {lhs, rhs});
    }
    return lhs;
  }

  Formula product() {
    Formula lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      Token op = take();
      Formula rhs = unary();
      lhs = make(op.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div, op.line, {lhs, rhs});
    }
    return lhs;
  }

  Formula unary() {
    if (peek().kind == Tok::Minus) {
      DepthGuard guard(*this);
      std::size_t line = take().line;
      return make(NodeKind::Neg, line, {unary()});
    }
    return primary();
  }

  Formula primary() {
    const Token t = peek();
    switch (t.kind) {
    case Tok::Number: {
      take();
      double v = 0.0;
      std::istringstream in(t.text);
      in.imbue(std::locale::classic());
      in >> v;
      if (!in)
        throw ParseError(t.line, "bad number '" + t.text + "'");
      return make(NodeKind::Number, t.line, {}, t.text, v);
    }
    case Tok::LParen: {
      take();
      Formula inner = iff();
      expect(Tok::RParen, "')'");
      return inner;
    }
    case Tok::Ident:
      return identifier();
    case Tok::End:
      throw ParseError(t.line, "formula ends unexpectedly");
    default:
      throw ParseError(t.line, "unexpected '" + t.text + "'");
    }
  }

  Formula identifier() {
    const Token t = take();
    const std::string u = upper(t.text);
    if (u == "TRUE" || u == "FALSE")
      return make(NodeKind::Boolean, t.line, {}, u, u == "TRUE" ? 1.0 : 0.0);
    if (t.text == "INV") {
      expect(Tok::LParen, "'(' after INV");
      if (peek().kind != Tok::Ident || is_reserved(peek().text))
        throw ParseError(peek().line, "INV expects a variable name");
      std::string var = take().text;
      expect(Tok::RParen, "')'");
      return make(NodeKind::Inv, t.line, {}, var);
    }
    if (kUnary.count(t.text) || kBinary.count(t.text)) {
      expect(Tok::LParen, "'(' after function name");
      std::vector<Formula> args{iff()};
      if (kBinary.count(t.text)) {
        expect(Tok::Comma, "','");
        args.push_back(iff());
      }
      expect(Tok::RParen, "')'");
      return make(NodeKind::Call, t.line, std::move(args), t.text);
    }
    if (is_reserved(t.text))
      throw ParseError(t.line, "unexpected keyword '" + t.text + "'");
    if (peek().kind == Tok::LParen)
      throw ParseError(t.line, "unknown function '" + t.text + "'");
    return make(NodeKind::Var, t.line, {}, t.text);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

bool identifier_like(const std::string &s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

Binding parse_binding(const std::string &line, std::size_t no) {
  auto assign = line.find(":=");
  if (assign == std::string::npos)
    throw ParseError(no, "expected '<var> := <CoreName>(<parameter>)' or the Formula header");
  Binding b;
  b.line = no;
  b.variable = trim(std::string_view(line).substr(0, assign));
  if (!identifier_like(b.variable))
    throw ParseError(no, "bad variable name '" + b.variable + "'");
  if (is_reserved(b.variable))
    throw ParseError(no, "'" + b.variable + "' is reserved");
  std::string rhs = trim(std::string_view(line).substr(assign + 2));
  auto open = rhs.find('(');
  if (open == std::string::npos || rhs.back() != ')')
    throw ParseError(no, "expected <CoreName>(<parameter>)");
  b.core_name = trim(std::string_view(rhs).substr(0, open));
  if (!identifier_like(b.core_name))
    throw ParseError(no, "bad core name '" + b.core_name + "'");
  std::string args = trim(std::string_view(rhs).substr(open + 1, rhs.size() - open - 2));
  if (!args.empty()) {
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      long long v = 0;
      auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (item.empty() || ec != std::errc() || p != item.data() + item.size())
        throw ParseError(no, "parameter '" + item + "' is not an integer");
      b.params.push_back(v);
    }
    if (args.back() == ',')
      throw ParseError(no, "empty parameter");
  }
  return b;
}

void check_bound(const FormulaNode &f, const PropertySpec &spec) {
  if ((f.kind == NodeKind::Var || f.kind == NodeKind::Inv) && !spec.find(f.text))
    throw ParseError(f.line, "unbound variable '" + f.text + "'");
  for (const auto &c : f.children)
    check_bound(*c, spec);
}

double checked(double v, const char *what) {
  if (std::isnan(v))
    throw FormulaDomainError(std::string("domain error in ") + what);
  return v;
}

double call(const std::string &fn, const std::vector<double> &a) {
  if ((fn == "ln" || fn == "log") && a[0] <= 0.0)
    throw FormulaDomainError(fn + " of a non-positive value");
  if (fn == "sqrt" && a[0] < 0.0)
    throw FormulaDomainError("sqrt of a negative value");
  double r = 0.0;
  if (fn == "abs")
    r = std::fabs(a[0]);
  else if (fn == "acos")
    r = std::acos(a[0]);
  else if (fn == "asin")
    r = std::asin(a[0]);
  else if (fn == "atan")
    r = std::atan(a[0]);
  else if (fn == "cos")
    r = std::cos(a[0]);
  else if (fn == "exp")
    r = std::exp(a[0]);
  else if (fn == "floor")
    r = std::floor(a[0]);
  else if (fn == "ln")
    r = std::log(a[0]);
  else if (fn == "log")
    r = std::log10(a[0]);
  else if (fn == "sin")
    r = std::sin(a[0]);
  else if (fn == "sqrt")
    r = std::sqrt(a[0]);
  else if (fn == "tan")
    r = std::tan(a[0]);
  else if (fn == "max")
    r = std::max(a[0], a[1]);
  else if (fn == "min")
    r = std::min(a[0], a[1]);
  else if (fn == "pow")
    r = std::pow(a[0], a[1]);
  return checked(r, fn.c_str());
}

const char *op_text(NodeKind k) {
  switch (k) {
  case NodeKind::And:
    return "AND";
  case NodeKind::Or:
    return "OR";
  case NodeKind::Implies:
    return "IMPLIES";
  case NodeKind::Iff:
    return "IFF";
  case NodeKind::Lt:
    return "<";
  case NodeKind::Gt:
    return ">";
  case NodeKind::Le:
    return "<=";
  case NodeKind::Ge:
    return ">=";
  case NodeKind::Eq:
    return "==";
  case NodeKind::Add:
    return "+";
  case NodeKind::Sub:
    return "-";
  case NodeKind::Mul:
    return "*";
  case NodeKind::Div:
    return "/";
  default:
    return "?";
  }
}

void print(const FormulaNode &f, std::string &out) {
  switch (f.kind) {
  case NodeKind::Number:
  case NodeKind::Boolean:
  case NodeKind::Var:
    out += f.text;
    return;
  case NodeKind::Inv:
    out += "INV(" + f.text + ")";
    return;
  case NodeKind::Not:
    out += "( NOT ";
    print(*f.children[0], out);
    out += ")";
    return;
  case NodeKind::Neg:
    out += "( -";
    print(*f.children[0], out);
    out += ")";
    return;
  case NodeKind::Call:
    out += f.text + "(";
    for (std::size_t i = 0; i < f.children.size(); ++i) {
      if (i)
        out += ", ";
      print(*f.children[i], out);
    }
    out += ")";
    return;
  default:
    out += "( ";
    print(*f.children[0], out);
    out += std::string(" ") + op_text(f.kind) + " ";
    print(*f.children[1], out);
    out += ")";
  }
}

} // namespace

const Binding *PropertySpec::find(const std::string &variable) const {
  for (const auto &b : bindings)
    if (b.variable == variable)
      return &b;
  return nullptr;
}

Formula parse_formula(std::string_view text, std::size_t first_line) {
  return Parser(tokenize(text, first_line)).parse();
}

PropertySpec parse_property(std::string_view text) {
  PropertySpec spec;
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0;;) {
    std::size_t end = text.find('\n', pos);
    lines.push_back(text.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (end == std::string_view::npos)
      break;
    pos = end + 1;
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t no = i + 1;
    std::string line(lines[i]);
    if (auto c = line.find("//"); c != std::string::npos)
      line.erase(c);
    line = trim(line);
    if (line.empty())
      continue;
    if (line == "Formula" || line == "FORMULA") {
      const std::size_t offset = static_cast<std::size_t>(lines[i].data() - text.data()) +
                                 lines[i].size();
      if (offset >= text.size())
        throw ParseError(no, "empty formula");
      spec.formula = parse_formula(text.substr(std::min(offset + 1, text.size())), no + 1);
      check_bound(*spec.formula, spec);
      return spec;
    }
    Binding b = parse_binding(line, no);
    if (spec.find(b.variable))
      throw ParseError(no, "variable '" + b.variable + "' bound twice");
    spec.bindings.push_back(std::move(b));
  }
  throw ParseError(lines.size(), "missing Formula header");
}

std::vector<CorePtr> instantiate_cores(const PropertySpec &spec, const CoreRegistry &registry) {
  std::vector<CorePtr> cores;
  for (const auto &b : spec.bindings) {
    try {
      cores.push_back(registry.instantiate(b.core_name, b.params));
    } catch (const CoreError &e) {
      throw ParseError(b.line, e.what());
    }
  }
  return cores;
}

double evaluate_value(const FormulaNode &f, const Environment &env) {
  auto arg = [&](std::size_t i) { return evaluate_value(*f.children[i], env); };
  auto truth = [&](std::size_t i) { return arg(i) != 0.0; };
  switch (f.kind) {
  case NodeKind::Number:
  case NodeKind::Boolean:
    return f.number;
  case NodeKind::Var:
    return env.accepted.at(f.text) ? 1.0 : 0.0;
  case NodeKind::Inv: {
    const auto &v = env.inv.at(f.text);
    if (!v)
      throw UndefinedInvariant("undefined INV(" + f.text + ")");
    return *v;
  }
  case NodeKind::Not:
    return truth(0) ? 0.0 : 1.0;
  case NodeKind::Neg:
    return -arg(0);
  case NodeKind::And:
    return (truth(0) && truth(1)) ? 1.0 : 0.0;
  case NodeKind::Or:
    return (truth(0) || truth(1)) ? 1.0 : 0.0;
  case NodeKind::Implies:
    return (!truth(0) || truth(1)) ? 1.0 : 0.0;
  case NodeKind::Iff:
    return (truth(0) == truth(1)) ? 1.0 : 0.0;
  case NodeKind::Lt:
    return arg(0) < arg(1) ? 1.0 : 0.0;
  case NodeKind::Gt:
    return arg(0) > arg(1) ? 1.0 : 0.0;
  case NodeKind::Le:
    return arg(0) <= arg(1) ? 1.0 : 0.0;
  case NodeKind::Ge:
    return arg(0) >= arg(1) ? 1.0 : 0.0;
  case NodeKind::Eq:
    return arg(0) == arg(1) ? 1.0 : 0.0;
  case NodeKind::Add:
    return checked(arg(0) + arg(1), "+");
  case NodeKind::Sub:
    return checked(arg(0) - arg(1), "-");
  case NodeKind::Mul:
    return checked(arg(0) * arg(1), "*");
  case NodeKind::Div:
    return checked(arg(0) / arg(1), "/");
  case NodeKind::Call: {
    std::vector<double> a;
    for (std::size_t i = 0; i < f.children.size(); ++i)
      a.push_back(arg(i));
    return call(f.text, a);
  }
  }
  return 0.0;
}

bool evaluate_formula(const FormulaNode &f, const Environment &env) {
  try {
    return evaluate_value(f, env) != 0.0;
  } catch (const UndefinedInvariant &) {
    return false;
  }
}

Formula premise_of(const Formula &f) {
  if (f && f->kind == NodeKind::Implies)
    return f->children[0];
  return nullptr;
}

std::set<std::string> variables_of(const FormulaNode &f) {
  std::set<std::string> out;
  if (f.kind == NodeKind::Var || f.kind == NodeKind::Inv)
    out.insert(f.text);
  for (const auto &c : f.children)
    out.merge(variables_of(*c));
  return out;
}

std::string to_string(const FormulaNode &f) {
  std::string out;
  print(f, out);
  return out;
}

} // namespace widzard
