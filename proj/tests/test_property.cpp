#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "widzard/errors.hpp"
#include "widzard/property.hpp"

using namespace widzard;

namespace {

std::string shape(const std::string &formula) { return to_string(*parse_formula(formula)); }

Environment env(std::map<std::string, bool> acc, std::map<std::string, std::optional<double>> inv) {
  Environment e;
  e.accepted = std::move(acc);
  e.inv = std::move(inv);
  return e;
}

std::size_t error_line(const std::string &text) {
  try {
    parse_property(text);
  } catch (const ParseError &e) {
    return e.line();
  }
  return 0;
}

} // namespace

TEST_SUITE("property") {
  TEST_CASE("example files") {
    PropertySpec s = parse_property(oracle::read_data("three_colorable.txt"));
    REQUIRE(s.bindings.size() == 1);
    CHECK(s.bindings[0].variable == "x");
    CHECK(s.bindings[0].core_name == "ChromaticNumber_AtMost");
    CHECK(s.bindings[0].params == std::vector<long long>{3});
    CHECK(to_string(*s.formula) == "x");

    s = parse_property(oracle::read_data("independence_number.txt"));
    CHECK(s.bindings[0].params.empty());
    CHECK(to_string(*s.formula) == "( INV(x) == 2)");

    s = parse_property(oracle::read_data("vertex_count_premise.txt"));
    CHECK(to_string(*s.formula) == "( ( INV(z) <= 20) IMPLIES ( 1 == 1))");

    s = parse_property(oracle::read_data("commented.txt"));
    CHECK(s.bindings[0].params == std::vector<long long>{5});
    CHECK(to_string(*s.formula) == "x");
    CHECK(s.find("x") != nullptr);
    CHECK(s.find("y") == nullptr);
  }

  TEST_CASE("precedence") {
    CHECK(shape("a AND b OR c") == "( ( a AND b) OR c)");
    CHECK(shape("a OR b AND c") == "( a OR ( b AND c))");
    CHECK(shape("NOT a AND b") == "( ( NOT a) AND b)");
    CHECK(shape("a IMPLIES b IMPLIES c") == "( a IMPLIES ( b IMPLIES c))");
    CHECK(shape("a IFF b IFF c") == "( ( a IFF b) IFF c)");
    CHECK(shape("a IMPLIES b IFF c") == "( ( a IMPLIES b) IFF c)");
    CHECK(shape("1 + 2 * 3 < 7") == "( ( 1 + ( 2 * 3)) < 7)");
    CHECK(shape("1 - 2 - 3 == -4") == "( ( ( 1 - 2) - 3) == ( -4))");
    CHECK(shape("NOT INV(x) > 1") == "( NOT ( INV(x) > 1))");
    CHECK(shape("x && y || !z") == "( ( x AND y) OR ( NOT z))");
    CHECK(shape("x | y") == "( x OR y)");
    CHECK(shape("max(INV(a), 2.5) >= sqrt(4)") == "( max(INV(a), 2.5) >= sqrt(4))");
    CHECK(shape("true AND FALSE") == "( TRUE AND FALSE)");
    CHECK(shape("x IMPLIES (INV(y) > ((INV(z)/5)-1))") ==
          "( x IMPLIES ( INV(y) > ( ( INV(z) / 5) - 1)))");
  }

  TEST_CASE("printed form parses back to the same shape") {
    for (const char *f : {"a AND b OR c", "x IMPLIES (INV(y) > ((INV(z)/5)-1))",
                          "NOT (a IFF b) AND -INV(c) * 2 <= 3", "ln(INV(a)) + log(10) == 1"}) {
      std::string once = shape(f);
      CHECK(shape(once) == once);
    }
  }

  TEST_CASE("evaluation") {
    Environment e = env({{"x", true}, {"y", true}}, {{"x", 1.0}, {"y", 1.0}});
    CHECK_FALSE(evaluate_formula(*parse_formula("(NOT x) AND y"), e));
    e = env({{"x", true}}, {{"x", 2.0}});
    CHECK(evaluate_formula(*parse_formula("INV(x) == 2"), e));
    e = env({{"x", true}, {"y", true}, {"z", true}}, {{"x", 1.0}, {"y", 2.0}, {"z", 4.0}});
    CHECK(evaluate_formula(*parse_formula("x IMPLIES (INV(y) > ((INV(z)/5)-1))"), e));
    CHECK(evaluate_formula(*parse_formula("x IFF y"), e));
    CHECK(evaluate_formula(*parse_formula("FALSE IMPLIES FALSE"), e));
    CHECK_FALSE(evaluate_formula(*parse_formula("TRUE IMPLIES FALSE"), e));
    CHECK(evaluate_formula(*parse_formula("ln(exp(2)) == 2"), e));
    CHECK(evaluate_formula(*parse_formula("log(1000) == 3"), e));
    CHECK(evaluate_formula(*parse_formula("7 / 2 == 3.5"), e));
    CHECK(evaluate_value(*parse_formula("pow(2, 10)"), e) == 1024.0);
  }

  TEST_CASE("domain errors") {
    Environment e = env({{"x", true}}, {{"x", 0.0}});
    CHECK_THROWS_AS(evaluate_formula(*parse_formula("sqrt(-1) > 0"), e), FormulaDomainError);
    CHECK_THROWS_AS(evaluate_formula(*parse_formula("ln(INV(x)) > 0"), e), FormulaDomainError);
    CHECK_THROWS_AS(evaluate_formula(*parse_formula("log(-2) > 0"), e), FormulaDomainError);
    CHECK_THROWS_AS(evaluate_formula(*parse_formula("0 / 0 == 1"), e), FormulaDomainError);
  }

  TEST_CASE("undefined invariant rejects") {
    Environment e = env({{"x", false}}, {{"x", std::nullopt}});
    CHECK_FALSE(evaluate_formula(*parse_formula("INV(x) == 2"), e));
    CHECK_FALSE(evaluate_formula(*parse_formula("NOT (INV(x) == 2)"), e));
    CHECK_THROWS_AS(evaluate_value(*parse_formula("INV(x)"), e), UndefinedInvariant);
  }

  TEST_CASE("premise") {
    Formula f = parse_formula("(INV(z) <= 20) IMPLIES (1 == 1)");
    REQUIRE(premise_of(f));
    CHECK(to_string(*premise_of(f)) == "( INV(z) <= 20)");
    CHECK_FALSE(premise_of(parse_formula("x AND y")));
    CHECK_FALSE(premise_of(parse_formula("NOT x")));
    CHECK(variables_of(*f) == std::set<std::string>{"z"});
  }

  TEST_CASE("formula errors") {
    CHECK_THROWS_AS(parse_formula("a < b < c"), ParseError);
    CHECK_THROWS_AS(parse_formula("a != b"), ParseError);
    CHECK_THROWS_AS(parse_formula("a = b"), ParseError);
    CHECK_THROWS_AS(parse_formula("(a AND b"), ParseError);
    CHECK_THROWS_AS(parse_formula("a AND"), ParseError);
    CHECK_THROWS_AS(parse_formula(""), ParseError);
    CHECK_THROWS_AS(parse_formula("INV(3)"), ParseError);
    CHECK_THROWS_AS(parse_formula("frob(2)"), ParseError);
    CHECK_THROWS_AS(parse_formula("max(1)"), ParseError);
    CHECK_THROWS_AS(parse_formula("a $ b"), ParseError);
    CHECK_THROWS_AS(parse_formula(std::string(500, '(') + "a" + std::string(500, ')')), ParseError);
    try {
      parse_formula("a AND\n\n(b OR", 4);
      FAIL("expected a parse error");
    } catch (const ParseError &e) {
      CHECK(e.line() == 6);
    }
  }

  TEST_CASE("file errors name the line") {
    CHECK(error_line("x := ChromaticNumber_AtMost(3)\nFormula\ny\n") == 3);
    CHECK(error_line("x := ChromaticNumber_AtMost(3)\nx\n") == 2);
    CHECK(error_line("x ChromaticNumber_AtMost(3)\nFormula\nx\n") == 1);
    CHECK(error_line("x := ChromaticNumber_AtMost(3\nFormula\nx\n") == 1);
    CHECK(error_line("x := A(1)\nx := B(2)\nFormula\nx\n") == 2);
    CHECK(error_line("AND := A(1)\nFormula\nAND\n") == 1);
    CHECK(error_line("x := A(z)\nFormula\nx\n") == 1);
    CHECK(error_line("x := A(1)\nFormula\n") == 3);
    CHECK(error_line("x := A(1)\nFormula") == 2);
    CHECK(error_line("x := A(1)\n// c\nFormula\n\nx AND\n") >= 5);
  }

  TEST_CASE("instantiation errors point at the binding") {
    PropertySpec s = parse_property("x := ChromaticNumber_AtMost(3)\ny := Nope()\nFormula\nx AND y\n");
    try {
      instantiate_cores(s);
      FAIL("expected a parse error");
    } catch (const ParseError &e) {
      CHECK(e.line() == 2);
    }
    s = parse_property("x := ChromaticNumber_AtMost()\nFormula\nx\n");
    CHECK_THROWS_AS(instantiate_cores(s), ParseError);
    s = parse_property(oracle::read_data("mixed.txt"));
    CHECK(instantiate_cores(s).size() == 2);
  }
}
