#pragma once

// Arithmetic expressions for user-defined distributions.
//
//   expr    := ['+'|'-'] term { ('+'|'-') term }
//   term    := factor { ('*'|'/') factor }
//   factor  := '-' factor | power
//   power   := primary [ '**' factor ]          (right-associative)
//   primary := number | ident | ident '(' expr {',' expr} ')' | '(' expr ')'
//
// A leading sign applies to the whole term, so "-mu*time**alpha" is
// -(mu * (time ** alpha)). Functions: exp, log, sqrt, abs, pow.

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parmsurv::expr {

struct Expr {
  enum class Op { Number, Ident, Neg, Add, Sub, Mul, Div, Pow, Call };
  Op op = Op::Number;
  double value = 0.0;
  std::string name;  // identifier or function name
  std::vector<Expr> args;
  int slot = -1;  // resolved environment index, set by bind()

  bool operator==(const Expr& o) const {
    return op == o.op && value == o.value && name == o.name && args == o.args;
  }
};

Expr parse(std::string_view source);

// Fully parenthesized rendering; parse(to_string(e)) == e.
std::string to_string(const Expr& e);

std::set<std::string> free_identifiers(const Expr& e);

// Evaluates with named bindings. Throws InputError for unbound identifiers and
// DomainError (naming the offending subexpression) for log/sqrt of invalid
// arguments, division by zero, or non-finite results.
double evaluate(const Expr& e, const std::map<std::string, double>& bindings);

// Resolves identifiers to indices into `symbols`; throws InputError for
// names not present.
Expr bind(Expr e, const std::vector<std::string>& symbols);
double evaluate_bound(const Expr& e, std::span<const double> env);

struct Assignment {
  std::string name;
  Expr value;
};

// "mu=exp(-beta); k = 2*mu;", semicolon-separated, trailing ';' optional.
std::vector<Assignment> parse_prep(std::string_view source);

}  // namespace parmsurv::expr
