#include "parmsurv/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "parmsurv/errors.hpp"

namespace parmsurv::expr {

namespace {

int arity(const std::string& fn) {
  if (fn == "exp" || fn == "log" || fn == "sqrt" || fn == "abs") return 1;
  if (fn == "pow") return 2;
  return -1;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    Expr e = expression();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool peek_pow() {
    skip_ws();
    return pos_ + 1 < src_.size() && src_[pos_] == '*' && src_[pos_ + 1] == '*';
  }
  void expect(char c) {
    if (!peek(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  static Expr binary(Expr::Op op, Expr lhs, Expr rhs) {
    Expr e;
    e.op = op;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
  }
  static Expr negate(Expr x) {
    Expr e;
    e.op = Expr::Op::Neg;
    e.args.push_back(std::move(x));
    return e;
  }

  Expr expression() {
    Expr lhs;
    if (peek('-')) {
      ++pos_;
      lhs = negate(term());
    } else {
      if (peek('+')) ++pos_;
      lhs = term();
    }
    while (true) {
      if (peek('+')) {
        ++pos_;
        lhs = binary(Expr::Op::Add, std::move(lhs), term());
      } else if (peek('-')) {
        ++pos_;
        lhs = binary(Expr::Op::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    while (true) {
      if (peek('*') && !peek_pow()) {
        ++pos_;
        lhs = binary(Expr::Op::Mul, std::move(lhs), factor());
      } else if (peek('/')) {
        ++pos_;
        lhs = binary(Expr::Op::Div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    if (peek('-')) {
      ++pos_;
      return negate(factor());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek_pow()) {
      pos_ += 2;
      return binary(Expr::Op::Pow, std::move(base), factor());
    }
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      Expr e = expression();
      if (!peek(')')) throw ParseError("unmatched '('", open);
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    Expr e;
    e.op = Expr::Op::Number;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, e.value);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return e;
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (!peek('(')) {
      Expr e;
      e.op = Expr::Op::Ident;
      e.name = std::move(name);
      return e;
    }
    const int n = arity(name);
    if (n < 0) throw ParseError("unknown function '" + name + "'", start);
    const std::size_t open = pos_;
    ++pos_;
    Expr e;
    e.op = Expr::Op::Call;
    e.name = name;
    e.args.push_back(expression());
    while (peek(',')) {
      ++pos_;
      e.args.push_back(expression());
    }
    if (!peek(')')) throw ParseError("unmatched '('", open);
    ++pos_;
    if (static_cast<int>(e.args.size()) != n)
      throw ParseError("function '" + name + "' takes " + std::to_string(n) + " argument(s)", start);
    return e;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string render_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

void collect(const Expr& e, std::set<std::string>& out) {
  if (e.op == Expr::Op::Ident) out.insert(e.name);
  for (const auto& a : e.args) collect(a, out);
}

template <typename Lookup>
double eval(const Expr& e, const Lookup& lookup) {
  auto fail = [&](const std::string& what) {
    throw DomainError(what + " in '" + to_string(e) + "'");
  };
  switch (e.op) {
    case Expr::Op::Number: return e.value;
    case Expr::Op::Ident: return lookup(e);
    case Expr::Op::Neg: return -eval(e.args[0], lookup);
    case Expr::Op::Add: return eval(e.args[0], lookup) + eval(e.args[1], lookup);
    case Expr::Op::Sub: return eval(e.args[0], lookup) - eval(e.args[1], lookup);
    case Expr::Op::Mul: return eval(e.args[0], lookup) * eval(e.args[1], lookup);
    case Expr::Op::Div: {
      const double num = eval(e.args[0], lookup);
      const double den = eval(e.args[1], lookup);
      if (den == 0) fail("division by zero");
      return num / den;
    }
    case Expr::Op::Pow: {
      const double r = std::pow(eval(e.args[0], lookup), eval(e.args[1], lookup));
      if (!std::isfinite(r)) fail("invalid power");
      return r;
    }
    case Expr::Op::Call: {
      const double x = eval(e.args[0], lookup);
      if (e.name == "exp") {
        const double r = std::exp(x);
        if (!std::isfinite(r)) fail("overflow");
        return r;
      }
      if (e.name == "log") {
        if (!(x > 0)) fail("log of nonpositive argument");
        return std::log(x);
      }
      if (e.name == "sqrt") {
        if (!(x >= 0)) fail("sqrt of negative argument");
        return std::sqrt(x);
      }
      if (e.name == "abs") return std::fabs(x);
      if (e.name == "pow") {
        const double r = std::pow(x, eval(e.args[1], lookup));
        if (!std::isfinite(r)) fail("invalid power");
        return r;
      }
      fail("unknown function");
    }
  }
  return 0.0;
}

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

std::string to_string(const Expr& e) {
  switch (e.op) {
    case Expr::Op::Number: return render_number(e.value);
    case Expr::Op::Ident: return e.name;
    case Expr::Op::Neg: return "(-" + to_string(e.args[0]) + ")";
    case Expr::Op::Add: return "(" + to_string(e.args[0]) + " + " + to_string(e.args[1]) + ")";
    case Expr::Op::Sub: return "(" + to_string(e.args[0]) + " - " + to_string(e.args[1]) + ")";
    case Expr::Op::Mul: return "(" + to_string(e.args[0]) + "*" + to_string(e.args[1]) + ")";
    case Expr::Op::Div: return "(" + to_string(e.args[0]) + "/" + to_string(e.args[1]) + ")";
    case Expr::Op::Pow: return "(" + to_string(e.args[0]) + "**" + to_string(e.args[1]) + ")";
    case Expr::Op::Call: {
      std::string s = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + to_string(e.args[i]);
      return s + ")";
    }
  }
  return "";
}

std::set<std::string> free_identifiers(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

double evaluate(const Expr& e, const std::map<std::string, double>& bindings) {
  return eval(e, [&](const Expr& id) {
    auto it = bindings.find(id.name);
    if (it == bindings.end()) throw InputError("unbound identifier '" + id.name + "'");
    return it->second;
  });
}

Expr bind(Expr e, const std::vector<std::string>& symbols) {
  if (e.op == Expr::Op::Ident) {
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i] == e.name) e.slot = static_cast<int>(i);
    if (e.slot < 0) throw InputError("unknown identifier '" + e.name + "'");
  }
  for (auto& a : e.args) a = bind(std::move(a), symbols);
  return e;
}

double evaluate_bound(const Expr& e, std::span<const double> env) {
  return eval(e, [&](const Expr& id) { return env[static_cast<std::size_t>(id.slot)]; });
}

std::vector<Assignment> parse_prep(std::string_view source) {
  std::vector<Assignment> out;
  std::size_t start = 0;
  while (start < source.size()) {
    auto end = source.find(';', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view stmt = source.substr(start, end - start);
    const auto first = stmt.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos) {
      const auto eq = stmt.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'name = expression'", start + first);
      std::string_view lhs = stmt.substr(0, eq);
      const auto b = lhs.find_first_not_of(" \t\r\n");
      const auto e = lhs.find_last_not_of(" \t\r\n");
      if (b == std::string_view::npos) throw ParseError("missing assignment target", start);
      std::string name(lhs.substr(b, e - b + 1));
      bool ok = std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_';
      for (char c : name) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
      if (!ok) throw ParseError("invalid assignment target '" + name + "'", start + b);
      try {
        out.push_back({name, parse(stmt.substr(eq + 1))});
      } catch (const ParseError& pe) {
        throw ParseError(std::string("in statement for '") + name + "': " + pe.what(), start + eq + 1);
      }
    }
    start = end + 1;
  }
  return out;
}

}  // namespace parmsurv::expr
