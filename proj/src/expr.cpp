#include "geoweb/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <utility>

#include "geoweb/errors.hpp"

namespace geoweb {
namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_unary(NodeKind kind, NodePtr child) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(child);
  return n;
}

bool lookup_function(std::string_view name, Analytic& out) {
  static constexpr std::pair<std::string_view, Analytic> kTable[] = {
      {"exp", Analytic::exp},   {"log", Analytic::log},   {"sqrt", Analytic::sqrt},
      {"sin", Analytic::sin},   {"cos", Analytic::cos},   {"tan", Analytic::tan},
      {"sinh", Analytic::sinh}, {"cosh", Analytic::cosh}, {"tanh", Analytic::tanh}};
  for (const auto& [n, fn] : kTable) {
    if (n == name) {
      out = fn;
      return true;
    }
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == text_.size()) fail("empty expression");
    NodePtr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(NodeKind::negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(NodeKind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ == text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // "2e" reads as 2 followed by the constant e
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(value)) {
      pos_ = start;
      fail("malformed number");
    }
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::number;
    n->number = value;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = text_.substr(start, pos_ - start);
    auto n = std::make_shared<Node>();
    if (id == "x" || id == "y") {
      n->kind = NodeKind::variable;
      n->variable = id[0];
      return n;
    }
    if (id == "pi" || id == "e") {
      n->kind = NodeKind::constant;
      n->name = std::string(id);
      n->number = id == "pi" ? std::numbers::pi : std::numbers::e;
      return n;
    }
    Analytic fn;
    if (!lookup_function(id, fn)) {
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    if (!accept('(')) fail("expected '(' after " + std::string(id));
    NodePtr arg = expr();
    if (!accept(')')) fail("expected ')'");
    n->kind = NodeKind::call;
    n->name = std::string(id);
    n->fn = fn;
    n->lhs = std::move(arg);
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool has_variables(const Node& n) {
  switch (n.kind) {
    case NodeKind::variable: return true;
    case NodeKind::number:
    case NodeKind::constant: return false;
    case NodeKind::negate:
    case NodeKind::call: return has_variables(*n.lhs);
    default: return has_variables(*n.lhs) || has_variables(*n.rhs);
  }
}

std::string where(const Node& n, double x, double y) {
  std::ostringstream os;
  os.precision(17);
  os << "in " << print(n) << " at (" << x << ", " << y << ")";
  return os.str();
}

// Scalar evaluation in double or long double.
template <typename T>
T eval_scalar(const Node& n, T x, T y) {
  auto domain = [&](const char* what) {
    throw EvalDomainError(std::string(what) + " " +
                          where(n, static_cast<double>(x), static_cast<double>(y)));
  };
  switch (n.kind) {
    case NodeKind::number:
    case NodeKind::constant:
      if (n.kind == NodeKind::constant && n.name == "pi") return std::numbers::pi_v<T>;
      if (n.kind == NodeKind::constant) return std::numbers::e_v<T>;
      return static_cast<T>(n.number);
    case NodeKind::variable: return n.variable == 'x' ? x : y;
    case NodeKind::negate: return -eval_scalar(*n.lhs, x, y);
    case NodeKind::add: return eval_scalar(*n.lhs, x, y) + eval_scalar(*n.rhs, x, y);
    case NodeKind::sub: return eval_scalar(*n.lhs, x, y) - eval_scalar(*n.rhs, x, y);
    case NodeKind::mul: return eval_scalar(*n.lhs, x, y) * eval_scalar(*n.rhs, x, y);
    case NodeKind::div: {
      const T den = eval_scalar(*n.rhs, x, y);
      if (std::abs(den) < T(1e-300)) domain("division by zero");
      return eval_scalar(*n.lhs, x, y) / den;
    }
    case NodeKind::pow: {
      const T base = eval_scalar(*n.lhs, x, y);
      const T ex = eval_scalar(*n.rhs, x, y);
      const bool integral = !has_variables(*n.rhs) && std::nearbyint(ex) == ex;
      if (!integral && base <= 0) domain("real power of a non-positive base");
      if (integral && base == 0 && ex < 0) domain("negative power of zero");
      return std::pow(base, ex);
    }
    case NodeKind::call: {
      const T a = eval_scalar(*n.lhs, x, y);
      switch (n.fn) {
        case Analytic::exp: return std::exp(a);
        case Analytic::log:
          if (a <= 0) domain("log of non-positive value");
          return std::log(a);
        case Analytic::sqrt:
          if (a < 0) domain("sqrt of negative value");
          return std::sqrt(a);
        case Analytic::sin: return std::sin(a);
        case Analytic::cos: return std::cos(a);
        case Analytic::tan: return std::tan(a);
        case Analytic::sinh: return std::sinh(a);
        case Analytic::cosh: return std::cosh(a);
        case Analytic::tanh: return std::tanh(a);
        default: break;
      }
      break;
    }
    default: break;
  }
  domain("unsupported node");
  return T(0);
}

struct JetContext {
  Point p;
  int degree;
  Jet2 x;
  Jet2 y;
};

Jet2 eval_jet_node(const Node& n, const JetContext& ctx) {
  try {
    switch (n.kind) {
      case NodeKind::number:
      case NodeKind::constant: return Jet2::constant(n.number, ctx.p, ctx.degree);
      case NodeKind::variable: return n.variable == 'x' ? ctx.x : ctx.y;
      case NodeKind::negate: return -eval_jet_node(*n.lhs, ctx);
      case NodeKind::add: return eval_jet_node(*n.lhs, ctx) + eval_jet_node(*n.rhs, ctx);
      case NodeKind::sub: return eval_jet_node(*n.lhs, ctx) - eval_jet_node(*n.rhs, ctx);
      case NodeKind::mul: return eval_jet_node(*n.lhs, ctx) * eval_jet_node(*n.rhs, ctx);
      case NodeKind::div: {
        const Jet2 den = eval_jet_node(*n.rhs, ctx);
        if (std::abs(den.value()) < 1e-300) throw EvalDomainError("division by zero");
        return eval_jet_node(*n.lhs, ctx) / den;
      }
      case NodeKind::pow: {
        const Jet2 base = eval_jet_node(*n.lhs, ctx);
        if (!has_variables(*n.rhs)) {
          const double r = eval_scalar<double>(*n.rhs, ctx.p.x, ctx.p.y);
          return compose_analytic({Analytic::pow, r}, base);
        }
        if (base.value() <= 0.0) throw EvalDomainError("real power of a non-positive base");
        return exp(eval_jet_node(*n.rhs, ctx) * log(base));
      }
      case NodeKind::call: return compose_analytic({n.fn}, eval_jet_node(*n.lhs, ctx));
    }
  } catch (const EvalDomainError& e) {
    const std::string msg = e.what();
    if (msg.find(" in ") != std::string::npos) throw;  // already located by a deeper node
    throw EvalDomainError(msg + " " + where(n, ctx.p.x, ctx.p.y));
  } catch (const DivisionByZeroJet& e) {
    throw EvalDomainError(std::string(e.what()) + " " + where(n, ctx.p.x, ctx.p.y));
  }
  throw EvalDomainError("unsupported node " + where(n, ctx.p.x, ctx.p.y));
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

std::string print(const Node& n) {
  auto bin = [&](const char* op) { return "(" + print(*n.lhs) + " " + op + " " + print(*n.rhs) + ")"; };
  switch (n.kind) {
    case NodeKind::number: return format_number(n.number);
    case NodeKind::variable: return std::string(1, n.variable);
    case NodeKind::constant: return n.name;
    case NodeKind::negate: return "(-" + print(*n.lhs) + ")";
    case NodeKind::add: return bin("+");
    case NodeKind::sub: return bin("-");
    case NodeKind::mul: return bin("*");
    case NodeKind::div: return bin("/");
    case NodeKind::pow: return bin("^");
    case NodeKind::call: return n.name + "(" + print(*n.lhs) + ")";
  }
  return "?";
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::number: return a.number == b.number;
    case NodeKind::variable: return a.variable == b.variable;
    case NodeKind::constant: return a.name == b.name;
    case NodeKind::negate: return structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::call: return a.fn == b.fn && structurally_equal(*a.lhs, *b.lhs);
    default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

std::string Expression::print() const { return geoweb::print(*root_); }

bool Expression::depends_on_variables() const { return has_variables(*root_); }

Jet2 Expression::eval_jet(Point p, int degree) const {
  auto [x, y] = variable_jets(p, degree);
  return eval_jet_node(*root_, JetContext{p, degree, x, y});
}

double Expression::eval(double x, double y) const { return eval_scalar<double>(*root_, x, y); }

long double Expression::eval(long double x, long double y) const {
  return eval_scalar<long double>(*root_, x, y);
}

bool operator==(const Expression& a, const Expression& b) {
  return structurally_equal(*a.root_, *b.root_);
}

}  // namespace geoweb
