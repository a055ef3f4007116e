#include "thinfilm_gl/field_spec.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "thinfilm_gl/error.hpp"

namespace tfgl {

namespace {

enum class Op { kConst, kX1, kX2, kR, kRef, kNeg, kAdd, kSub, kMul, kDiv, kPow,
                kLn, kSqrt, kAbs, kParaboloid, kCircleConcentration };

}  // namespace

struct FieldSpec::Node {
  Op op = Op::kConst;
  double c = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const FieldSpec::Node>;
using Sample = FieldSpec::Sample;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double c = 0.0) {
  auto n = std::make_shared<FieldSpec::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->c = c;
  return n;
}

Sample eval(const FieldSpec::Node& n, Vec2 p) {
  switch (n.op) {
    case Op::kConst: return {n.c, {}};
    case Op::kX1: return {p.x, {1.0, 0.0}};
    case Op::kX2: return {p.y, {0.0, 1.0}};
    case Op::kR: {
      const double r = norm(p);
      if (r == 0.0) return {0.0, {}};
      return {r, {p.x / r, p.y / r}};
    }
    case Op::kRef: return eval(*n.a, p);
    case Op::kNeg: {
      Sample s = eval(*n.a, p);
      return {-s.value, -1.0 * s.grad};
    }
    case Op::kAdd: {
      Sample s = eval(*n.a, p), t = eval(*n.b, p);
      return {s.value + t.value, s.grad + t.grad};
    }
    case Op::kSub: {
      Sample s = eval(*n.a, p), t = eval(*n.b, p);
      return {s.value - t.value, s.grad - t.grad};
    }
    case Op::kMul: {
      Sample s = eval(*n.a, p), t = eval(*n.b, p);
      return {s.value * t.value, t.value * s.grad + s.value * t.grad};
    }
    case Op::kDiv: {
      Sample s = eval(*n.a, p), t = eval(*n.b, p);
      const double q = s.value / t.value;
      return {q, (1.0 / t.value) * (s.grad - q * t.grad)};
    }
    case Op::kPow: {
      Sample s = eval(*n.a, p), t = eval(*n.b, p);
      const double v = std::pow(s.value, t.value);
      Vec2 g{};
      if (s.value != 0.0 || t.value >= 1.0)
        g = t.value * std::pow(s.value, t.value - 1.0) * s.grad;
      if (t.grad.x != 0.0 || t.grad.y != 0.0)
        g += v * std::log(s.value) * t.grad;
      return {v, g};
    }
    case Op::kLn: {
      Sample s = eval(*n.a, p);
      return {std::log(s.value), (1.0 / s.value) * s.grad};
    }
    case Op::kSqrt: {
      Sample s = eval(*n.a, p);
      const double v = std::sqrt(s.value);
      return {v, v > 0.0 ? (0.5 / v) * s.grad : Vec2{}};
    }
    case Op::kAbs: {
      Sample s = eval(*n.a, p);
      const double sg = s.value > 0.0 ? 1.0 : (s.value < 0.0 ? -1.0 : 0.0);
      return {std::abs(s.value), sg * s.grad};
    }
    case Op::kParaboloid: return {0.5 * norm2(p), p};
    case Op::kCircleConcentration: return circle_concentration_profile(p);
  }
  return {};
}

class Parser {
 public:
  Parser(std::string_view text, NodePtr f_root)
      : s_(text), f_root_(std::move(f_root)) {}

  NodePtr run() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::kParseError, "field spec '" + std::string(s_) +
                                     "': " + msg + " at column " +
                                     std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+')) n = make(Op::kAdd, n, term());
      else if (eat('-')) n = make(Op::kSub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Op::kMul, n, unary());
      else if (eat('/')) n = make(Op::kDiv, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Op::kNeg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Op::kPow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) error("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    error(std::string("unexpected character '") + c + "'");
  }
  NodePtr number() {
    const std::string rest(s_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      error("malformed number");
    }
    pos_ += used;
    return make(Op::kConst, nullptr, nullptr, v);
  }
  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string id(s_.substr(start, pos_ - start));
    constexpr std::string_view kSuffix = "-concentration";
    if (id == "circle" && s_.substr(pos_, kSuffix.size()) == kSuffix) {
      pos_ += kSuffix.size();
      id += kSuffix;
    }
    if (id == "x1") return make(Op::kX1);
    if (id == "x2") return make(Op::kX2);
    if (id == "r") return make(Op::kR);
    if (id == "pi") return make(Op::kConst, nullptr, nullptr, std::numbers::pi);
    if (id == "flat") return make(Op::kConst, nullptr, nullptr, 0.0);
    if (id == "paraboloid") return make(Op::kParaboloid);
    if (id == "circle-concentration") return make(Op::kCircleConcentration);
    if (id == "f") {
      if (!f_root_) {
        pos_ = start;
        error("'f' may only appear in a g-spec");
      }
      return make(Op::kRef, f_root_);
    }
    Op fn;
    if (id == "ln") fn = Op::kLn;
    else if (id == "sqrt") fn = Op::kSqrt;
    else if (id == "abs") fn = Op::kAbs;
    else {
      pos_ = start;
      error("unknown identifier '" + id + "'");
    }
    if (!eat('(')) error("expected '(' after " + id);
    NodePtr arg = expr();
    if (!eat(')')) error("expected ')'");
    return make(fn, arg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  NodePtr f_root_;
};

}  // namespace

Sample circle_concentration_profile(Vec2 p) {
  const double r = norm(p);
  const double ax = std::abs(p.x);
  if (ax < 1e-12) {
    // x1^2 ln(...) vanishes quadratically on the singular set.
    return {0.5 * r * p.y, {0.0, r}};
  }
  // ln((r + x2) / |x1|) == asinh(x2 / |x1|), which avoids the cancellation in
  // r + x2 for x2 < 0.
  const double L = std::asinh(p.y / ax);
  return {0.5 * r * p.y + 0.5 * p.x * p.x * L, {p.x * L, r}};
}

FieldSpec FieldSpec::parse(std::string_view text, const FieldSpec* f_reference) {
  NodePtr f_root = f_reference ? f_reference->root_ : nullptr;
  Parser parser(text, f_root);
  return FieldSpec(std::string(text), parser.run());
}

FieldSpec FieldSpec::constant(double c) {
  return FieldSpec(std::to_string(c), make(Op::kConst, nullptr, nullptr, c));
}

FieldSpec::Sample FieldSpec::sample(Vec2 p) const { return eval(*root_, p); }

}  // namespace tfgl
