#ifndef UCRISK_EXPR_HPP
#define UCRISK_EXPR_HPP

// A tiny total expression language for payoffs:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | atom
//   atom   := number | var | call | '(' expr ')'
//   var    := 'x' | 'b' digit+ ('[' digit+ ']')?
//   call   := ('min' | 'max') '(' expr ',' expr ')' | ('abs' | 'exp' | 'log') '(' expr ')'
//
// `x` is the real point of an outcome, `bi` the terminal value of path
// coordinate i (1-based) and `bi[k]` its value at step k (b[0] = 0).

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ucrisk/error.hpp"
#include "ucrisk/gexp.hpp"
#include "ucrisk/scenario.hpp"

namespace ucrisk {

class Expression {
public:
  static Expression parse(const std::string& text) {
    Parser p{text};
    auto root = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
    return Expression(text, std::move(root));
  }

  const std::string& text() const noexcept { return text_; }

  double eval_path(const PathView& path) const { return check(eval(*root_, {&path, std::nullopt})); }
  double eval_point(double x) const { return check(eval(*root_, {nullptr, x})); }
  double operator()(const PathView& path) const { return eval_path(path); }

  /// Evaluates on every outcome of a real- or path-embedded space.
  Payoff on(const SpacePtr& space) const {
    std::vector<double> v(space->size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      try {
        switch (space->embedding()) {
          case EmbeddingKind::Real: v[i] = eval_point(space->point(i)); break;
          case EmbeddingKind::Path: v[i] = eval_path(PathView(space->path(i))); break;
          default: throw ValidationError("expression payoff needs embedded outcomes");
        }
      } catch (const ValidationError& e) {
        throw ValidationError(std::string(e.what()) + " at outcome '" + space->id(i) + "'");
      }
    }
    return Payoff(space, std::move(v));
  }

private:
  enum class Op { Num, X, B, Neg, Add, Sub, Mul, Div, Min, Max, Abs, Exp, Log };

  struct Node {
    Op op;
    double value = 0.0;
    std::size_t dim = 0;
    std::optional<std::size_t> step;
    std::unique_ptr<Node> a, b;
  };
  using NodePtr = std::unique_ptr<Node>;

  struct Ctx {
    const PathView* path;
    std::optional<double> x;
  };

  struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
      throw ValidationError("expression error at column " + std::to_string(pos + 1) + ": " + msg);
    }
    void skip_ws() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool accept(char c) {
      skip_ws();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    void expect(char c) {
      if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    static NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
      auto n = std::make_unique<Node>();
      n->op = op;
      n->a = std::move(a);
      n->b = std::move(b);
      return n;
    }

    NodePtr expr() {
      auto lhs = term();
      while (true) {
        if (accept('+')) lhs = make(Op::Add, std::move(lhs), term());
        else if (accept('-')) lhs = make(Op::Sub, std::move(lhs), term());
        else return lhs;
      }
    }
    NodePtr term() {
      auto lhs = unary();
      while (true) {
        if (accept('*')) lhs = make(Op::Mul, std::move(lhs), unary());
        else if (accept('/')) lhs = make(Op::Div, std::move(lhs), unary());
        else return lhs;
      }
    }
    NodePtr unary() {
      if (accept('-')) return make(Op::Neg, unary());
      return atom();
    }
    std::size_t integer() {
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) fail("expected an integer");
      return std::stoul(s.substr(start, pos - start));
    }
    NodePtr atom() {
      skip_ws();
      if (pos >= s.size()) fail("unexpected end of expression");
      char c = s[pos];
      if (c == '(') {
        ++pos;
        auto e = expr();
        expect(')');
        return e;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const char* begin = s.c_str() + pos;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("bad number");
        pos += static_cast<std::size_t>(end - begin);
        auto n = make(Op::Num);
        n->value = v;
        return n;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
        std::string name = s.substr(start, pos - start);
        if (name == "x") return make(Op::X);
        if (name == "b") {
          auto n = make(Op::B);
          std::size_t dim = integer();
          if (dim == 0) fail("path coordinates are numbered from 1");
          n->dim = dim - 1;
          if (accept('[')) {
            skip_ws();
            n->step = integer();
            expect(']');
          }
          return n;
        }
        Op op;
        int arity = 1;
        if (name == "min") op = Op::Min, arity = 2;
        else if (name == "max") op = Op::Max, arity = 2;
        else if (name == "abs") op = Op::Abs;
        else if (name == "exp") op = Op::Exp;
        else if (name == "log") op = Op::Log;
        else fail("unknown identifier '" + name + "'");
        expect('(');
        auto a = expr();
        NodePtr b;
        if (arity == 2) {
          expect(',');
          b = expr();
        }
        expect(')');
        return make(op, std::move(a), std::move(b));
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }
  };

  Expression(std::string text, NodePtr root) : text_(std::move(text)), root_(std::move(root)) {}

  static double check(double v) {
    if (!std::isfinite(v)) throw ValidationError("expression value is not finite");
    return v;
  }

  static double eval(const Node& n, const Ctx& ctx) {
    switch (n.op) {
      case Op::Num: return n.value;
      case Op::X:
        if (!ctx.x) throw ValidationError("variable x needs real-embedded outcomes");
        return *ctx.x;
      case Op::B: {
        if (!ctx.path) throw ValidationError("path variables need path-embedded outcomes");
        if (n.dim >= ctx.path->dims) throw ValidationError("path coordinate out of range");
        std::size_t k = n.step.value_or(ctx.path->steps);
        if (k > ctx.path->steps) throw ValidationError("path step out of range");
        return ctx.path->at(k, n.dim);
      }
      case Op::Neg: return -eval(*n.a, ctx);
      case Op::Add: return eval(*n.a, ctx) + eval(*n.b, ctx);
      case Op::Sub: return eval(*n.a, ctx) - eval(*n.b, ctx);
      case Op::Mul: return eval(*n.a, ctx) * eval(*n.b, ctx);
      case Op::Div: {
        double den = eval(*n.b, ctx);
        if (den == 0.0) throw ValidationError("division by zero");
        return eval(*n.a, ctx) / den;
      }
      case Op::Min: return std::min(eval(*n.a, ctx), eval(*n.b, ctx));
      case Op::Max: return std::max(eval(*n.a, ctx), eval(*n.b, ctx));
      case Op::Abs: return std::abs(eval(*n.a, ctx));
      case Op::Exp: return check(std::exp(eval(*n.a, ctx)));
      case Op::Log: {
        double v = eval(*n.a, ctx);
        if (!(v > 0.0)) throw ValidationError("log of a non-positive value");
        return std::log(v);
      }
    }
    return 0.0;
  }

  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace ucrisk

#endif  // UCRISK_EXPR_HPP
