#pragma once

#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "deformalg/fockrep.hpp"

namespace deformalg::sym {

// Expression grammar (whitespace-insensitive):
//
//   identity := expr '==' expr
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*       divisors must be scalar
//   unary    := ('-' | '+') unary | power
//   power    := primary ('^' INTEGER)?            INTEGER >= 0
//   primary  := NUMBER | NUMBER 'i' | 'i' | PARAM | SYMBOL
//             | 'K' '(' 'N' (('+' | '-') INTEGER)? ')'
//             | 'comm' '(' expr ',' expr ')'
//             | '(' expr ')'
//   SYMBOL   := 'a' | 'ad' | 'N' | 'x' | 'p' | 'H'
//   PARAM    := 'q' | 'alpha' | 'beta' | 'gamma'
//
// '^' binds tighter than unary minus, so -a^2 is -(a^2). Products are
// left-associative and never commuted. x, p and H are macros for
// (ad + a)/2, (i/2)(ad - a) and x^2 + p^2.

enum class Symbol { A, Ad, N, X, P, H };

class Expr;

struct Scalar {
  std::complex<double> value;
};
struct Param {
  std::string name;
};
struct Atom {
  Symbol symbol;
};
struct KApply {
  int shift;  // K(N + shift)
};
struct Binary {
  enum class Op { Add, Sub, Mul, Div, Comm };
  Op op;
  std::shared_ptr<const Expr> lhs, rhs;
};
struct Negate {
  std::shared_ptr<const Expr> operand;
};
struct Power {
  std::shared_ptr<const Expr> base;
  int exponent;
};

class Expr {
public:
  using Node = std::variant<Scalar, Param, Atom, KApply, Binary, Negate, Power>;

  explicit Expr(Node node) : node_(std::move(node)) {}
  const Node& node() const { return node_; }

private:
  Node node_;
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr make(Expr::Node node);

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

ExprPtr parse_expr(std::string_view text);

struct Identity {
  ExprPtr lhs, rhs;
};

Identity parse_identity(std::string_view text);

/// Canonical text of an expression, fully parenthesized.
std::string to_string(const Expr& e);

/// True when the tree contains no operator symbol or K application.
bool is_scalar(const Expr& e);

using Bindings = std::map<std::string, std::complex<double>>;

/// q, alpha, beta, gamma as present on the case.
Bindings bindings_for(const spectral::SpectralFunction& K);

/// Value of a scalar-only tree. Throws std::invalid_argument for operator
/// content or unbound parameters.
std::complex<double> eval_scalar(const Expr& e, const Bindings& bindings);

/// Upper bound on how far any product in the expansion moves along the
/// ladder: a, ad, x, p count 1, H counts 2, sums take the max, products and
/// commutators add.
int ladder_degree(const Expr& e);

/// Direct matrix realization with the truncated representation: a, ad, N
/// and the quadratures are the truncated matrices, K(N+k) is diagonal.
/// Agrees with the infinite-dimensional operator on rows/cols up to
/// D - 1 - ladder_degree(e).
fock::Matrix realize_direct(const Expr& e, const fock::FockRep& rep,
                            const fock::QuadratureSet& quads,
                            const Bindings& bindings);

}  // namespace deformalg::sym
