#include "deformalg/expr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace deformalg::sym {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Token {
  enum class Kind { Number, Imaginary, Ident, Punct, End };
  Kind kind;
  std::string text;
  std::size_t pos;
  bool integral = false;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) {
      ++i_;
    }
    const std::size_t start = i_;
    if (i_ >= src_.size()) return {Token::Kind::End, "", start};
    const char c = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
      return number(start);
    }
    if (is_ident_start(c)) {
      while (i_ < src_.size() && is_ident_char(src_[i_])) ++i_;
      return {Token::Kind::Ident, std::string(src_.substr(start, i_ - start)),
              start};
    }
    if (c == '=' && i_ + 1 < src_.size() && src_[i_ + 1] == '=') {
      i_ += 2;
      return {Token::Kind::Punct, "==", start};
    }
    static constexpr std::string_view kPunct = "+-*/^(),";
    if (kPunct.find(c) != std::string_view::npos) {
      ++i_;
      return {Token::Kind::Punct, std::string(1, c), start};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

private:
  Token number(std::size_t start) {
    bool integral = true;
    auto digits = [&] {
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
        ++i_;
      }
    };
    digits();
    if (i_ < src_.size() && src_[i_] == '.') {
      integral = false;
      ++i_;
      digits();
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
        integral = false;
        i_ = j;
        digits();
      }
    }
    Token tok{Token::Kind::Number, std::string(src_.substr(start, i_ - start)),
              start, integral};
    if (i_ < src_.size() && src_[i_] == 'i' &&
        (i_ + 1 >= src_.size() || !is_ident_char(src_[i_ + 1]))) {
      ++i_;
      tok.kind = Token::Kind::Imaginary;
    }
    return tok;
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  ExprPtr expression() {
    ExprPtr lhs = term();
    while (is_punct("+") || is_punct("-")) {
      const auto op = tok_.text == "+" ? Binary::Op::Add : Binary::Op::Sub;
      advance();
      lhs = make(Binary{op, lhs, term()});
    }
    return lhs;
  }

  bool at_end() const { return tok_.kind == Token::Kind::End; }
  bool is_punct(std::string_view p) const {
    return tok_.kind == Token::Kind::Punct && tok_.text == p;
  }
  const Token& current() const { return tok_; }
  void advance() { tok_ = lexer_.next(); }

  void expect(std::string_view p) {
    if (!is_punct(p)) {
      throw ParseError("expected '" + std::string(p) + "'" + found(), tok_.pos);
    }
    advance();
  }

private:
  std::string found() const {
    if (at_end()) return ", found end of input";
    return ", found '" + tok_.text + "'";
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (is_punct("*") || is_punct("/")) {
      const bool divide = tok_.text == "/";
      const std::size_t pos = tok_.pos;
      advance();
      ExprPtr rhs = unary();
      if (divide && !is_scalar(*rhs)) {
        throw ParseError("divisor must be a scalar", pos);
      }
      lhs = make(Binary{divide ? Binary::Op::Div : Binary::Op::Mul, lhs, rhs});
    }
    return lhs;
  }

  ExprPtr unary() {
    if (is_punct("-")) {
      advance();
      return make(Negate{unary()});
    }
    if (is_punct("+")) {
      advance();
      return unary();
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (is_punct("^")) {
      advance();
      if (tok_.kind != Token::Kind::Number || !tok_.integral) {
        throw ParseError("exponent must be a non-negative integer", tok_.pos);
      }
      const int exponent = std::atoi(tok_.text.c_str());
      advance();
      return make(Power{base, exponent});
    }
    return base;
  }

  int integer_literal(const char* what) {
    if (tok_.kind != Token::Kind::Number || !tok_.integral) {
      throw ParseError(std::string(what), tok_.pos);
    }
    const int v = std::atoi(tok_.text.c_str());
    advance();
    return v;
  }

  ExprPtr k_application() {
    expect("(");
    if (tok_.kind != Token::Kind::Ident || tok_.text != "N") {
      throw ParseError("K takes an argument of the form N+k" + found(), tok_.pos);
    }
    advance();
    int shift = 0;
    if (is_punct("+") || is_punct("-")) {
      const int sign = tok_.text == "+" ? 1 : -1;
      advance();
      shift = sign * integer_literal("non-integer shift inside K");
    }
    expect(")");
    return make(KApply{shift});
  }

  ExprPtr primary() {
    const Token tok = tok_;
    switch (tok.kind) {
      case Token::Kind::Number:
        advance();
        return make(Scalar{std::strtod(tok.text.c_str(), nullptr)});
      case Token::Kind::Imaginary:
        advance();
        return make(Scalar{{0.0, std::strtod(tok.text.c_str(), nullptr)}});
      case Token::Kind::Ident:
        advance();
        return identifier(tok);
      case Token::Kind::Punct:
        if (tok.text == "(") {
          advance();
          ExprPtr inner = expression();
          expect(")");
          return inner;
        }
        break;
      case Token::Kind::End:
        break;
    }
    throw ParseError("expected an operand" + found(), tok.pos);
  }

  ExprPtr identifier(const Token& tok) {
    const std::string& id = tok.text;
    if (id == "a") return make(Atom{Symbol::A});
    if (id == "ad") return make(Atom{Symbol::Ad});
    if (id == "N") return make(Atom{Symbol::N});
    if (id == "x") return make(Atom{Symbol::X});
    if (id == "p") return make(Atom{Symbol::P});
    if (id == "H") return make(Atom{Symbol::H});
    if (id == "i") return make(Scalar{{0.0, 1.0}});
    if (id == "q" || id == "alpha" || id == "beta" || id == "gamma") {
      return make(Param{id});
    }
    if (id == "K") return k_application();
    if (id == "comm") {
      expect("(");
      ExprPtr lhs = expression();
      expect(",");
      ExprPtr rhs = expression();
      expect(")");
      return make(Binary{Binary::Op::Comm, lhs, rhs});
    }
    throw ParseError("unknown identifier '" + id + "'", tok.pos);
  }

  Lexer lexer_;
  Token tok_{Token::Kind::End, "", 0};
};

std::string format_complex(std::complex<double> z) {
  char buf[64];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
  } else if (z.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17gi", z.imag());
  } else {
    std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", z.real(), z.imag());
  }
  return buf;
}

const char* symbol_name(Symbol s) {
  switch (s) {
    case Symbol::A: return "a";
    case Symbol::Ad: return "ad";
    case Symbol::N: return "N";
    case Symbol::X: return "x";
    case Symbol::P: return "p";
    case Symbol::H: return "H";
  }
  return "?";
}

}  // namespace

ExprPtr make(Expr::Node node) { return std::make_shared<const Expr>(std::move(node)); }

ExprPtr parse_expr(std::string_view text) {
  Parser parser(text);
  ExprPtr e = parser.expression();
  if (!parser.at_end()) {
    throw ParseError("unexpected '" + parser.current().text + "'",
                     parser.current().pos);
  }
  return e;
}

Identity parse_identity(std::string_view text) {
  Parser parser(text);
  Identity id;
  id.lhs = parser.expression();
  parser.expect("==");
  id.rhs = parser.expression();
  if (!parser.at_end()) {
    throw ParseError("unexpected '" + parser.current().text + "'",
                     parser.current().pos);
  }
  return id;
}

std::string to_string(const Expr& e) {
  return std::visit(
      Overloaded{
          [](const Scalar& s) { return format_complex(s.value); },
          [](const Param& p) { return p.name; },
          [](const Atom& a) { return std::string(symbol_name(a.symbol)); },
          [](const KApply& k) {
            if (k.shift == 0) return std::string("K(N)");
            return "K(N" + std::string(k.shift > 0 ? "+" : "") +
                   std::to_string(k.shift) + ")";
          },
          [](const Binary& b) {
            const std::string l = to_string(*b.lhs), r = to_string(*b.rhs);
            switch (b.op) {
              case Binary::Op::Add: return "(" + l + " + " + r + ")";
              case Binary::Op::Sub: return "(" + l + " - " + r + ")";
              case Binary::Op::Mul: return "(" + l + " * " + r + ")";
              case Binary::Op::Div: return "(" + l + " / " + r + ")";
              case Binary::Op::Comm: return "comm(" + l + ", " + r + ")";
            }
            return std::string();
          },
          [](const Negate& n) { return "(-" + to_string(*n.operand) + ")"; },
          [](const Power& p) {
            return "(" + to_string(*p.base) + ")^" + std::to_string(p.exponent);
          },
      },
      e.node());
}

bool is_scalar(const Expr& e) {
  return std::visit(
      Overloaded{
          [](const Scalar&) { return true; },
          [](const Param&) { return true; },
          [](const Atom&) { return false; },
          [](const KApply&) { return false; },
          [](const Binary& b) { return is_scalar(*b.lhs) && is_scalar(*b.rhs); },
          [](const Negate& n) { return is_scalar(*n.operand); },
          [](const Power& p) { return is_scalar(*p.base); },
      },
      e.node());
}

Bindings bindings_for(const spectral::SpectralFunction& K) {
  Bindings b;
  const auto& p = K.params();
  if (p.q) b["q"] = *p.q;
  if (p.alpha) b["alpha"] = *p.alpha;
  if (p.beta) b["beta"] = *p.beta;
  if (p.gamma) b["gamma"] = *p.gamma;
  return b;
}

std::complex<double> eval_scalar(const Expr& e, const Bindings& bindings) {
  using C = std::complex<double>;
  return std::visit(
      Overloaded{
          [](const Scalar& s) { return s.value; },
          [&](const Param& p) -> C {
            const auto it = bindings.find(p.name);
            if (it == bindings.end()) {
              throw std::invalid_argument("parameter '" + p.name + "' is not bound");
            }
            return it->second;
          },
          [](const Atom&) -> C {
            throw std::invalid_argument("eval_scalar: operator symbol");
          },
          [](const KApply&) -> C {
            throw std::invalid_argument("eval_scalar: K application");
          },
          [&](const Binary& b) -> C {
            const C l = eval_scalar(*b.lhs, bindings);
            const C r = eval_scalar(*b.rhs, bindings);
            switch (b.op) {
              case Binary::Op::Add: return l + r;
              case Binary::Op::Sub: return l - r;
              case Binary::Op::Mul: return l * r;
              case Binary::Op::Div: return l / r;
              case Binary::Op::Comm: return 0.0;
            }
            return 0.0;
          },
          [&](const Negate& n) { return -eval_scalar(*n.operand, bindings); },
          [&](const Power& p) {
            return std::pow(eval_scalar(*p.base, bindings), p.exponent);
          },
      },
      e.node());
}

int ladder_degree(const Expr& e) {
  return std::visit(
      Overloaded{
          [](const Scalar&) { return 0; },
          [](const Param&) { return 0; },
          [](const Atom& a) {
            switch (a.symbol) {
              case Symbol::N: return 0;
              case Symbol::H: return 2;
              default: return 1;
            }
          },
          [](const KApply&) { return 0; },
          [](const Binary& b) {
            const int l = ladder_degree(*b.lhs), r = ladder_degree(*b.rhs);
            switch (b.op) {
              case Binary::Op::Add:
              case Binary::Op::Sub: return std::max(l, r);
              case Binary::Op::Div: return l;
              default: return l + r;
            }
          },
          [](const Negate& n) { return ladder_degree(*n.operand); },
          [](const Power& p) { return p.exponent * ladder_degree(*p.base); },
      },
      e.node());
}

fock::Matrix realize_direct(const Expr& e, const fock::FockRep& rep,
                            const fock::QuadratureSet& quads,
                            const Bindings& bindings) {
  using fock::Matrix;
  const int D = rep.dim();
  const Matrix I = Matrix::Identity(D, D);
  auto recurse = [&](const ExprPtr& sub) {
    return realize_direct(*sub, rep, quads, bindings);
  };
  return std::visit(
      Overloaded{
          [&](const Scalar& s) -> Matrix { return s.value * I; },
          [&](const Param&) -> Matrix { return eval_scalar(e, bindings) * I; },
          [&](const Atom& a) -> Matrix {
            switch (a.symbol) {
              case Symbol::A: return rep.a();
              case Symbol::Ad: return rep.ad();
              case Symbol::N: return rep.N();
              case Symbol::X: return quads.x;
              case Symbol::P: return quads.p;
              case Symbol::H: return quads.H;
            }
            return I;
          },
          [&](const KApply& k) -> Matrix { return fock::k_shift(rep, k.shift); },
          [&](const Binary& b) -> Matrix {
            if (b.op == Binary::Op::Div) {
              return recurse(b.lhs) / eval_scalar(*b.rhs, bindings);
            }
            const Matrix l = recurse(b.lhs), r = recurse(b.rhs);
            switch (b.op) {
              case Binary::Op::Add: return l + r;
              case Binary::Op::Sub: return l - r;
              case Binary::Op::Mul: return l * r;
              case Binary::Op::Comm: return fock::commutator(l, r);
              default: return l;
            }
          },
          [&](const Negate& n) -> Matrix { return -recurse(n.operand); },
          [&](const Power& p) -> Matrix {
            const Matrix base = recurse(p.base);
            Matrix out = I;
            for (int k = 0; k < p.exponent; ++k) out = out * base;
            return out;
          },
      },
      e.node());
}

}  // namespace deformalg::sym
