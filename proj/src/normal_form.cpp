#include "deformalg/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace deformalg::sym {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using SpectralPtr = std::shared_ptr<const spectral::SpectralFunction>;

void accumulate(std::map<CoefficientFunction::Monomial, Complex>& into,
                const CoefficientFunction::Monomial& m, Complex c) {
  auto [it, inserted] = into.try_emplace(m, c);
  if (!inserted) it->second += c;
  if (it->second == Complex(0.0)) into.erase(it);
}

std::string format_number(Complex z) {
  char buf[80];
  z += Complex(0.0, 0.0);  // -0 prints as 0
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
  } else {
    std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", z.real(), z.imag());
  }
  return buf;
}

std::string format_factor(const Factor& f) {
  std::string arg = "N";
  if (f.shift != 0) arg += (f.shift > 0 ? "+" : "") + std::to_string(f.shift);
  return f.kind == Factor::Kind::K ? "K(" + arg + ")" : "(" + arg + ")";
}

// One canonical term c(N) L^d while a product is being reduced.
struct Term {
  CoefficientFunction coeff;
  int d;
};

class Rewriter {
public:
  Rewriter(SpectralPtr K, const Bindings& bindings, RewriteStats* stats)
      : K_(std::move(K)), bindings_(bindings), stats_(stats) {}

  NormalForm order(const Expr& e) {
    return std::visit(
        Overloaded{
            [&](const Scalar& s) { return constant(s.value); },
            [&](const Param&) { return constant(eval_scalar(e, bindings_)); },
            [&](const Atom& a) { return atom(a.symbol); },
            [&](const KApply& k) {
              return diagonal(CoefficientFunction::factor(
                  K_, {Factor::Kind::K, k.shift}));
            },
            [&](const Binary& b) { return binary(b); },
            [&](const Negate& n) { return order(*n.operand).scaled(-1.0); },
            [&](const Power& p) {
              const NormalForm base = order(*p.base);
              NormalForm out = constant(1.0);
              for (int k = 0; k < p.exponent; ++k) out = multiply(out, base);
              return out;
            },
        },
        e.node());
  }

private:
  NormalForm constant(Complex c) const {
    return diagonal(CoefficientFunction::constant(K_, c));
  }

  NormalForm diagonal(const CoefficientFunction& c) const {
    NormalForm nf(K_);
    nf.add(0, c);
    return nf;
  }

  NormalForm ladder(int d) const {
    NormalForm nf(K_);
    nf.add(d, CoefficientFunction::constant(K_, 1.0));
    return nf;
  }

  NormalForm atom(Symbol s) {
    const Complex half_i(0.0, 0.5);
    switch (s) {
      case Symbol::A: return ladder(-1);
      case Symbol::Ad: return ladder(1);
      case Symbol::N:
        return diagonal(CoefficientFunction::factor(K_, {Factor::Kind::Number, 0}));
      case Symbol::X: return (ladder(1) + ladder(-1)).scaled(0.5);
      case Symbol::P: return (ladder(1) + ladder(-1).scaled(-1.0)).scaled(half_i);
      case Symbol::H: {
        const NormalForm x = atom(Symbol::X), p = atom(Symbol::P);
        return multiply(x, x) + multiply(p, p);
      }
    }
    return constant(0.0);
  }

  NormalForm binary(const Binary& b) {
    switch (b.op) {
      case Binary::Op::Add: return order(*b.lhs) + order(*b.rhs);
      case Binary::Op::Sub: return order(*b.lhs) + order(*b.rhs).scaled(-1.0);
      case Binary::Op::Div:
        return order(*b.lhs).scaled(1.0 / eval_scalar(*b.rhs, bindings_));
      case Binary::Op::Mul: return multiply(order(*b.lhs), order(*b.rhs));
      case Binary::Op::Comm: {
        const NormalForm l = order(*b.lhs), r = order(*b.rhs);
        return multiply(l, r) + multiply(r, l).scaled(-1.0);
      }
    }
    return constant(0.0);
  }

  void step() {
    if (stats_) ++stats_->steps;
  }

  // c(N) L^d * f(N) -> c(N) f(N - d) L^d
  Term times_diagonal(Term t, const CoefficientFunction& f) {
    step();
    t.coeff = t.coeff * f.shifted(-t.d);
    return t;
  }

  Term times_raising(Term t) {
    step();
    if (t.d < 0) {
      const int m = -t.d;
      t.coeff = t.coeff * CoefficientFunction::factor(K_, {Factor::Kind::K, m});
    }
    ++t.d;
    return t;
  }

  Term times_lowering(Term t) {
    step();
    if (t.d > 0) {
      const int m = t.d;
      t.coeff =
          t.coeff * CoefficientFunction::factor(K_, {Factor::Kind::K, 1 - m});
    }
    --t.d;
    return t;
  }

  NormalForm multiply(const NormalForm& lhs, const NormalForm& rhs) {
    NormalForm out(K_);
    for (const auto& [d, c] : lhs.terms()) {
      for (const auto& [e, f] : rhs.terms()) {
        Term t = times_diagonal({c, d}, f);
        for (int k = 0; k < std::abs(e); ++k) {
          t = e > 0 ? times_raising(std::move(t)) : times_lowering(std::move(t));
        }
        out.add(t.d, t.coeff);
      }
    }
    return out;
  }

  SpectralPtr K_;
  const Bindings& bindings_;
  RewriteStats* stats_;
};

}  // namespace

CoefficientFunction CoefficientFunction::constant(SpectralPtr K, Complex c) {
  CoefficientFunction f(std::move(K));
  if (c != Complex(0.0)) f.terms_.emplace(Monomial{}, c);
  return f;
}

CoefficientFunction CoefficientFunction::factor(SpectralPtr K, Factor fac) {
  CoefficientFunction f(std::move(K));
  f.terms_.emplace(Monomial{fac}, 1.0);
  return f;
}

double CoefficientFunction::factor_value(const Factor& f, long n) const {
  const double arg = static_cast<double>(n + f.shift);
  return f.kind == Factor::Kind::Number ? arg : (*K_)(arg);
}

Complex CoefficientFunction::operator()(long n) const {
  Complex sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double prod = 1.0;
    for (const Factor& f : m) prod *= factor_value(f, n);
    sum += c * prod;
  }
  return sum;
}

double CoefficientFunction::magnitude(long n) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double prod = 1.0;
    for (const Factor& f : m) prod *= factor_value(f, n);
    sum += std::abs(c * prod);
  }
  return sum;
}

CoefficientFunction CoefficientFunction::shifted(int k) const {
  if (k == 0) return *this;
  CoefficientFunction out(K_);
  for (const auto& [m, c] : terms_) {
    Monomial moved = m;
    for (Factor& f : moved) f.shift += k;
    accumulate(out.terms_, moved, c);
  }
  return out;
}

CoefficientFunction CoefficientFunction::scaled(Complex s) const {
  CoefficientFunction out(K_);
  if (s == Complex(0.0)) return out;
  for (const auto& [m, c] : terms_) accumulate(out.terms_, m, c * s);
  return out;
}

CoefficientFunction CoefficientFunction::operator+(
    const CoefficientFunction& other) const {
  CoefficientFunction out = *this;
  if (!out.K_) out.K_ = other.K_;
  for (const auto& [m, c] : other.terms_) accumulate(out.terms_, m, c);
  return out;
}

CoefficientFunction CoefficientFunction::operator*(
    const CoefficientFunction& other) const {
  CoefficientFunction out(K_ ? K_ : other.K_);
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : other.terms_) {
      Monomial m;
      m.reserve(m1.size() + m2.size());
      std::merge(m1.begin(), m1.end(), m2.begin(), m2.end(),
                 std::back_inserter(m));
      accumulate(out.terms_, m, c1 * c2);
    }
  }
  return out;
}

std::string CoefficientFunction::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += format_number(c);
    for (const Factor& f : m) out += "*" + format_factor(f);
  }
  return out;
}

void NormalForm::add(int d, const CoefficientFunction& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(d);
  if (it == terms_.end()) {
    terms_.emplace(d, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

NormalForm NormalForm::operator+(const NormalForm& other) const {
  NormalForm out = *this;
  for (const auto& [d, c] : other.terms_) out.add(d, c);
  return out;
}

NormalForm NormalForm::scaled(Complex s) const {
  NormalForm out(K_);
  for (const auto& [d, c] : terms_) out.add(d, c.scaled(s));
  return out;
}

std::string NormalForm::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [d, c] : terms_) {
    if (!out.empty()) out += " ; ";
    std::string ladder = d == 0 ? "1" : d > 0 ? "ad^" + std::to_string(d)
                                              : "a^" + std::to_string(-d);
    out += "[" + ladder + "] " + c.to_string();
  }
  return out;
}

NormalForm normal_order(const Expr& e, const spectral::SpectralFunction& K,
                        RewriteStats* stats) {
  return normal_order(e, K, bindings_for(K), stats);
}

NormalForm normal_order(const Expr& e, const spectral::SpectralFunction& K,
                        const Bindings& bindings, RewriteStats* stats) {
  auto shared = std::make_shared<const spectral::SpectralFunction>(K);
  Rewriter rewriter(shared, bindings, stats);
  return rewriter.order(e);
}

fock::IdentityReport nf_equal(const NormalForm& lhs, const NormalForm& rhs,
                              int n_max, double tol) {
  if (n_max < 8) throw std::invalid_argument("nf_equal: n_max must be >= 8");
  fock::IdentityReport report;
  report.name = "nf_equal";
  report.window = n_max + 1;
  report.tol = tol;
  const CoefficientFunction none;
  auto coefficient = [&](const NormalForm& nf, int d) -> const CoefficientFunction& {
    const auto it = nf.terms().find(d);
    return it == nf.terms().end() ? none : it->second;
  };
  std::vector<int> support;
  for (const auto& [d, c] : lhs.terms()) support.push_back(d);
  for (const auto& [d, c] : rhs.terms()) support.push_back(d);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  for (int d : support) {
    const auto& cl = coefficient(lhs, d);
    const auto& cr = coefficient(rhs, d);
    for (int n = std::max(0, d); n <= n_max; ++n) {
      const Complex vl = cl.is_zero() ? Complex(0.0) : cl(n);
      const Complex vr = cr.is_zero() ? Complex(0.0) : cr(n);
      const double ml = cl.is_zero() ? 0.0 : cl.magnitude(n);
      const double mr = cr.is_zero() ? 0.0 : cr.magnitude(n);
      const double dev = std::abs(vl - vr);
      report.max_abs_residual = std::max(report.max_abs_residual, dev);
      report.residual =
          std::max(report.residual, dev / std::max({1.0, ml, mr}));
    }
  }
  report.pass = report.residual <= tol;
  return report;
}

fock::Matrix nf_to_matrix(const NormalForm& nf, int D) {
  if (D < fock::kMinDim) throw std::invalid_argument("nf_to_matrix: D < 4");
  const auto& K = nf.K();
  auto root = [&](int level) {
    const double k = K(level);
    if (k < 0.0) {
      throw std::invalid_argument("nf_to_matrix: K(" + std::to_string(level) +
                                  ") is negative");
    }
    return std::sqrt(k);
  };
  fock::Matrix M = fock::Matrix::Zero(D, D);
  for (const auto& [d, c] : nf.terms()) {
    const int m = std::abs(d);
    for (int col = 0; col < D; ++col) {
      const int row = col + d;
      if (row < 0 || row >= D) continue;
      double weight = 1.0;
      for (int j = 0; j < m; ++j) {
        weight *= d > 0 ? root(col + 1 + j) : root(col - j);
      }
      M(row, col) += c(row) * weight;
    }
  }
  return M;
}

std::string builtin_identity(const std::string& name) {
  if (name == "comm_xp") return "comm(x,p) == (i/2)*(K(N+1)-K(N))";
  if (name == "lh_x") {
    return "comm(x,H) == (1/4)*(K(N+2)-K(N)-K(N+1)+K(N-1))*x"
           " + (i/4)*(K(N+2)-K(N)+K(N+1)-K(N-1))*p";
  }
  if (name == "lh_p") {
    return "comm(p,H) == (1/4)*(K(N+2)-K(N)-K(N+1)+K(N-1))*p"
           " - (i/4)*(K(N+2)-K(N)+K(N+1)-K(N-1))*x";
  }
  if (name == "hamiltonian") return "H == (1/2)*(K(N)+K(N+1))";
  if (name == "comm_a_ad") return "comm(a,ad) == K(N+1)-K(N)";
  return {};
}

}  // namespace deformalg::sym
