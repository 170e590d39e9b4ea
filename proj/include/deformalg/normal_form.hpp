#pragma once

#include <compare>
#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "deformalg/expr.hpp"
#include "deformalg/fockrep.hpp"
#include "deformalg/spectral.hpp"

namespace deformalg::sym {

using Complex = std::complex<double>;

/// A primitive diagonal function: N + shift or K(N + shift).
struct Factor {
  enum class Kind { Number, K };
  Kind kind;
  int shift;

  auto operator<=>(const Factor&) const = default;
};

/// Function of the level n, kept as a sum of monomials c * prod f_i(n + k_i).
/// Closed under sum, product, scaling and shifts n -> n + k. Like monomials
/// are merged, and exact zeros dropped, after every operation; no further
/// algebra is attempted, so equality is decided by evaluation.
class CoefficientFunction {
public:
  using Monomial = std::vector<Factor>;  // sorted

  CoefficientFunction() = default;
  explicit CoefficientFunction(std::shared_ptr<const spectral::SpectralFunction> K)
      : K_(std::move(K)) {}

  static CoefficientFunction constant(
      std::shared_ptr<const spectral::SpectralFunction> K, Complex c);
  static CoefficientFunction factor(
      std::shared_ptr<const spectral::SpectralFunction> K, Factor f);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Complex>& terms() const { return terms_; }

  Complex operator()(long n) const;
  /// Sum of |monomial(n)|: the magnitude the value was cancelled from.
  double magnitude(long n) const;

  CoefficientFunction shifted(int k) const;
  CoefficientFunction scaled(Complex c) const;
  CoefficientFunction operator+(const CoefficientFunction& other) const;
  CoefficientFunction operator*(const CoefficientFunction& other) const;

  std::string to_string() const;

private:
  double factor_value(const Factor& f, long n) const;

  std::shared_ptr<const spectral::SpectralFunction> K_;
  std::map<Monomial, Complex> terms_;
};

/// sum_d c_d(N) L^d with L^d = (a^dagger)^d for d > 0 and a^|d| for d < 0.
/// Coefficients stand to the left of the ladder power.
class NormalForm {
public:
  explicit NormalForm(std::shared_ptr<const spectral::SpectralFunction> K)
      : K_(std::move(K)) {}

  const spectral::SpectralFunction& K() const { return *K_; }
  const std::shared_ptr<const spectral::SpectralFunction>& K_ptr() const {
    return K_;
  }
  const std::map<int, CoefficientFunction>& terms() const { return terms_; }

  /// Adds c(N) L^d.
  void add(int d, const CoefficientFunction& c);

  NormalForm operator+(const NormalForm& other) const;
  NormalForm scaled(Complex c) const;

  std::string to_string() const;

private:
  std::shared_ptr<const spectral::SpectralFunction> K_;
  std::map<int, CoefficientFunction> terms_;
};

struct RewriteStats {
  long steps = 0;  // rule applications
};

/// Normal-orders e with respect to K. Macros are expanded first; products are
/// then built left to right, each step multiplying one canonical term
/// c(N) L^d on the right by a single letter:
///
///   c(N) L^d * f(N)   -> c(N) f(N - d) L^d          (a f(N) = f(N+1) a)
///   c(N) a^m * ad     -> c(N) K(N + m) a^(m-1)       (a ad = K(N+1))
///   c(N) ad^m * a     -> c(N) K(N - m + 1) ad^(m-1)  (ad a = K(N))
///   otherwise         -> c(N) L^(d +- 1)
///
/// Every word reduces to a single term. Appending a letter costs one diagonal
/// step plus one ladder step if the letter is a or ad, so a word of length L
/// with l ladder letters after the first takes (L - 1) + l steps: the measure
/// (letters left to append, pending ladder step) decreases lexicographically
/// and evaluation terminates. Parameters are taken
/// from `bindings`, which default to the case parameters of K. Throws
/// std::invalid_argument for an unbound parameter.
NormalForm normal_order(const Expr& e, const spectral::SpectralFunction& K,
                        RewriteStats* stats = nullptr);
NormalForm normal_order(const Expr& e, const spectral::SpectralFunction& K,
                        const Bindings& bindings, RewriteStats* stats = nullptr);

/// Compares the coefficient of every ladder power on n = 0..n_max. For d > 0
/// the levels n < d are skipped: there the coefficient multiplies
/// (a^dagger)^d|n - d>, which does not exist. A deviation passes when it is
/// within tol * max(1, magnitude of either side). Throws
/// std::invalid_argument for n_max < 8.
fock::IdentityReport nf_equal(const NormalForm& lhs, const NormalForm& rhs,
                              int n_max = 24, double tol = 1e-12);

/// Matrix of the normal form in the D-level representation, with the same
/// sqrt(K) matrix elements as build_rep. Throws std::invalid_argument for
/// D < 4 or a negative K under a square root.
fock::Matrix nf_to_matrix(const NormalForm& nf, int D);

/// Built-in identities: "comm_xp", "lh_x", "lh_p", "hamiltonian",
/// "comm_a_ad". Returns the identity text, or an empty string.
std::string builtin_identity(const std::string& name);

}  // namespace deformalg::sym
