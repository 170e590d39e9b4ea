#pragma once

#include <optional>

#include "deformalg/fockrep.hpp"
#include "deformalg/spectral.hpp"

namespace deformalg::gup {

using fock::FockRep;
using fock::QuadratureSet;
using fock::StateVector;

/// Half the modulus of <[x, p]>. For |n> this is (K(n+1) - K(n)) / 4.
double robertson_bound(const StateVector& state, const QuadratureSet& quads);

/// (<K(N)>^2 + <K(N+1)>^2) / 4 taken literally from the diagonal
/// expectations. It is not a valid lower bound: the classical |1> gives 1.25
/// against a product of 0.75. Plausible intended readings are
/// <K(N+1) - K(N)>/4 (which is the Robertson bound) and a square-root form;
/// neither is asserted here.
double k_square_literal_bound(const StateVector& state, const FockRep& rep);

struct KSquareDiagnostic {
  double literal = 0;
  double product = 0;
  bool violated = false;  // product < literal
};

KSquareDiagnostic k_square_diagnostic(const StateVector& state,
                                      const FockRep& rep,
                                      const QuadratureSet& quads);

// Hamiltonian-to-number inversions. Each returns n for an energy h = H(n);
// the *_qpow variants return q^n. Degenerate parameters (q = 1, alpha = 0)
// use the linear continuation n = h - 1/2 (resp. h/beta - 1/2).

/// q^n = 2/(1+q) * (1 - (1-q) h). Throws std::domain_error when the right
/// side is not positive; std::invalid_argument for q <= 0.
double arik_coon_qpow(double q, double h);
double arik_coon_number(double q, double h);

/// q^n = ((q - 1/q) h + sqrt((q - 1/q)^2 h^2 + (q+1)^2/q)) / (1+q), the
/// positive root, evaluated in conjugate form when q < 1.
double macfarlane_qpow(double q, double h);
double macfarlane_number(double q, double h);

/// n = (-(alpha+beta) + sqrt(beta^2 - alpha^2 + 4 alpha h)) / (2 alpha),
/// rationalized to (2h - alpha - beta) / (sqrt(...) + alpha + beta).
/// Throws std::domain_error for a negative radicand.
double nonlinear_number(double alpha, double beta, double h);

/// Dispatches on the case of K (Classical, ArikCoon, MacfarlaneBiedenharn,
/// NonlinearSpectrum); throws std::invalid_argument for the others.
double number_from_energy(const spectral::SpectralFunction& K, double h);

/// x' = sqrt(1+q) x, p' = sqrt(1+q) p, H' = x'^2 + p'^2. On the window
/// [x', p'] = i (1 - (1-q)/(1+q) H').
QuadratureSet kempf_rescale(const QuadratureSet& quads, double q);

enum class Convention { Raw, Rescaled };

struct BoundSpec {
  spectral::CaseId case_id;
  Convention convention = Convention::Raw;
};

/// The bound printed for a case, ArikCoon, MacfarlaneBiedenharn or
/// NonlinearSpectrum; nullopt otherwise.
std::optional<BoundSpec> default_bound(spectral::CaseId id);

/// Right-hand side of the case bound, evaluated literally on `state`:
///   ArikCoon:   (1 - (1-q)(dx^2 + dp^2)) / (4(1+q))
///   Macfarlane: sqrt(q)/(2(1+q)) * (1 + q (q - 1/q)^2 / (2(q+1)^2)
///                 * <x^4 + x^2 p^2 + p^2 x^2 + p^4>)     (raw moments)
///   Nonlinear:  beta/4 * (1 - alpha/beta^2 (dx^2 + dp^2))
/// With Convention::Rescaled (ArikCoon only) the moments come from the
/// Kempf-rescaled quadratures. Throws std::invalid_argument when spec does
/// not match the case of K or Rescaled is requested for another case.
double case_bound(const StateVector& state, const QuadratureSet& quads,
                  const BoundSpec& spec, const spectral::SpectralFunction& K);

struct UncertaintyReport {
  double delta_x = 0, delta_p = 0;
  double product = 0;
  double robertson_bound = 0;
  std::optional<double> case_bound;
  double k_square_literal = 0;
  double margin_robertson = 0;
  std::optional<double> margin_case;
  double margin_literal = 0;
};

/// Everything at once. Under Convention::Rescaled the product, the Robertson
/// bound and the case bound all use the rescaled quadratures.
UncertaintyReport evaluate(const StateVector& state, const FockRep& rep,
                           const QuadratureSet& quads,
                           std::optional<BoundSpec> spec);

}  // namespace deformalg::gup
