#pragma once

#include <vector>

#include "deformalg/fockrep.hpp"

namespace deformalg::verify {

using fock::FockRep;
using fock::IdentityReport;
using fock::Matrix;
using fock::QuadratureSet;

inline constexpr double kExactTol = 1e-14;
inline constexpr double kWindowTol = 1e-10;

/// diag((K(n) + K(n+1)) / 2) for the given K. Taking K separately from the
/// representation lets a wrong K be checked against a correct H.
Matrix hamiltonian_formula(const spectral::SpectralFunction& K, int D);

/// diag(f(H_nn)) using the computed Hamiltonian's diagonal. Only meaningful on
/// the window, where H is diagonal.
Matrix function_of_hamiltonian(const Matrix& H,
                               const std::function<double(double)>& f);

/// Identities that hold on the full truncated matrices:
/// a^dagger a = diag K(n), [N, a^dagger] = a^dagger, [N, a] = -a,
/// a|0> = 0, hermiticity of x, p and N.
std::vector<IdentityReport> exact_checks(const FockRep& rep,
                                         const QuadratureSet& quads,
                                         double tol = kExactTol);

/// Identities every K satisfies on the window: [a, a^dagger], the diagonal
/// Hamiltonian, [x, p], both Lie-Hamilton equations, plus the case's defining
/// commutation relation when it has one.
std::vector<IdentityReport> general_checks(const FockRep& rep,
                                           const QuadratureSet& quads,
                                           int margin, double tol = kWindowTol);

/// Closed forms specific to Classical, ArikCoon, MacfarlaneBiedenharn and
/// NonlinearSpectrum; empty for the other cases. The p-side Lie-Hamilton
/// forms carry the same coefficient on p that the x-side carries on x.
std::vector<IdentityReport> case_checks(const FockRep& rep,
                                        const QuadratureSet& quads, int margin,
                                        double tol = kWindowTol);

/// Case forms in the exact shape they are usually quoted in, several of which
/// are inconsistent with the general Lie-Hamilton equations (sign of the p
/// term, the x coefficient for Macfarlane-Biedenharn, beta for alpha in the
/// nonlinear case). `pass` means the quoted form matches; these do not gate
/// anything.
std::vector<IdentityReport> printed_form_diagnostics(const FockRep& rep,
                                                     const QuadratureSet& quads,
                                                     int margin,
                                                     double tol = kWindowTol);

}  // namespace deformalg::verify
