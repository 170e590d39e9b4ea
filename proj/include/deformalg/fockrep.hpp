#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "deformalg/spectral.hpp"

namespace deformalg::fock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kDefaultDim = 32;
inline constexpr int kDefaultMargin = 3;
inline constexpr int kMinDim = 4;

/// Truncated Fock representation on |0>, ..., |D-1>:
///   a |n> = sqrt(K(n)) |n-1>,  a^dagger |n> = sqrt(K(n+1)) |n+1>.
/// a^dagger is the conjugate transpose of a, so a^dagger a = diag(K(n)) holds
/// at every level; a a^dagger loses K(D) on the last level.
class FockRep {
public:
  const spectral::SpectralFunction& K() const { return K_; }
  int dim() const { return dim_; }
  const Matrix& a() const { return a_; }
  const Matrix& ad() const { return ad_; }
  const Matrix& N() const { return N_; }

private:
  friend FockRep build_rep(const spectral::SpectralFunction&, int);
  FockRep(spectral::SpectralFunction K, int dim) : K_(std::move(K)), dim_(dim) {}

  spectral::SpectralFunction K_;
  int dim_;
  Matrix a_, ad_, N_;
};

/// Throws std::invalid_argument for D < 4, K(n) < 0 for some n < D, or a
/// Custom K that is not strictly positive on 1..D-1.
FockRep build_rep(const spectral::SpectralFunction& K, int D);

/// x = (a^dagger + a)/2, p = i(a^dagger - a)/2, H = x^2 + p^2.
/// H is the matrix product, not the diagonal formula.
struct QuadratureSet {
  Matrix x, p, H;
};

QuadratureSet quadratures(const FockRep& rep);

/// AB - BA. Throws std::invalid_argument on a shape mismatch.
Matrix commutator(const Matrix& A, const Matrix& B);

/// diag(f(0), ..., f(D-1)).
Matrix diag_function(int D, const std::function<Complex(int)>& f);

/// diag(K(n + shift)).
Matrix k_shift(const FockRep& rep, int shift);

enum class Side { X, P };

/// Right-hand side of the Lie-Hamilton equations:
///   [x,H] = A(N)/4 x + i B(N)/4 p,   [p,H] = A(N)/4 p - i B(N)/4 x,
///   A = K(N+2) - K(N) - K(N+1) + K(N-1),  B = K(N+2) - K(N) + K(N+1) - K(N-1).
/// K(-1) comes from the closed form unless bottom_extension overrides it; the
/// value drops out on the truncation window.
Matrix lie_hamilton_rhs(const FockRep& rep, const QuadratureSet& quads,
                        Side side,
                        std::optional<double> bottom_extension = std::nullopt);

struct IdentityReport {
  std::string name;
  int window = 0;              // rows/cols compared: 0..window-1
  double max_abs_residual = 0; // max |A - B| on the window
  double residual = 0;         // max |A - B| / local scale, see verify_window
  double tol = 0;
  bool pass = false;
};

/// Compares A and B on rows/cols 0..D-1-margin. margin = 0 compares the full
/// matrices. Each entry's deviation is divided by
///   max(1, largest |entry| of A or B in the same row or column of the window)
/// so checks are absolute for O(1) spectra and relative when K(n) grows
/// geometrically. pass <=> residual <= tol.
/// Throws std::invalid_argument on shape mismatch or margin outside [0, D).
IdentityReport verify_window(const Matrix& A, const Matrix& B, int margin,
                             double tol, std::string name = {});

/// Unit-norm amplitude vector in the truncated number basis.
class StateVector {
public:
  /// Normalizes; throws std::invalid_argument for a zero or empty vector.
  explicit StateVector(Vector amplitudes);

  const Vector& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }

private:
  Vector amplitudes_;
};

StateVector number_state(int D, int n);

/// Complex Gaussian amplitudes, normalized. The stream is splitmix64 seeded
/// with `seed`; each pair of draws (u1, u2) -> Box-Muller (z0, z1) gives
/// amplitude k = z0 + i z1, for k = 0..D-1 in order. u = (x >> 11) * 2^-53,
/// and u1 is mapped to 1 - u1 so the logarithm never sees 0.
StateVector random_state(int D, std::uint64_t seed);

/// Zeroes the top `margin` amplitudes and renormalizes.
StateVector truncation_safe(const StateVector& state, int margin);

Complex expectation(const StateVector& state, const Matrix& M);

struct UncertaintyMoments {
  double mean_x = 0, mean_p = 0;
  double delta_x = 0, delta_p = 0;
  double product = 0;
  Complex xp_commutator{};  // <[x, p]>
};

/// Exact for states whose top three amplitudes vanish; not enforced.
UncertaintyMoments uncertainty_product(const StateVector& state,
                                       const QuadratureSet& quads);

}  // namespace deformalg::fock
