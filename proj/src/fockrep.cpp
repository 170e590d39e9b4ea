#include "deformalg/fockrep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace deformalg::fock {

using spectral::CaseId;
using spectral::SpectralFunction;

FockRep build_rep(const SpectralFunction& K, int D) {
  if (D < kMinDim) {
    throw std::invalid_argument("build_rep: dimension must be >= 4, got " +
                                std::to_string(D));
  }
  FockRep rep(K, D);
  rep.a_ = Matrix::Zero(D, D);
  rep.N_ = Matrix::Zero(D, D);
  for (int n = 0; n < D; ++n) {
    rep.N_(n, n) = static_cast<double>(n);
    if (n == 0) continue;
    const double k = K(n);
    if (!(k >= 0.0)) {
      throw std::invalid_argument("build_rep: K(" + std::to_string(n) +
                                  ") = " + std::to_string(k) + " is negative");
    }
    if (K.id() == CaseId::Custom && !(k > 0.0)) {
      throw std::invalid_argument("build_rep: custom K(" + std::to_string(n) +
                                  ") must be positive");
    }
    rep.a_(n - 1, n) = std::sqrt(k);
  }
  rep.ad_ = rep.a_.adjoint();
  return rep;
}

QuadratureSet quadratures(const FockRep& rep) {
  const Complex half_i(0.0, 0.5);
  QuadratureSet quads;
  quads.x = 0.5 * (rep.ad() + rep.a());
  quads.p = half_i * (rep.ad() - rep.a());
  quads.H = quads.x * quads.x + quads.p * quads.p;
  return quads;
}

Matrix commutator(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw std::invalid_argument("commutator: shape mismatch");
  }
  return A * B - B * A;
}

Matrix diag_function(int D, const std::function<Complex(int)>& f) {
  Matrix M = Matrix::Zero(D, D);
  for (int n = 0; n < D; ++n) M(n, n) = f(n);
  return M;
}

Matrix k_shift(const FockRep& rep, int shift) {
  const auto& K = rep.K();
  return diag_function(rep.dim(), [&](int n) { return Complex(K(n + shift)); });
}

Matrix lie_hamilton_rhs(const FockRep& rep, const QuadratureSet& quads,
                        Side side, std::optional<double> bottom_extension) {
  const auto& K = rep.K();
  auto below = [&](int n) {
    return (n == 0 && bottom_extension) ? *bottom_extension : K(n - 1.0);
  };
  const Matrix A = diag_function(rep.dim(), [&](int n) {
    return Complex(0.25 * (K(n + 2.0) - K(n) - K(n + 1.0) + below(n)));
  });
  const Matrix B = diag_function(rep.dim(), [&](int n) {
    return Complex(0.0, 0.25 * (K(n + 2.0) - K(n) + K(n + 1.0) - below(n)));
  });
  if (side == Side::X) return A * quads.x + B * quads.p;
  return A * quads.p - B * quads.x;
}

IdentityReport verify_window(const Matrix& A, const Matrix& B, int margin,
                             double tol, std::string name) {
  if (A.rows() != B.rows() || A.cols() != B.cols() || A.rows() != A.cols()) {
    throw std::invalid_argument("verify_window: shape mismatch");
  }
  const int D = static_cast<int>(A.rows());
  if (margin < 0 || margin >= D) {
    throw std::invalid_argument("verify_window: empty window (margin " +
                                std::to_string(margin) + ", dim " +
                                std::to_string(D) + ")");
  }
  const int w = D - margin;
  const Eigen::MatrixXd absA = A.topLeftCorner(w, w).cwiseAbs();
  const Eigen::MatrixXd absB = B.topLeftCorner(w, w).cwiseAbs();
  const Eigen::VectorXd row_scale =
      absA.rowwise().maxCoeff().cwiseMax(absB.rowwise().maxCoeff());
  const Eigen::VectorXd col_scale =
      absA.colwise().maxCoeff().cwiseMax(absB.colwise().maxCoeff()).transpose();

  IdentityReport report;
  report.name = std::move(name);
  report.window = w;
  report.tol = tol;
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < w; ++r) {
      const double dev = std::abs(A(r, c) - B(r, c));
      const double scale = std::max({1.0, row_scale(r), col_scale(c)});
      report.max_abs_residual = std::max(report.max_abs_residual, dev);
      report.residual = std::max(report.residual, dev / scale);
    }
  }
  report.pass = report.residual <= tol;
  return report;
}

StateVector::StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  const double norm = amplitudes_.norm();
  if (amplitudes_.size() == 0 || !(norm > 0.0)) {
    throw std::invalid_argument("StateVector: zero vector cannot be normalized");
  }
  amplitudes_ /= norm;
}

StateVector number_state(int D, int n) {
  if (n < 0 || n >= D) {
    throw std::out_of_range("number_state: level " + std::to_string(n) +
                            " outside 0.." + std::to_string(D - 1));
  }
  Vector v = Vector::Zero(D);
  v(n) = 1.0;
  return StateVector(std::move(v));
}

namespace {

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

}  // namespace

StateVector random_state(int D, std::uint64_t seed) {
  if (D < 1) throw std::invalid_argument("random_state: empty dimension");
  SplitMix64 rng(seed);
  Vector v(D);
  for (int k = 0; k < D; ++k) {
    const double u1 = 1.0 - rng.uniform();  // (0, 1]
    const double u2 = rng.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    v(k) = Complex(radius * std::cos(angle), radius * std::sin(angle));
  }
  return StateVector(std::move(v));
}

StateVector truncation_safe(const StateVector& state, int margin) {
  if (margin < 0 || margin >= state.dim()) {
    throw std::invalid_argument("truncation_safe: margin outside [0, D)");
  }
  Vector v = state.amplitudes();
  v.tail(margin).setZero();
  return StateVector(std::move(v));
}

Complex expectation(const StateVector& state, const Matrix& M) {
  if (M.rows() != state.dim() || M.cols() != state.dim()) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  const Vector& psi = state.amplitudes();
  return psi.dot(M * psi);  // dot conjugates the left operand
}

UncertaintyMoments uncertainty_product(const StateVector& state,
                                       const QuadratureSet& quads) {
  UncertaintyMoments m;
  m.mean_x = expectation(state, quads.x).real();
  m.mean_p = expectation(state, quads.p).real();
  const double x2 = expectation(state, quads.x * quads.x).real();
  const double p2 = expectation(state, quads.p * quads.p).real();
  m.delta_x = std::sqrt(std::max(0.0, x2 - m.mean_x * m.mean_x));
  m.delta_p = std::sqrt(std::max(0.0, p2 - m.mean_p * m.mean_p));
  m.product = m.delta_x * m.delta_p;
  m.xp_commutator = expectation(state, commutator(quads.x, quads.p));
  return m;
}

}  // namespace deformalg::fock
