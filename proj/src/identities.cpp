#include "deformalg/identities.hpp"

#include <cmath>

#include "deformalg/gup.hpp"

namespace deformalg::verify {

using fock::Complex;
using fock::commutator;
using fock::diag_function;
using fock::verify_window;
using spectral::CaseId;

namespace {

const Complex kI(0.0, 1.0);

Matrix identity(int D) { return Matrix::Identity(D, D); }

Matrix real_diag(int D, const std::function<double(int)>& f) {
  return diag_function(D, [&](int n) { return Complex(f(n)); });
}

}  // namespace

Matrix hamiltonian_formula(const spectral::SpectralFunction& K, int D) {
  return real_diag(D, [&](int n) { return 0.5 * (K(n) + K(n + 1.0)); });
}

Matrix function_of_hamiltonian(const Matrix& H,
                               const std::function<double(double)>& f) {
  const int D = static_cast<int>(H.rows());
  return real_diag(D, [&](int n) { return f(H(n, n).real()); });
}

std::vector<IdentityReport> exact_checks(const FockRep& rep,
                                         const QuadratureSet& quads,
                                         double tol) {
  const int D = rep.dim();
  const auto& K = rep.K();
  std::vector<IdentityReport> out;
  out.push_back(verify_window(rep.ad() * rep.a(),
                              real_diag(D, [&](int n) { return K(n); }), 0, tol,
                              "number_operator_product"));
  out.push_back(verify_window(commutator(rep.N(), rep.ad()), rep.ad(), 0, tol,
                              "number_raising_commutator"));
  out.push_back(verify_window(commutator(rep.N(), rep.a()), -rep.a(), 0, tol,
                              "number_lowering_commutator"));
  Matrix vacuum_column = Matrix::Zero(D, D);
  vacuum_column.col(0) = rep.a().col(0);
  out.push_back(verify_window(vacuum_column, Matrix::Zero(D, D), 0, 0.0,
                              "vacuum_annihilated"));
  out.push_back(verify_window(quads.x, quads.x.adjoint(), 0, tol,
                              "position_hermitian"));
  out.push_back(verify_window(quads.p, quads.p.adjoint(), 0, tol,
                              "momentum_hermitian"));
  out.push_back(
      verify_window(rep.N(), rep.N().adjoint(), 0, tol, "number_hermitian"));
  return out;
}

std::vector<IdentityReport> general_checks(const FockRep& rep,
                                           const QuadratureSet& quads,
                                           int margin, double tol) {
  const int D = rep.dim();
  const auto& K = rep.K();
  const Matrix delta = real_diag(D, [&](int n) { return K(n + 1.0) - K(n); });
  std::vector<IdentityReport> out;
  out.push_back(verify_window(commutator(rep.a(), rep.ad()), delta, margin, tol,
                              "ladder_commutator"));
  out.push_back(verify_window(quads.H, hamiltonian_formula(K, D), margin, tol,
                              "hamiltonian_diagonal"));
  out.push_back(verify_window(commutator(quads.x, quads.p), 0.5 * kI * delta,
                              margin, tol, "xp_commutator"));
  out.push_back(verify_window(commutator(quads.x, quads.H),
                              fock::lie_hamilton_rhs(rep, quads, fock::Side::X),
                              margin, tol, "lie_hamilton_x"));
  out.push_back(verify_window(commutator(quads.p, quads.H),
                              fock::lie_hamilton_rhs(rep, quads, fock::Side::P),
                              margin, tol, "lie_hamilton_p"));
  if (const auto rel = spectral::catalog_relation(K)) {
    const Matrix g = real_diag(D, [&](int n) { return rel->g(n); });
    out.push_back(verify_window(rep.a() * rep.ad(), rel->s * (rep.ad() * rep.a()) + g,
                                margin, tol, "defining_relation"));
  }
  return out;
}

std::vector<IdentityReport> case_checks(const FockRep& rep,
                                        const QuadratureSet& quads, int margin,
                                        double tol) {
  const int D = rep.dim();
  const auto& p = rep.K().params();
  const Matrix& x = quads.x;
  const Matrix& mp = quads.p;
  const Matrix& H = quads.H;
  const Matrix xp = commutator(x, mp);
  const Matrix xH = commutator(x, H);
  const Matrix pH = commutator(mp, H);
  std::vector<IdentityReport> out;

  switch (rep.K().id()) {
    case CaseId::Classical:
      out.push_back(verify_window(xp, 0.5 * kI * identity(D), margin, tol,
                                  "xp_commutator_constant"));
      out.push_back(verify_window(xH, kI * mp, margin, tol,
                                  "lie_hamilton_x_classical"));
      out.push_back(verify_window(pH, -kI * x, margin, tol,
                                  "lie_hamilton_p_classical"));
      out.push_back(verify_window(H, rep.N() + 0.5 * identity(D), margin, tol,
                                  "hamiltonian_number_plus_half"));
      break;

    case CaseId::ArikCoon: {
      const double q = *p.q;
      const Matrix qN = real_diag(D, [&](int n) { return std::pow(q, n); });
      const Matrix cx = real_diag(
          D, [&](int n) { return -0.25 * (1 - q * q) * std::pow(q, n - 1); });
      const Matrix cp = real_diag(D, [&](int n) {
        return 0.25 * (1 + q) * (1 + q) * std::pow(q, n - 1);
      });
      out.push_back(verify_window(xH, cx * x + kI * cp * mp, margin, tol,
                                  "lie_hamilton_x_q_power"));
      out.push_back(verify_window(pH, cx * mp - kI * cp * x, margin, tol,
                                  "lie_hamilton_p_q_power"));
      out.push_back(verify_window(xp, 0.5 * kI * qN, margin, tol,
                                  "xp_commutator_q_power"));
      const Matrix shrink =
          function_of_hamiltonian(H, [&](double h) { return 1 - (1 - q) * h; });
      out.push_back(verify_window(qN, 2.0 / (1 + q) * shrink, margin, tol,
                                  "number_from_hamiltonian"));
      out.push_back(verify_window(xp, kI / (1 + q) * shrink, margin, tol,
                                  "xp_commutator_hamiltonian"));
      const QuadratureSet kempf = gup::kempf_rescale(quads, q);
      const Matrix kempf_rhs =
          kI * (identity(D) - (1 - q) / (1 + q) * kempf.H);
      out.push_back(verify_window(commutator(kempf.x, kempf.p), kempf_rhs,
                                  margin, tol, "kempf_rescaled_commutator"));
      const Matrix sx = 0.5 * (1 - 1 / q) * shrink;
      const Matrix sp = 0.5 * (1 + 1 / q) * shrink;
      out.push_back(verify_window(xH, sx * x + kI * sp * mp, margin, tol,
                                  "lie_hamilton_x_hamiltonian"));
      out.push_back(verify_window(pH, sx * mp - kI * sp * x, margin, tol,
                                  "lie_hamilton_p_hamiltonian"));
      break;
    }

    case CaseId::MacfarlaneBiedenharn: {
      const double q = *p.q;
      const double c = q - 1 / q;
      const auto root = [&](double h) {
        return std::sqrt(c * c * h * h + (q + 1) * (q + 1) / q);
      };
      const Matrix R = function_of_hamiltonian(H, root);
      const Matrix qN = real_diag(D, [&](int n) { return std::pow(q, n); });
      out.push_back(verify_window(
          qN,
          function_of_hamiltonian(
              H, [&](double h) { return gup::macfarlane_qpow(q, h); }),
          margin, tol, "number_from_hamiltonian"));
      out.push_back(verify_window(xp, kI * q / ((1 + q) * (1 + q)) * R, margin,
                                  tol, "xp_commutator_hamiltonian"));
      const Matrix cH = (q - 1) * c / (2 * (1 + q)) * H;
      out.push_back(verify_window(xH, cH * x + 0.5 * kI * R * mp, margin, tol,
                                  "lie_hamilton_x_hamiltonian"));
      out.push_back(verify_window(pH, cH * mp - 0.5 * kI * R * x, margin, tol,
                                  "lie_hamilton_p_hamiltonian"));
      break;
    }

    case CaseId::NonlinearSpectrum: {
      const double alpha = *p.alpha, beta = *p.beta;
      const Matrix S = function_of_hamiltonian(H, [&](double h) {
        return std::sqrt(beta * beta - alpha * alpha + 4 * alpha * h);
      });
      out.push_back(verify_window(
          rep.N(),
          function_of_hamiltonian(
              H, [&](double h) { return gup::nonlinear_number(alpha, beta, h); }),
          margin, tol, "number_from_hamiltonian"));
      out.push_back(verify_window(xp, 0.5 * kI * S, margin, tol,
                                  "xp_commutator_hamiltonian"));
      out.push_back(verify_window(xH, alpha * x + kI * S * mp, margin, tol,
                                  "lie_hamilton_x_hamiltonian"));
      out.push_back(verify_window(pH, alpha * mp - kI * S * x, margin, tol,
                                  "lie_hamilton_p_hamiltonian"));
      break;
    }

    default:
      break;
  }
  return out;
}

std::vector<IdentityReport> printed_form_diagnostics(const FockRep& rep,
                                                     const QuadratureSet& quads,
                                                     int margin, double tol) {
  const int D = rep.dim();
  const auto& p = rep.K().params();
  const Matrix& x = quads.x;
  const Matrix& mp = quads.p;
  const Matrix& H = quads.H;
  const Matrix xH = commutator(x, H);
  const Matrix pH = commutator(mp, H);
  std::vector<IdentityReport> out;

  switch (rep.K().id()) {
    case CaseId::ArikCoon: {
      const double q = *p.q;
      const Matrix cp_printed = real_diag(
          D, [&](int n) { return 0.25 * (1 - q * q) * std::pow(q, n - 1); });
      const Matrix cp = real_diag(D, [&](int n) {
        return 0.25 * (1 + q) * (1 + q) * std::pow(q, n - 1);
      });
      out.push_back(verify_window(pH, cp_printed * mp - kI * cp * x, margin,
                                  tol, "lie_hamilton_p_q_power_printed"));
      const Matrix shrink =
          function_of_hamiltonian(H, [&](double h) { return 1 - (1 - q) * h; });
      out.push_back(verify_window(
          pH, 0.5 * (1 / q - 1) * shrink * mp - 0.5 * kI * (1 + 1 / q) * shrink * x,
          margin, tol, "lie_hamilton_p_hamiltonian_printed"));
      break;
    }
    case CaseId::MacfarlaneBiedenharn: {
      const double q = *p.q;
      const double c = q - 1 / q;
      const Matrix R = function_of_hamiltonian(H, [&](double h) {
        return std::sqrt(c * c * h * h + (q + 1) * (q + 1) / q);
      });
      const Matrix cH = c / (q * 2 * (1 + q)) * H;
      out.push_back(verify_window(xH, cH * x + 0.5 * kI * R * mp, margin, tol,
                                  "lie_hamilton_x_hamiltonian_printed"));
      out.push_back(verify_window(pH, -cH * mp - 0.5 * kI * R * x, margin, tol,
                                  "lie_hamilton_p_hamiltonian_printed"));
      // q^{1-N} [N]_q with the plain q-number, against a a^+ - q a^+ a = q^{-N}.
      if (std::abs(q - 1) >= spectral::kBranchThreshold) {
        const auto printed = spectral::make_custom(
            "macfarlane-printed",
            [q](double n) { return std::pow(q, 1 - n) * (1 - std::pow(q, n)) / (1 - q); });
        IdentityReport r;
        r.name = "macfarlane_printed_structure_function";
        r.window = D;
        r.tol = tol;
        r.residual = r.max_abs_residual = spectral::relation_residual(
            printed, *spectral::catalog_relation(rep.K()), D - 1);
        r.pass = r.residual <= tol;
        out.push_back(r);
      }
      break;
    }
    case CaseId::NonlinearSpectrum: {
      const double alpha = *p.alpha, beta = *p.beta;
      const Matrix S = function_of_hamiltonian(H, [&](double h) {
        return std::sqrt(beta * beta - alpha * alpha + 4 * alpha * h);
      });
      out.push_back(verify_window(pH, beta * mp - kI * S * x, margin, tol,
                                  "lie_hamilton_p_hamiltonian_printed"));
      break;
    }
    default:
      break;
  }
  return out;
}

}  // namespace deformalg::verify
