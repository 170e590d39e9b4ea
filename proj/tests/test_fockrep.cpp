#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "deformalg/fockrep.hpp"
#include "deformalg/identities.hpp"
#include "grid.hpp"

using namespace deformalg;
using namespace deformalg::testing;
using fock::Complex;
using fock::Matrix;

namespace {

const Complex kI{0.0, 1.0};

void require_all_pass(const std::vector<fock::IdentityReport>& reports) {
  for (const auto& r : reports) {
    INFO(r.name << " residual " << r.residual);
    CHECK(r.pass);
  }
}

}  // namespace

TEST_CASE("ladder matrices") {
  const auto classical = fock::build_rep(spectral::make_case(CaseId::Classical), 4);
  CHECK(classical.a()(0, 1).real() == 1.0);
  CHECK(classical.a()(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(classical.a()(2, 3).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  const auto ac =
      fock::build_rep(spectral::make_case(CaseId::ArikCoon, {.q = 2.0}), 4);
  CHECK(ac.a()(0, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ac.a()(1, 2).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(ac.a()(2, 3).real() == doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
  CHECK((ac.ad() - ac.a().adjoint()).norm() == 0.0);
  CHECK(ac.a().col(0).norm() == 0.0);

  for (int n = 0; n < 4; ++n) CHECK(ac.N()(n, n).real() == n);
}

TEST_CASE("number operator product is diagonal K") {
  for (const auto& K : representative_cases()) {
    const auto rep = fock::build_rep(K, 32);
    const Matrix prod = rep.ad() * rep.a();
    for (int n = 0; n < 32; ++n) {
      CHECK(std::abs(prod(n, n) - K(n)) <= 1e-14 * std::max(1.0, K(n)));
    }
  }
}

TEST_CASE("build_rep rejects bad input") {
  const auto classical = spectral::make_case(CaseId::Classical);
  CHECK_THROWS_AS(fock::build_rep(classical, 3), std::invalid_argument);
  const auto negative = spectral::make_custom("dip", [](double n) { return n * (n - 3); });
  CHECK_THROWS_AS(fock::build_rep(negative, 8), std::invalid_argument);
  const auto flat = spectral::make_custom("flat", [](double n) { return n * (n - 2); });
  CHECK_THROWS_AS(fock::build_rep(flat, 8), std::invalid_argument);
}

TEST_CASE("quadratures") {
  const auto rep = fock::build_rep(spectral::make_case(CaseId::Classical), 6);
  const auto quads = fock::quadratures(rep);
  for (int n = 0; n < 3; ++n) CHECK(quads.H(n, n).real() == doctest::Approx(n + 0.5));
  CHECK((quads.x - quads.x.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((quads.p - quads.p.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);

  const auto nl = fock::build_rep(
      spectral::make_case(CaseId::NonlinearSpectrum, {.alpha = 1.0, .beta = 2.0}), 8);
  CHECK(fock::quadratures(nl).H(2, 2).real() == doctest::Approx(11.5).epsilon(1e-14));
}

TEST_CASE("commutators") {
  const auto rep = fock::build_rep(spectral::make_case(CaseId::ArikCoon, {.q = 0.5}), 6);
  CHECK((fock::commutator(rep.N(), rep.ad()) - rep.ad()).cwiseAbs().maxCoeff() <= 1e-14);
  const auto quads = fock::quadratures(rep);
  const Matrix xp = fock::commutator(quads.x, quads.p);
  CHECK(std::abs(xp(2, 2) - 0.125 * kI) <= 1e-15);

  const auto classical = fock::build_rep(spectral::make_case(CaseId::Classical), 10);
  const auto cq = fock::quadratures(classical);
  const auto r = fock::verify_window(fock::commutator(cq.x, cq.p),
                                     0.5 * kI * Matrix::Identity(10, 10), 3, 1e-14);
  CHECK(r.pass);
  CHECK_THROWS_AS(fock::commutator(Matrix::Zero(3, 3), Matrix::Zero(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("Lie-Hamilton right-hand sides") {
  const auto classical = fock::build_rep(spectral::make_case(CaseId::Classical), 16);
  const auto cq = fock::quadratures(classical);
  CHECK(fock::verify_window(fock::lie_hamilton_rhs(classical, cq, fock::Side::X),
                            kI * cq.p, 3, 1e-12)
            .pass);
  CHECK(fock::verify_window(fock::lie_hamilton_rhs(classical, cq, fock::Side::P),
                            -kI * cq.x, 3, 1e-12)
            .pass);

  const double q = 0.7;
  const auto rep = fock::build_rep(spectral::make_case(CaseId::ArikCoon, {.q = q}), 32);
  const auto quads = fock::quadratures(rep);
  const Matrix rhs = fock::lie_hamilton_rhs(rep, quads, fock::Side::X);
  CHECK(fock::verify_window(fock::commutator(quads.x, quads.H), rhs, 3, 1e-10).pass);
  // Closed coefficients: -(1-q^2)/4 q^{N-1} on x and (i/4)(1+q)^2 q^{N-1} on p.
  const Matrix qn1 = fock::diag_function(32, [q](int n) { return std::pow(q, n - 1); });
  const Matrix closed = -0.25 * (1 - q * q) * qn1 * quads.x +
                        0.25 * kI * (1 + q) * (1 + q) * qn1 * quads.p;
  CHECK(fock::verify_window(closed, rhs, 3, 1e-10).pass);
}

TEST_CASE("bottom extension drops out on the window") {
  for (const auto& K : representative_cases()) {
    const auto rep = fock::build_rep(K, 24);
    const auto quads = fock::quadratures(rep);
    const Matrix xH = fock::commutator(quads.x, quads.H);
    const Matrix pH = fock::commutator(quads.p, quads.H);
    for (double ext : {-7.25, 123.0}) {
      const Matrix rx = fock::lie_hamilton_rhs(rep, quads, fock::Side::X, ext);
      const Matrix rp = fock::lie_hamilton_rhs(rep, quads, fock::Side::P, ext);
      CHECK(fock::verify_window(xH, rx, 3, 1e-10).pass);
      CHECK(fock::verify_window(pH, rp, 3, 1e-10).pass);
      // The extension multiplies x and p with opposite signs in row 0, so it
      // cancels entry by entry, not just on the window.
      for (auto [side, with] : {std::pair{fock::Side::X, &rx}, {fock::Side::P, &rp}}) {
        const Matrix plain = fock::lie_hamilton_rhs(rep, quads, side);
        CHECK(fock::verify_window(*with, plain, 0, 1e-12).pass);
      }
    }
  }
}

TEST_CASE("verify_window") {
  const Matrix A = Matrix::Random(6, 6);
  const auto same = fock::verify_window(A, A, 3, 0.0, "same");
  CHECK(same.pass);
  CHECK(same.residual == 0.0);
  CHECK(same.window == 3);
  CHECK(same.name == "same");

  Matrix B = A;
  B(5, 5) += 1.0;  // outside the window
  CHECK(fock::verify_window(A, B, 1, 1e-14).pass);
  CHECK_FALSE(fock::verify_window(A, B, 0, 1e-14).pass);
  CHECK_THROWS_AS(fock::verify_window(A, B, 6, 1e-14), std::invalid_argument);
  CHECK_THROWS_AS(fock::verify_window(A, B, -1, 1e-14), std::invalid_argument);
  CHECK_THROWS_AS(fock::verify_window(A, Matrix::Zero(5, 5), 1, 1e-14),
                  std::invalid_argument);
}

TEST_CASE("wrong K breaks the diagonal Hamiltonian") {
  const auto rep = fock::build_rep(spectral::make_case(CaseId::Classical), 32);
  const auto quads = fock::quadratures(rep);
  const auto wrong = spectral::make_custom("offset", [](double n) {
    return n == 0.0 ? 0.0 : n + 0.1;
  });
  const auto r = fock::verify_window(quads.H, verify::hamiltonian_formula(wrong, 32), 3,
                                     1e-10);
  CHECK_FALSE(r.pass);
  CHECK(r.max_abs_residual >= 0.05);
  CHECK(fock::verify_window(quads.H,
                            verify::hamiltonian_formula(rep.K(), 32), 3, 1e-10)
            .pass);
}

TEST_CASE("identity suites pass for every case") {
  for (const auto& K : representative_cases()) {
    INFO(describe(K));
    const auto rep = fock::build_rep(K, 32);
    const auto quads = fock::quadratures(rep);
    require_all_pass(verify::exact_checks(rep, quads));
    require_all_pass(verify::general_checks(rep, quads, 3));
    require_all_pass(verify::case_checks(rep, quads, 3));
  }
  for (unsigned seed : {11u, 29u}) {
    const auto rep = fock::build_rep(seeded_custom(seed), 32);
    const auto quads = fock::quadratures(rep);
    require_all_pass(verify::exact_checks(rep, quads));
    require_all_pass(verify::general_checks(rep, quads, 3));
    CHECK(verify::case_checks(rep, quads, 3).empty());
  }
}

TEST_CASE("case suites carry the expected checks") {
  const auto rep = fock::build_rep(spectral::make_case(CaseId::ArikCoon, {.q = 0.7}), 32);
  const auto quads = fock::quadratures(rep);
  const auto checks = verify::case_checks(rep, quads, 3);
  const auto has = [&](const char* name) {
    for (const auto& c : checks) {
      if (c.name == name) return c.pass;
    }
    return false;
  };
  CHECK(has("xp_commutator_q_power"));
  CHECK(has("xp_commutator_hamiltonian"));
  CHECK(has("kempf_rescaled_commutator"));
  CHECK(has("lie_hamilton_x_q_power"));
  CHECK(has("lie_hamilton_p_q_power"));
}

TEST_CASE("quoted case forms that disagree with the general equations") {
  // The p-line sign (q-power and Hamiltonian forms), the x coefficient of the
  // symmetric-bracket case, and beta in place of alpha for the quadratic
  // spectrum all fail, by amounts far above rounding.
  const std::vector<spectral::SpectralFunction> cases{
      spectral::make_case(CaseId::ArikCoon, {.q = 0.7}),
      spectral::make_case(CaseId::MacfarlaneBiedenharn, {.q = 1.5}),
      spectral::make_case(CaseId::NonlinearSpectrum, {.alpha = 1.0, .beta = 2.0})};
  for (const auto& K : cases) {
    const auto rep = fock::build_rep(K, 32);
    const auto quads = fock::quadratures(rep);
    for (const auto& d : verify::printed_form_diagnostics(rep, quads, 3)) {
      INFO(d.name);
      CHECK_FALSE(d.pass);
      CHECK(d.residual > 1e-3);
    }
  }
}

TEST_CASE("states") {
  const auto e0 = fock::number_state(4, 0);
  CHECK(e0.amplitudes()(0) == Complex(1.0, 0.0));
  CHECK(e0.amplitudes().tail(3).norm() == 0.0);
  CHECK_THROWS_AS(fock::number_state(4, 4), std::out_of_range);
  CHECK_THROWS_AS(fock::number_state(4, -1), std::out_of_range);
  CHECK_THROWS_AS(fock::StateVector(fock::Vector::Zero(4)), std::invalid_argument);

  const auto s1 = fock::random_state(16, 42);
  const auto s2 = fock::random_state(16, 42);
  CHECK((s1.amplitudes() - s2.amplitudes()).norm() == 0.0);
  CHECK(std::abs(s1.amplitudes().norm() - 1.0) <= 1e-12);
  CHECK((fock::random_state(16, 43).amplitudes() - s1.amplitudes()).norm() > 0.1);

  const auto safe = fock::truncation_safe(s1, 3);
  CHECK(safe.amplitudes().tail(3).norm() == 0.0);
  CHECK(std::abs(safe.amplitudes().norm() - 1.0) <= 1e-12);
}

TEST_CASE("random stream is pinned") {
  // splitmix64 from seed 0 yields 0xe220a8397b1dcdaf first; (x >> 11) * 2^-53
  // then feeds Box-Muller with u1 -> 1 - u1.
  const double u1 = double(0xe220a8397b1dcdafULL >> 11) * 0x1.0p-53;
  const double u2 = double(0x6e789e6aa1b965f4ULL >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double z0 = r * std::cos(2.0 * std::numbers::pi * u2), z1 = r * std::sin(2.0 * std::numbers::pi * u2);
  // One amplitude only: the normalized vector is the phase of (z0, z1).
  fock::Vector v(1);
  v << Complex(z0, z1);
  const auto expected = fock::StateVector(v);
  CHECK(std::abs(fock::random_state(1, 0).amplitudes()(0) - expected.amplitudes()(0)) <=
        1e-15);
}

TEST_CASE("uncertainty moments on number states") {
  const auto classical = fock::build_rep(spectral::make_case(CaseId::Classical), 8);
  const auto cq = fock::quadratures(classical);
  const auto m1 = fock::uncertainty_product(fock::number_state(8, 1), cq);
  CHECK(m1.product == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(m1.mean_x == 0.0);
  CHECK(m1.mean_p == 0.0);
  CHECK(fock::uncertainty_product(fock::number_state(8, 0), cq).product ==
        doctest::Approx(0.25).epsilon(1e-14));

  const auto ac = fock::build_rep(spectral::make_case(CaseId::ArikCoon, {.q = 0.5}), 10);
  const auto m2 = fock::uncertainty_product(fock::number_state(10, 2), fock::quadratures(ac));
  CHECK(m2.product == doctest::Approx(0.8125).epsilon(1e-14));
  CHECK(m2.xp_commutator.imag() == doctest::Approx(0.125).epsilon(1e-14));
}
