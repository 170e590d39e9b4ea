#include "deformalg/gup.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace deformalg::gup {

using spectral::CaseId;
using spectral::kBranchThreshold;

namespace {

bool near_one(double q) { return std::abs(q - 1.0) < kBranchThreshold; }

void require_positive_q(double q, const char* where) {
  if (!(q > 0.0)) {
    throw std::invalid_argument(std::string(where) + ": q must be positive");
  }
}

double real_expectation(const StateVector& s, const fock::Matrix& M) {
  return fock::expectation(s, M).real();
}

}  // namespace

double robertson_bound(const StateVector& state, const QuadratureSet& quads) {
  return 0.5 * std::abs(
                   fock::expectation(state, fock::commutator(quads.x, quads.p)));
}

double k_square_literal_bound(const StateVector& state, const FockRep& rep) {
  if (state.dim() != rep.dim()) {
    throw std::invalid_argument("k_square_literal_bound: dimension mismatch");
  }
  double k_mean = 0.0, k_next_mean = 0.0;
  for (int n = 0; n < rep.dim(); ++n) {
    const double w = std::norm(state.amplitudes()(n));
    k_mean += w * rep.K()(n);
    k_next_mean += w * rep.K()(n + 1.0);
  }
  return 0.25 * (k_mean * k_mean + k_next_mean * k_next_mean);
}

KSquareDiagnostic k_square_diagnostic(const StateVector& state,
                                      const FockRep& rep,
                                      const QuadratureSet& quads) {
  KSquareDiagnostic d;
  d.literal = k_square_literal_bound(state, rep);
  d.product = fock::uncertainty_product(state, quads).product;
  d.violated = d.product < d.literal;
  return d;
}

double arik_coon_qpow(double q, double h) {
  require_positive_q(q, "arik_coon_qpow");
  if (near_one(q)) return 1.0;
  const double value = 2.0 / (1.0 + q) * (1.0 - (1.0 - q) * h);
  if (!(value > 0.0)) {
    throw std::domain_error("arik_coon: energy " + std::to_string(h) +
                            " is outside the spectrum for q = " +
                            std::to_string(q));
  }
  return value;
}

double arik_coon_number(double q, double h) {
  if (near_one(q)) {
    require_positive_q(q, "arik_coon_number");
    return h - 0.5;
  }
  return std::log(arik_coon_qpow(q, h)) / std::log(q);
}

double macfarlane_qpow(double q, double h) {
  require_positive_q(q, "macfarlane_qpow");
  const double c = q - 1.0 / q;
  const double constant = (q + 1.0) * (q + 1.0) / q;
  const double root = std::sqrt(c * c * h * h + constant);
  if (c >= 0.0) return (c * h + root) / (1.0 + q);
  return constant / ((1.0 + q) * (root - c * h));
}

double macfarlane_number(double q, double h) {
  if (near_one(q)) {
    require_positive_q(q, "macfarlane_number");
    return h - 0.5;
  }
  return std::log(macfarlane_qpow(q, h)) / std::log(q);
}

double nonlinear_number(double alpha, double beta, double h) {
  const double radicand = beta * beta - alpha * alpha + 4.0 * alpha * h;
  if (radicand < 0.0) {
    throw std::domain_error("nonlinear: negative radicand for energy " +
                            std::to_string(h));
  }
  const double denom = std::sqrt(radicand) + alpha + beta;
  if (!(denom > 0.0)) {
    throw std::domain_error("nonlinear: degenerate parameters");
  }
  return (2.0 * h - alpha - beta) / denom;
}

double number_from_energy(const spectral::SpectralFunction& K, double h) {
  const auto& p = K.params();
  switch (K.id()) {
    case CaseId::Classical:
      return h - 0.5;
    case CaseId::ArikCoon:
      return arik_coon_number(*p.q, h);
    case CaseId::MacfarlaneBiedenharn:
      return macfarlane_number(*p.q, h);
    case CaseId::NonlinearSpectrum:
      return nonlinear_number(*p.alpha, *p.beta, h);
    default:
      throw std::invalid_argument("number_from_energy: no closed inversion for " +
                                  K.name());
  }
}

QuadratureSet kempf_rescale(const QuadratureSet& quads, double q) {
  require_positive_q(q, "kempf_rescale");
  const double scale = std::sqrt(1.0 + q);
  QuadratureSet out;
  out.x = scale * quads.x;
  out.p = scale * quads.p;
  out.H = out.x * out.x + out.p * out.p;
  return out;
}

std::optional<BoundSpec> default_bound(CaseId id) {
  switch (id) {
    case CaseId::ArikCoon:
    case CaseId::MacfarlaneBiedenharn:
    case CaseId::NonlinearSpectrum:
      return BoundSpec{id, Convention::Raw};
    default:
      return std::nullopt;
  }
}

double case_bound(const StateVector& state, const QuadratureSet& quads,
                  const BoundSpec& spec, const spectral::SpectralFunction& K) {
  if (spec.case_id != K.id() || !default_bound(K.id())) {
    throw std::invalid_argument("case_bound: no bound for " +
                                std::string(spectral::to_string(spec.case_id)) +
                                " on " + K.name());
  }
  if (spec.convention == Convention::Rescaled && K.id() != CaseId::ArikCoon) {
    throw std::invalid_argument(
        "case_bound: the rescaled convention applies to arik-coon only");
  }
  const auto& p = K.params();
  switch (K.id()) {
    case CaseId::ArikCoon: {
      const double q = *p.q;
      const QuadratureSet used = spec.convention == Convention::Rescaled
                                     ? kempf_rescale(quads, q)
                                     : quads;
      const auto m = fock::uncertainty_product(state, used);
      const double spread = m.delta_x * m.delta_x + m.delta_p * m.delta_p;
      return (1.0 - (1.0 - q) * spread) / (4.0 * (1.0 + q));
    }
    case CaseId::MacfarlaneBiedenharn: {
      const double q = *p.q;
      const double c = q - 1.0 / q;
      const fock::Matrix x2 = quads.x * quads.x;
      const fock::Matrix p2 = quads.p * quads.p;
      const double moments =
          real_expectation(state, x2 * x2) + real_expectation(state, x2 * p2) +
          real_expectation(state, p2 * x2) + real_expectation(state, p2 * p2);
      return std::sqrt(q) / (2.0 * (1.0 + q)) *
             (1.0 + q * c * c / (2.0 * (q + 1.0) * (q + 1.0)) * moments);
    }
    case CaseId::NonlinearSpectrum: {
      const double alpha = *p.alpha, beta = *p.beta;
      const auto m = fock::uncertainty_product(state, quads);
      const double spread = m.delta_x * m.delta_x + m.delta_p * m.delta_p;
      return beta / 4.0 * (1.0 - alpha / (beta * beta) * spread);
    }
    default:
      break;
  }
  throw std::invalid_argument("case_bound: unsupported case");
}

UncertaintyReport evaluate(const StateVector& state, const FockRep& rep,
                           const QuadratureSet& quads,
                           std::optional<BoundSpec> spec) {
  const bool rescaled = spec && spec->convention == Convention::Rescaled;
  if (rescaled && rep.K().id() != CaseId::ArikCoon) {
    throw std::invalid_argument(
        "evaluate: the rescaled convention applies to arik-coon only");
  }
  const QuadratureSet used =
      rescaled ? kempf_rescale(quads, *rep.K().params().q) : quads;

  UncertaintyReport r;
  const auto m = fock::uncertainty_product(state, used);
  r.delta_x = m.delta_x;
  r.delta_p = m.delta_p;
  r.product = m.product;
  r.robertson_bound = 0.5 * std::abs(m.xp_commutator);
  r.k_square_literal = k_square_literal_bound(state, rep);
  r.margin_robertson = r.product - r.robertson_bound;
  r.margin_literal = r.product - r.k_square_literal;
  if (spec) {
    r.case_bound = case_bound(state, quads, *spec, rep.K());
    r.margin_case = r.product - *r.case_bound;
  }
  return r;
}

}  // namespace deformalg::gup
