#include "deformalg/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace deformalg::spectral {

namespace {

struct CaseName {
  CaseId id;
  std::string_view cli;
};

constexpr std::array<CaseName, 7> kCaseNames{{
    {CaseId::Classical, "classical"},
    {CaseId::ArikCoon, "arik-coon"},
    {CaseId::MacfarlaneBiedenharn, "macfarlane-biedenharn"},
    {CaseId::ChungEtAl, "chung"},
    {CaseId::BorzovEtAl, "borzov"},
    {CaseId::NonlinearSpectrum, "nonlinear"},
    {CaseId::Custom, "custom"},
}};

double require(const std::optional<double>& value, std::string_view what,
               CaseId id) {
  if (!value) {
    throw std::invalid_argument(std::string(to_string(id)) +
                                ": missing parameter " + std::string(what));
  }
  if (!std::isfinite(*value)) {
    throw std::invalid_argument(std::string(to_string(id)) + ": parameter " +
                                std::string(what) + " is not finite");
  }
  return *value;
}

bool near_one(double q) { return std::abs(q - 1.0) < kBranchThreshold; }

// Far from the removable singularity the plain power form is both accurate
// and exact for integer data (q = 2 gives K(3) = 7 to the last bit); closer
// in, the expm1/sinh forms avoid the cancellation.
constexpr double kDirectForm = 0.5;  // |exponent * ln q|

// q^beta (q^{alpha n} - q^{gamma n}) / (q^alpha - q^gamma), written as
// q^{beta + gamma (n-1)} * expm1(d n L) / expm1(d L) with d = alpha - gamma,
// L = ln q. The ratio tends to n as d L -> 0.
double borzov(double q, double alpha, double beta, double gamma, double n) {
  if (near_one(q)) return n;
  const double log_q = std::log(q);
  const double d = alpha - gamma;
  if (std::abs(d * log_q) >= kDirectForm) {
    return std::pow(q, beta) * (std::pow(q, alpha * n) - std::pow(q, gamma * n)) /
           (std::pow(q, alpha) - std::pow(q, gamma));
  }
  const double prefactor = std::exp((beta + gamma * (n - 1.0)) * log_q);
  if (std::abs(d) < kBranchThreshold) return n * prefactor;
  return prefactor * std::expm1(d * n * log_q) / std::expm1(d * log_q);
}

}  // namespace

std::string_view to_string(CaseId id) {
  for (const auto& entry : kCaseNames) {
    if (entry.id == id) return entry.cli;
  }
  return "unknown";
}

std::optional<CaseId> parse_case_id(std::string_view text) {
  for (const auto& entry : kCaseNames) {
    if (entry.cli == text && entry.id != CaseId::Custom) return entry.id;
  }
  return std::nullopt;
}

double SpectralFunction::operator()(double n) const {
  switch (id_) {
    case CaseId::Classical:
      return n;
    case CaseId::ArikCoon: {
      const double q = *params_.q;
      if (near_one(q)) return n;
      const double log_q = std::log(q);
      if (std::abs(log_q) >= kDirectForm) return (std::pow(q, n) - 1.0) / (q - 1.0);
      return std::expm1(n * log_q) / std::expm1(log_q);
    }
    case CaseId::MacfarlaneBiedenharn: {
      const double q = *params_.q;
      if (near_one(q)) return n;
      const double log_q = std::log(q);
      if (std::abs(log_q) >= kDirectForm) {
        return (std::pow(q, n) - std::pow(q, -n)) / (q - 1.0 / q);
      }
      return std::sinh(n * log_q) / std::sinh(log_q);
    }
    case CaseId::ChungEtAl:
      return borzov(*params_.q, *params_.alpha, *params_.beta, 1.0, n);
    case CaseId::BorzovEtAl:
      return borzov(*params_.q, *params_.alpha, *params_.beta, *params_.gamma,
                    n);
    case CaseId::NonlinearSpectrum:
      return (*params_.alpha * n + *params_.beta) * n;
    case CaseId::Custom:
      return custom_(n);
  }
  return 0.0;
}

SpectralFunction make_case(CaseId id, const CaseParams& params) {
  CaseParams kept;
  switch (id) {
    case CaseId::Classical:
      return SpectralFunction(id, kept, "classical", {});
    case CaseId::ArikCoon:
    case CaseId::MacfarlaneBiedenharn:
    case CaseId::ChungEtAl:
    case CaseId::BorzovEtAl: {
      kept.q = require(params.q, "q", id);
      if (*kept.q <= 0.0) {
        throw std::invalid_argument(std::string(to_string(id)) +
                                    ": q must be positive");
      }
      if (id == CaseId::ChungEtAl || id == CaseId::BorzovEtAl) {
        kept.alpha = require(params.alpha, "alpha", id);
        kept.beta = require(params.beta, "beta", id);
      }
      if (id == CaseId::BorzovEtAl) kept.gamma = require(params.gamma, "gamma", id);
      break;
    }
    case CaseId::NonlinearSpectrum:
      kept.alpha = require(params.alpha, "alpha", id);
      kept.beta = require(params.beta, "beta", id);
      if (*kept.alpha < 0.0) {
        throw std::invalid_argument("nonlinear: alpha must be >= 0");
      }
      if (*kept.beta <= 0.0) {
        throw std::invalid_argument("nonlinear: beta must be > 0");
      }
      break;
    case CaseId::Custom:
      throw std::invalid_argument("custom cases are built with make_custom");
  }
  return SpectralFunction(id, kept, std::string(to_string(id)), {});
}

SpectralFunction make_custom(std::string name, SpectralFunction::Evaluator fn) {
  if (!fn) throw std::invalid_argument("custom K: empty function");
  const double k0 = fn(0.0);
  if (k0 != 0.0) {
    throw std::invalid_argument("custom K '" + name +
                                "': K(0) must be 0, got " + std::to_string(k0));
  }
  return SpectralFunction(CaseId::Custom, {}, std::move(name), std::move(fn));
}

double eval_K(const SpectralFunction& K, double n) { return K(n); }

double forward_delta(const SpectralFunction& K, int n) {
  return K(n + 1.0) - K(n);
}

double hamiltonian_eigenvalue(const SpectralFunction& K, int n) {
  return 0.5 * (K(n) + K(n + 1.0));
}

std::optional<DefiningRelation> catalog_relation(const SpectralFunction& K) {
  const CaseParams& p = K.params();
  switch (K.id()) {
    case CaseId::Classical:
      return DefiningRelation{1.0, [](double) { return 1.0; }};
    case CaseId::ArikCoon:
      return DefiningRelation{*p.q, [](double) { return 1.0; }};
    case CaseId::MacfarlaneBiedenharn: {
      const double q = *p.q;
      return DefiningRelation{q, [q](double n) { return std::pow(q, -n); }};
    }
    case CaseId::ChungEtAl:
    case CaseId::BorzovEtAl: {
      const double q = *p.q, alpha = *p.alpha, beta = *p.beta;
      const double gamma = K.id() == CaseId::BorzovEtAl ? *p.gamma : 1.0;
      return DefiningRelation{std::pow(q, gamma), [=](double n) {
                                return std::pow(q, alpha * n + beta);
                              }};
    }
    case CaseId::NonlinearSpectrum: {
      const double alpha = *p.alpha, beta = *p.beta;
      return DefiningRelation{1.0, [=](double n) {
                                return 2.0 * alpha * n + alpha + beta;
                              }};
    }
    case CaseId::Custom:
      break;
  }
  return std::nullopt;
}

double relation_residual(const SpectralFunction& K, const DefiningRelation& rel,
                         int n_max) {
  if (n_max < 1) throw std::invalid_argument("relation_residual: n_max < 1");
  double worst = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double next = K(n + 1.0);
    const double scaled = rel.s * K(n);
    const double rhs = rel.g(n);
    const double scale =
        std::max({1.0, std::abs(next), std::abs(scaled), std::abs(rhs)});
    worst = std::max(worst, std::abs(next - scaled - rhs) / scale);
  }
  return worst;
}

}  // namespace deformalg::spectral
