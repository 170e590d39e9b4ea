#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace deformalg::spectral {

enum class CaseId {
  Classical,
  ArikCoon,
  MacfarlaneBiedenharn,
  ChungEtAl,
  BorzovEtAl,
  NonlinearSpectrum,
  Custom
};

std::string_view to_string(CaseId id);
/// Accepts the CLI spellings: classical, arik-coon, macfarlane-biedenharn,
/// chung, borzov, nonlinear.
std::optional<CaseId> parse_case_id(std::string_view text);

struct CaseParams {
  std::optional<double> q;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
};

/// Below this distance from 1 (for q) or between exponents (alpha vs gamma)
/// the exact limit branch is used instead of the closed form.
inline constexpr double kBranchThreshold = 1e-12;

/// Structure function K(N) of a deformed oscillator, a^dagger a = K(N).
///
/// Immutable after construction. Near q = 1 (or alpha = gamma) catalog cases
/// are evaluated through an expm1/sinh form so the limit is continuous; far
/// from it the direct power form is used, which keeps integer-valued spectra
/// exact. Exactly degenerate parameters take the limit branch.
class SpectralFunction {
public:
  using Evaluator = std::function<double(double)>;

  CaseId id() const { return id_; }
  const CaseParams& params() const { return params_; }
  const std::string& name() const { return name_; }

  double operator()(double n) const;

private:
  friend SpectralFunction make_case(CaseId, const CaseParams&);
  friend SpectralFunction make_custom(std::string, Evaluator);

  SpectralFunction(CaseId id, CaseParams params, std::string name,
                   Evaluator custom)
      : id_(id), params_(params), name_(std::move(name)),
        custom_(std::move(custom)) {}

  CaseId id_;
  CaseParams params_;
  std::string name_;
  Evaluator custom_;
};

/// Builds a catalog case. Required parameters:
///   ArikCoon, MacfarlaneBiedenharn: q
///   ChungEtAl: q, alpha, beta
///   BorzovEtAl: q, alpha, beta, gamma
///   NonlinearSpectrum: alpha >= 0, beta > 0
/// Parameters a case does not use are dropped. Throws std::invalid_argument
/// for q <= 0, missing parameters, non-finite values, or Custom.
SpectralFunction make_case(CaseId id, const CaseParams& params = {});

/// Wraps an arbitrary K. Throws std::invalid_argument unless fn(0) == 0.
/// Positivity for n >= 1 is checked when a representation is built.
SpectralFunction make_custom(std::string name, SpectralFunction::Evaluator fn);

double eval_K(const SpectralFunction& K, double n);

/// K(n+1) - K(n): eigenvalue of [a, a^dagger] on |n>.
double forward_delta(const SpectralFunction& K, int n);

/// (K(n) + K(n+1)) / 2: eigenvalue of H = x^2 + p^2 on |n>.
double hamiltonian_eigenvalue(const SpectralFunction& K, int n);

/// a a^dagger - s a^dagger a = g(N), read on |n> as K(n+1) - s K(n) = g(n).
struct DefiningRelation {
  double s = 1.0;
  std::function<double(double)> g;
};

/// The commutation relation each catalog case was introduced with.
/// Custom has none.
std::optional<DefiningRelation> catalog_relation(const SpectralFunction& K);

/// max over n = 0..n_max of |K(n+1) - s K(n) - g(n)| / max(1, |K(n+1)|,
/// |s K(n)|, |g(n)|). Throws std::invalid_argument for n_max < 1.
double relation_residual(const SpectralFunction& K, const DefiningRelation& rel,
                         int n_max);

}  // namespace deformalg::spectral
