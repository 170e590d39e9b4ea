#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "deformalg/spectral.hpp"

namespace deformalg::cli {

enum class Format { Json, Csv };

/// Options shared by every subcommand, validated before any computation.
struct RunConfig {
  spectral::CaseId case_id = spectral::CaseId::Classical;
  spectral::CaseParams params;
  int dim = 32;
  int margin = 3;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  Format format = Format::Json;
  std::string out_path;  // empty: standard output
};

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

/// Runs one invocation; `args` excludes the program name. Reports go to
/// `out` (or --out), diagnostics to `err`. DEFORMALG_SEED in the
/// environment overrides --seed.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Fixed float formatting used in every report: "%.16e" (17 significant
/// digits, scientific).
std::string format_double(double v);

}  // namespace deformalg::cli
