#include "deformalg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "deformalg/expr.hpp"
#include "deformalg/fockrep.hpp"
#include "deformalg/gup.hpp"
#include "deformalg/identities.hpp"
#include "deformalg/normal_form.hpp"

namespace deformalg::cli {

using Json = nlohmann::ordered_json;
using spectral::CaseId;

namespace {

constexpr int kRobertsonStates = 64;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pretty-prints with two-space indentation and every floating-point number
// through format_double, so files are byte-stable.
void write_json(std::ostream& os, const Json& j, int indent = 0) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(key).dump() << ": ";
        write_json(os, value, indent + 2);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) os << ",\n";
        first = false;
        os << inner;
        write_json(os, value, indent + 2);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

struct Sink {
  std::ostream& out;
  std::ofstream file;

  Sink(std::ostream& fallback, const std::string& path) : out(fallback) {
    if (!path.empty()) {
      file.open(path, std::ios::binary | std::ios::trunc);
      if (!file) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file.is_open() ? file : out; }
};

void emit_json(const RunConfig& cfg, std::ostream& out, const Json& j) {
  Sink sink(out, cfg.out_path);
  write_json(sink.stream(), j);
  sink.stream() << "\n";
}

void emit_text(const RunConfig& cfg, std::ostream& out, const std::string& s) {
  Sink sink(out, cfg.out_path);
  sink.stream() << s;
}

spectral::SpectralFunction build_case(const RunConfig& cfg) {
  const spectral::CaseParams& p = cfg.params;
  const CaseId id = cfg.case_id;
  const bool uses_q = id == CaseId::ArikCoon || id == CaseId::MacfarlaneBiedenharn ||
                      id == CaseId::ChungEtAl || id == CaseId::BorzovEtAl;
  const bool uses_ab = id == CaseId::ChungEtAl || id == CaseId::BorzovEtAl ||
                       id == CaseId::NonlinearSpectrum;
  const bool uses_gamma = id == CaseId::BorzovEtAl;
  const auto reject = [&](const char* flag) {
    throw UsageError(std::string("--") + flag + " does not apply to case " +
                     std::string(spectral::to_string(id)));
  };
  if (p.q && !uses_q) reject("q");
  if (p.alpha && !uses_ab) reject("alpha");
  if (p.beta && !uses_ab) reject("beta");
  if (p.gamma && !uses_gamma) reject("gamma");
  try {
    return spectral::make_case(id, p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

fock::FockRep build_rep_checked(const spectral::SpectralFunction& K, int D) {
  try {
    return fock::build_rep(K, D);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Json params_json(const spectral::SpectralFunction& K) {
  Json j = Json::object();
  const auto& p = K.params();
  if (p.q) j["q"] = *p.q;
  if (p.alpha) j["alpha"] = *p.alpha;
  if (p.beta) j["beta"] = *p.beta;
  if (p.gamma) j["gamma"] = *p.gamma;
  return j;
}

Json report_json(const fock::IdentityReport& r) {
  return Json{{"name", r.name},
              {"window", r.window},
              {"max_abs_residual", r.max_abs_residual},
              {"residual", r.residual},
              {"tol", r.tol},
              {"pass", r.pass}};
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

fock::IdentityReport robertson_check(const fock::FockRep& rep,
                                     const fock::QuadratureSet& quads,
                                     const RunConfig& cfg) {
  fock::IdentityReport r;
  r.name = "robertson_random_states";
  r.window = rep.dim() - cfg.margin;
  r.tol = 1e-12;
  for (int k = 0; k < kRobertsonStates; ++k) {
    const auto state = fock::truncation_safe(
        fock::random_state(rep.dim(), cfg.seed + static_cast<std::uint64_t>(k)),
        cfg.margin);
    const auto m = fock::uncertainty_product(state, quads);
    const double bound = 0.5 * std::abs(m.xp_commutator);
    const double violation = std::max(0.0, bound - m.product);
    r.max_abs_residual = std::max(r.max_abs_residual, violation);
    r.residual = std::max(r.residual, violation / std::max(1.0, m.product));
  }
  r.pass = r.residual <= r.tol;
  return r;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto K = build_case(cfg);
  const auto rep = build_rep_checked(K, cfg.dim);
  const auto quads = fock::quadratures(rep);

  std::vector<fock::IdentityReport> checks = verify::exact_checks(rep, quads);
  for (auto& group : {verify::general_checks(rep, quads, cfg.margin, cfg.tol),
                      verify::case_checks(rep, quads, cfg.margin, cfg.tol)}) {
    checks.insert(checks.end(), group.begin(), group.end());
  }
  checks.push_back(robertson_check(rep, quads, cfg));
  const auto diagnostics =
      verify::printed_form_diagnostics(rep, quads, cfg.margin, cfg.tol);
  const bool all_pass = std::all_of(checks.begin(), checks.end(),
                                    [](const auto& c) { return c.pass; });

  if (cfg.format == Format::Csv) {
    std::ostringstream os;
    os << "name,window,max_abs_residual,residual,tol,pass\n";
    for (const auto& c : checks) {
      os << c.name << ',' << c.window << ',' << format_double(c.max_abs_residual)
         << ',' << format_double(c.residual) << ',' << format_double(c.tol) << ','
         << (c.pass ? "true" : "false") << '\n';
    }
    emit_text(cfg, out, os.str());
  } else {
    Json j;
    j["command"] = "verify";
    j["case"] = std::string(spectral::to_string(K.id()));
    j["params"] = params_json(K);
    j["dim"] = cfg.dim;
    j["margin"] = cfg.margin;
    j["window"] = cfg.dim - cfg.margin;
    j["tol"] = cfg.tol;
    j["seed"] = cfg.seed;
    j["checks"] = Json::array();
    for (const auto& c : checks) j["checks"].push_back(report_json(c));
    j["printed_form_diagnostics"] = Json::array();
    for (const auto& d : diagnostics) {
      j["printed_form_diagnostics"].push_back(report_json(d));
    }
    j["pass"] = all_pass;
    emit_json(cfg, out, j);
  }
  return all_pass ? kPass : kCheckFailed;
}

int cmd_table(const RunConfig& cfg, int levels, std::ostream& out) {
  const auto K = build_case(cfg);
  if (levels < 1 || levels > cfg.dim - cfg.margin) {
    throw UsageError("--levels must lie in 1.." +
                     std::to_string(cfg.dim - cfg.margin));
  }
  if (cfg.format == Format::Csv) {
    std::ostringstream os;
    os << "n,K_n,K_n1,H_n,delta_n\n";
    for (int n = 0; n < levels; ++n) {
      os << n << ',' << format_double(K(n)) << ',' << format_double(K(n + 1.0))
         << ',' << format_double(spectral::hamiltonian_eigenvalue(K, n)) << ','
         << format_double(spectral::forward_delta(K, n)) << '\n';
    }
    emit_text(cfg, out, os.str());
  } else {
    Json j;
    j["command"] = "table";
    j["case"] = std::string(spectral::to_string(K.id()));
    j["params"] = params_json(K);
    j["rows"] = Json::array();
    for (int n = 0; n < levels; ++n) {
      j["rows"].push_back(Json{{"n", n},
                               {"K_n", K(n)},
                               {"K_n1", K(n + 1.0)},
                               {"H_n", spectral::hamiltonian_eigenvalue(K, n)},
                               {"delta_n", spectral::forward_delta(K, n)}});
    }
    emit_json(cfg, out, j);
  }
  return kPass;
}

struct ScanRange {
  std::optional<double> q_from, q_to;
  int q_steps = 1;
  int n_from = 0, n_to = 5;
  gup::Convention convention = gup::Convention::Raw;
};

int cmd_gup_scan(const RunConfig& cfg, const ScanRange& range, std::ostream& out) {
  if (range.n_from < 0 || range.n_to < range.n_from) {
    throw UsageError("--n-from/--n-to must satisfy 0 <= n-from <= n-to");
  }
  if (range.n_to > cfg.dim - 1 - cfg.margin) {
    throw UsageError("--n-to exceeds the truncation-safe level " +
                     std::to_string(cfg.dim - 1 - cfg.margin));
  }
  std::vector<RunConfig> points;
  if (range.q_from || range.q_to) {
    if (!range.q_from || !range.q_to) {
      throw UsageError("--q-from and --q-to go together");
    }
    if (range.q_steps < 1) throw UsageError("--q-steps must be >= 1");
    if (cfg.params.q) throw UsageError("--q conflicts with --q-from/--q-to");
    for (int k = 0; k < range.q_steps; ++k) {
      RunConfig point = cfg;
      const double t = range.q_steps == 1 ? 0.0 : double(k) / (range.q_steps - 1);
      point.params.q = *range.q_from + t * (*range.q_to - *range.q_from);
      points.push_back(point);
    }
  } else {
    points.push_back(cfg);
  }

  Json rows = Json::array();
  std::ostringstream csv;
  csv << "case,q,alpha,beta,gamma,n,delta_x,delta_p,product,robertson_bound,"
         "case_bound,eq26_literal,margin_robertson,margin_case\n";
  for (const RunConfig& point : points) {
    const auto K = build_case(point);
    auto spec = gup::default_bound(K.id());
    if (range.convention == gup::Convention::Rescaled) {
      if (K.id() != CaseId::ArikCoon) {
        throw UsageError("--convention rescaled applies to arik-coon only");
      }
      spec->convention = gup::Convention::Rescaled;
    }
    const auto rep = build_rep_checked(K, point.dim);
    const auto quads = fock::quadratures(rep);
    for (int n = range.n_from; n <= range.n_to; ++n) {
      const auto r =
          gup::evaluate(fock::number_state(point.dim, n), rep, quads, spec);
      const auto& p = K.params();
      if (cfg.format == Format::Csv) {
        csv << spectral::to_string(K.id()) << ',' << optional_field(p.q) << ','
            << optional_field(p.alpha) << ',' << optional_field(p.beta) << ','
            << optional_field(p.gamma) << ',' << n << ','
            << format_double(r.delta_x) << ',' << format_double(r.delta_p) << ','
            << format_double(r.product) << ',' << format_double(r.robertson_bound)
            << ',' << optional_field(r.case_bound) << ','
            << format_double(r.k_square_literal) << ','
            << format_double(r.margin_robertson) << ','
            << optional_field(r.margin_case) << '\n';
      } else {
        auto opt = [](const std::optional<double>& v) {
          return v ? Json(*v) : Json(nullptr);
        };
        rows.push_back(Json{{"case", std::string(spectral::to_string(K.id()))},
                            {"q", opt(p.q)},
                            {"alpha", opt(p.alpha)},
                            {"beta", opt(p.beta)},
                            {"gamma", opt(p.gamma)},
                            {"n", n},
                            {"delta_x", r.delta_x},
                            {"delta_p", r.delta_p},
                            {"product", r.product},
                            {"robertson_bound", r.robertson_bound},
                            {"case_bound", opt(r.case_bound)},
                            {"eq26_literal", r.k_square_literal},
                            {"margin_robertson", r.margin_robertson},
                            {"margin_case", opt(r.margin_case)}});
      }
    }
  }
  if (cfg.format == Format::Csv) {
    emit_text(cfg, out, csv.str());
  } else {
    emit_json(cfg, out, Json{{"command", "gup-scan"}, {"rows", rows}});
  }
  return kPass;
}

int cmd_symbolic(const RunConfig& cfg, const std::string& check, std::ostream& out) {
  if (check.empty()) throw UsageError("symbolic needs --check");
  std::string text = check;
  if (check.find("==") == std::string::npos) {
    text = sym::builtin_identity(check);
    if (text.empty()) throw UsageError("unknown builtin identity '" + check + "'");
  }
  sym::Identity identity;
  try {
    identity = sym::parse_identity(text);
  } catch (const sym::ParseError& e) {
    throw UsageError(std::string("parse error: ") + e.what());
  }
  const auto K = build_case(cfg);
  const auto bindings = sym::bindings_for(K);
  const int degree =
      std::max(sym::ladder_degree(*identity.lhs), sym::ladder_degree(*identity.rhs));
  const int margin = std::max(cfg.margin, degree);
  if (margin >= cfg.dim) {
    throw UsageError("identity reaches " + std::to_string(degree) +
                     " levels; increase --dim");
  }

  sym::NormalForm lhs(nullptr), rhs(nullptr);
  fock::Matrix lhs_m, rhs_m;
  const auto rep = build_rep_checked(K, cfg.dim);
  const auto quads = fock::quadratures(rep);
  try {
    lhs = sym::normal_order(*identity.lhs, K, bindings);
    rhs = sym::normal_order(*identity.rhs, K, bindings);
    lhs_m = sym::realize_direct(*identity.lhs, rep, quads, bindings);
    rhs_m = sym::realize_direct(*identity.rhs, rep, quads, bindings);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto symbolic = sym::nf_equal(lhs, rhs, 24, cfg.tol);
  auto matrix = fock::verify_window(lhs_m, rhs_m, margin, cfg.tol, "matrix_oracle");
  const bool pass = symbolic.pass && matrix.pass;

  Json j;
  j["command"] = "symbolic";
  j["case"] = std::string(spectral::to_string(K.id()));
  j["params"] = params_json(K);
  j["identity"] = text;
  j["lhs_normal_form"] = lhs.to_string();
  j["rhs_normal_form"] = rhs.to_string();
  j["symbolic"] = report_json(symbolic);
  j["matrix"] = report_json(matrix);
  j["agree"] = symbolic.pass == matrix.pass;
  j["pass"] = pass;
  emit_json(cfg, out, j);
  return pass ? kPass : kCheckFailed;
}

void add_shared_options(CLI::App* sub, RunConfig& cfg, std::string& case_name,
                        std::string& format_name) {
  sub->add_option("--case", case_name,
                  "classical | arik-coon | macfarlane-biedenharn | chung | "
                  "borzov | nonlinear")
      ->required();
  sub->add_option("--q", cfg.params.q, "deformation parameter q > 0");
  sub->add_option("--alpha", cfg.params.alpha);
  sub->add_option("--beta", cfg.params.beta);
  sub->add_option("--gamma", cfg.params.gamma);
  sub->add_option("--dim", cfg.dim, "truncation dimension D")->capture_default_str();
  sub->add_option("--margin", cfg.margin, "rows/cols excluded from checks")
      ->capture_default_str();
  sub->add_option("--tol", cfg.tol)->capture_default_str();
  sub->add_option("--seed", cfg.seed)->capture_default_str();
  sub->add_option("--format", format_name, "json | csv");
  sub->add_option("--out", cfg.out_path, "output file (default stdout)");
}

void finish_config(RunConfig& cfg, const std::string& case_name,
                   const std::string& format_name, Format default_format) {
  const auto id = spectral::parse_case_id(case_name);
  if (!id) throw UsageError("unknown case '" + case_name + "'");
  cfg.case_id = *id;
  if (format_name.empty()) {
    cfg.format = default_format;
  } else if (format_name == "json") {
    cfg.format = Format::Json;
  } else if (format_name == "csv") {
    cfg.format = Format::Csv;
  } else {
    throw UsageError("unknown format '" + format_name + "'");
  }
  if (cfg.dim < fock::kMinDim) throw UsageError("--dim must be >= 4");
  if (cfg.margin < 0 || cfg.margin >= cfg.dim) {
    throw UsageError("--margin must lie in 0..dim-1");
  }
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  if (const char* env = std::getenv("DEFORMALG_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw UsageError("DEFORMALG_SEED must be an unsigned integer");
    }
    cfg.seed = v;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Deformed oscillator algebra laboratory", "deformalg"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string case_name, format_name;
  int levels = 8;
  std::string check;
  ScanRange range;
  std::string convention = "raw";

  auto* verify_cmd = app.add_subcommand("verify", "run the identity suite for a case");
  auto* table_cmd = app.add_subcommand("table", "spectrum table as CSV");
  auto* scan_cmd = app.add_subcommand("gup-scan", "uncertainty bounds on number states");
  auto* sym_cmd = app.add_subcommand("symbolic", "normal-order and compare an identity");
  for (auto* sub : {verify_cmd, table_cmd, scan_cmd, sym_cmd}) {
    add_shared_options(sub, cfg, case_name, format_name);
  }
  table_cmd->add_option("--levels", levels)->capture_default_str();
  scan_cmd->add_option("--q-from", range.q_from);
  scan_cmd->add_option("--q-to", range.q_to);
  scan_cmd->add_option("--q-steps", range.q_steps)->capture_default_str();
  scan_cmd->add_option("--n-from", range.n_from)->capture_default_str();
  scan_cmd->add_option("--n-to", range.n_to)->capture_default_str();
  scan_cmd->add_option("--convention", convention, "raw | rescaled")
      ->capture_default_str();
  sym_cmd->add_option("--check", check, "\"LHS == RHS\" or a builtin name")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (verify_cmd->parsed()) {
      finish_config(cfg, case_name, format_name, Format::Json);
      return cmd_verify(cfg, out);
    }
    if (table_cmd->parsed()) {
      finish_config(cfg, case_name, format_name, Format::Csv);
      return cmd_table(cfg, levels, out);
    }
    if (scan_cmd->parsed()) {
      finish_config(cfg, case_name, format_name, Format::Csv);
      if (convention == "rescaled") {
        range.convention = gup::Convention::Rescaled;
      } else if (convention != "raw") {
        throw UsageError("unknown convention '" + convention + "'");
      }
      return cmd_gup_scan(cfg, range, out);
    }
    finish_config(cfg, case_name, format_name, Format::Json);
    if (cfg.format != Format::Json) throw UsageError("symbolic reports JSON only");
    return cmd_symbolic(cfg, check, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace deformalg::cli
