#include "quadham/cli.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "quadham/canonical_json.hpp"
#include "quadham/error.hpp"
#include "quadham/fock_oracle.hpp"
#include "quadham/model.hpp"
#include "quadham/poly_gaussian.hpp"
#include "quadham/spectral.hpp"

namespace quadham::cli {

using nlohmann::json;

namespace {

constexpr double kShellExactTolerance = 1e-8;
constexpr double kTruncatedTolerance = 1e-6;
constexpr std::size_t kLowestLevels = 10;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number_at(const json& obj, const std::string& key, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing number '" + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("'" + key + "' must be finite");
  return d;
}

long long integer_at(const json& obj, const std::string& key, long long min_value) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  const auto i = v.get<long long>();
  if (i < min_value) throw ConfigError("'" + key + "' must be >= " + std::to_string(min_value));
  return i;
}

json params_of(const json& model, const std::set<std::string>& allowed) {
  json params = model.value("params", json::object());
  if (!params.is_object()) throw ConfigError("'params' must be an object");
  reject_unknown_keys(params, allowed, "params");
  return params;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json complex_vector_json(const Eigen::VectorXcd& v) {
  return {{"real", vector_json(v.real())}, {"imag", vector_json(v.imag())}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json form_json(const QuadraticForm& q) {
  return {{"modes", q.basis().modes()}, {"gamma", matrix_json(q.gamma())}, {"offset", q.offset()}};
}

std::string degeneracy_text(const LatticeLevel& l) {
  return l.infinite_multiplicity ? "inf" : std::to_string(l.degeneracy);
}

bool is_random_model(const json& model) {
  return model.contains("preset") && model.at("preset") == "random-pd";
}

std::optional<DimensionlessModel> dimensionless_of(const json& model) {
  if (!model.contains("preset")) return std::nullopt;
  const std::string preset = model.at("preset").get<std::string>();
  if (preset == "oscillator-b") {
    const json params = params_of(model, {"mu", "k", "b"});
    DimensionlessModel d;
    d.mu = number_at(params, "mu", 1.0);
    d.k = number_at(params, "k", 1.0);
    d.b = number_at(params, "b");
    return d;
  }
  if (preset == "physical") {
    const json params = params_of(model, {"m1", "m2", "k1", "k2", "omega", "hbar"});
    PhysicalParameters p;
    p.m1 = number_at(params, "m1");
    p.m2 = number_at(params, "m2");
    p.k1 = number_at(params, "k1");
    p.k2 = number_at(params, "k2");
    p.omega = number_at(params, "omega");
    p.hbar = number_at(params, "hbar", 1.0);
    try {
      return reduce_to_dimensionless(p);
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
  }
  return std::nullopt;
}

struct Invocation {
  std::string command;
  AnalysisConfig config;
  Tolerances tol;
  QuadraticForm form;
};

json analyze_payload(const Invocation& inv) {
  const QuadraticForm& q = inv.form;
  const AdjointMatrix adj = adjoint_representation(q);
  const SpectrumReport r = classify_spectrum(q, inv.tol);

  json clusters = json::array();
  for (const auto& c : r.eigen.clusters) {
    clusters.push_back({{"value_real", c.value.real()},
                        {"value_imag", c.value.imag()},
                        {"algebraic", c.algebraic},
                        {"geometric", c.geometric}});
  }
  json ladders = json::array();
  for (const auto& p : r.pairs) {
    ladders.push_back({{"lambda_plus", p.lambda_plus},
                       {"increment", p.increment},
                       {"norm_constant", p.norm_constant},
                       {"raising", complex_vector_json(p.raising.coeffs())},
                       {"lowering", complex_vector_json(p.lowering.coeffs())}});
  }
  json names = json::array();
  for (std::size_t i = 0; i < q.basis().dimension(); ++i) {
    names.push_back(q.basis().operator_name(OperatorIndex{i}));
  }
  json out = {
      {"model", form_json(q)},
      {"operator_basis", names},
      {"adjoint_matrix", {{"real", matrix_json(adj.entries().real())},
                          {"imag", matrix_json(adj.entries().imag())}}},
      {"eigenvalues", complex_vector_json(r.eigen.eigenvalues)},
      {"eigenvalue_clusters", clusters},
      {"defective", r.eigen.defective},
      {"classification", std::string(to_string(r.classification))},
      {"ground_energy", optional_json(r.ground_energy)},
      {"vacuum_energy", optional_json(r.vacuum_energy)},
      {"lattice_generators", r.lattice_generators},
      {"vacuum_is_standard_gaussian", r.vacuum_is_standard_gaussian},
      {"multiplicity_note", r.multiplicity_note},
      {"ladder_operators", ladders},
      {"gamma_eigenvalues", vector_json(r.gamma_eigenvalues)},
  };
  if (const auto d = dimensionless_of(inv.config.model)) {
    out["dimensionless"] = {{"mu", d->mu}, {"k", d->k}, {"b", d->b},
                            {"energy_scale", d->energy_scale},
                            {"length_scale", d->length_scale}};
    if (r.ground_energy) out["physical_ground_energy"] = d->to_physical_energy(*r.ground_energy);
  }
  return out;
}

std::vector<LatticeLevel> lattice_for(const Invocation& inv, SpectrumReport& r) {
  r = classify_spectrum(inv.form, inv.tol);
  return spectrum_lattice(r, inv.config.options.max_quanta, {}, inv.tol);
}

std::string spectrum_csv(const Invocation& inv) {
  SpectrumReport r;
  const auto levels = lattice_for(inv, r);
  std::ostringstream os;
  for (std::size_t i = 0; i < r.pairs.size(); ++i) os << "n" << i + 1 << ",";
  os << "energy,degeneracy\n";
  for (const auto& l : levels) {
    for (int q : l.quanta) os << q << ",";
    os << format_scientific(l.energy, 9) << "," << degeneracy_text(l) << "\n";
  }
  return os.str();
}

json spectrum_payload(const Invocation& inv) {
  SpectrumReport r;
  const auto levels = lattice_for(inv, r);
  json rows = json::array();
  for (const auto& l : levels) {
    rows.push_back({{"quanta", l.quanta},
                    {"energy", l.energy},
                    {"degeneracy", l.infinite_multiplicity ? json(nullptr) : json(l.degeneracy)},
                    {"infinite_multiplicity", l.infinite_multiplicity}});
  }
  return {{"classification", std::string(to_string(r.classification))},
          {"vacuum_energy", optional_json(r.vacuum_energy)},
          {"lattice_generators", r.lattice_generators},
          {"max_quanta", inv.config.options.max_quanta},
          {"levels", rows}};
}

PhaseScanResult run_scan(const Invocation& inv) {
  const auto shape = dimensionless_of(inv.config.model);
  if (!shape) throw ConfigError("scan needs an 'oscillator-b' or 'physical' model preset");
  const Options& o = inv.config.options;
  if (!o.from || !o.to) throw ConfigError("scan needs --from and --to");
  if (o.steps < 2) throw ConfigError("scan needs at least 2 steps");
  if (!(*o.from < *o.to)) throw ConfigError("scan needs from < to");
  return phase_scan(*shape, *o.from, *o.to, o.steps, inv.tol);
}

json scan_payload(const Invocation& inv) {
  const PhaseScanResult res = run_scan(inv);
  json samples = json::array();
  for (const auto& s : res.samples) {
    samples.push_back({{"b", s.b},
                       {"classification", std::string(to_string(s.classification))},
                       {"generators", s.generators},
                       {"ground_energy", optional_json(s.ground_energy)},
                       {"gamma_min", s.gamma_min}});
  }
  json transitions = json::array();
  for (const auto& t : res.transitions) {
    transitions.push_back({{"b", t.b},
                           {"bracket", {t.bracket_lo, t.bracket_hi}},
                           {"from", std::string(to_string(t.from))},
                           {"to", std::string(to_string(t.to))}});
  }
  return {{"from", *inv.config.options.from},
          {"to", *inv.config.options.to},
          {"steps", inv.config.options.steps},
          {"samples", samples},
          {"transitions", transitions}};
}

std::string scan_csv(const Invocation& inv) {
  const PhaseScanResult res = run_scan(inv);
  std::ostringstream os;
  os << "b,classification,gamma_min,ground_energy\n";
  for (const auto& s : res.samples) {
    os << format_scientific(s.b, 9) << "," << to_string(s.classification) << ","
       << format_scientific(s.gamma_min, 9) << ","
       << (s.ground_energy ? format_scientific(*s.ground_energy, 9) : "") << "\n";
  }
  return os.str();
}

json verify_payload(const Invocation& inv) {
  const std::size_t modes = inv.form.basis().modes();
  int n_max = inv.config.options.n_max.value_or(8);
  if (!inv.config.options.n_max) {
    const FockTruncation probe(modes, 2);
    if (!is_shell_preserving(build_fock_matrix(inv.form, probe), probe)) {
      // largest cutoff up to 20 whose dense matrix stays below ~1800 rows
      n_max = 20;
      while (n_max > 8 && std::pow(n_max + 1.0, static_cast<double>(modes)) > 1800.0) --n_max;
    }
  }
  const FockTruncation t(modes, n_max);
  const SpectrumReport r = classify_spectrum(inv.form, inv.tol);
  const OracleSpectrum o = oracle_spectrum(inv.form, t, inv.tol);
  const ComparisonReport cmp = compare_with_lattice(o, r, inv.tol);
  const double tol_scale = inv.tol.oracle_merge / Tolerances{}.oracle_merge;

  json out = {
      {"n_max", n_max},
      {"dim", t.dim()},
      {"classification", std::string(to_string(r.classification))},
      {"shell_preserving", o.shell_preserving},
      {"shell_exact_upto", o.shell_exact_upto},
      {"vacuum_energy", optional_json(r.vacuum_energy)},
      {"oracle_lowest", o.eigenvalues[0]},
      {"compared_levels", cmp.levels.size()},
      {"max_abs_diff", cmp.max_abs_diff},
      {"degeneracies_agree", cmp.degeneracies_agree},
      {"vacuum_multiplicity", cmp.vacuum_multiplicity},
      {"note", cmp.note},
  };
  json levels = json::array();
  for (const auto& l : cmp.levels) {
    levels.push_back({{"lattice", l.lattice_energy}, {"oracle", l.oracle_energy}, {"abs_diff", l.abs_diff}});
  }
  out["levels"] = levels;

  bool pass = false;
  std::string criterion;
  if (o.shell_preserving && r.vacuum_energy) {
    pass = !cmp.levels.empty() && cmp.max_abs_diff <= kShellExactTolerance * tol_scale &&
           cmp.degeneracies_agree;
    criterion = "complete shells: max_abs_diff <= 1e-8 and degeneracy counts agree";
    if (r.classification == SpectrumClass::CriticalInfiniteMultiplicity) {
      out["multiplicity_grows_with_truncation"] = cmp.vacuum_multiplicity == n_max + 1;
      pass = pass && cmp.vacuum_multiplicity == n_max + 1;
      criterion += "; vacuum multiplicity equals n_max + 1";
    }
    if (r.classification == SpectrumClass::UnboundedLattice) {
      out["note"] = cmp.note + "; the oracle floor drops as n_max grows";
    }
  } else if (r.classification == SpectrumClass::BoundedBelowDiscrete) {
    const auto lattice = lowest_lattice_energies(r, kLowestLevels);
    double worst = 0.0;
    for (std::size_t i = 0; i < kLowestLevels && i < static_cast<std::size_t>(o.eigenvalues.size()); ++i) {
      worst = std::max(worst, std::abs(lattice[i] - o.eigenvalues[static_cast<Eigen::Index>(i)]));
    }
    out["lowest_10_max_abs_diff"] = worst;
    pass = o.eigenvalues.size() >= static_cast<Eigen::Index>(kLowestLevels) &&
           worst <= kTruncatedTolerance * tol_scale;
    criterion = "truncated oracle: lowest 10 levels within 1e-6";
  } else {
    criterion = "no lattice comparison possible for this classification";
  }
  out["criterion"] = criterion;
  out["status"] = pass ? "PASS" : "FAIL";
  return out;
}

std::string rational_text(const Rational& r) { return quadham::to_string(r); }

json wavefunction_payload(const Invocation& inv) {
  const auto b = symmetric_family_parameter(inv.form);
  if (!b) throw ConfigError("wavefunction needs a member of the symmetric oscillator family");
  const int m = inv.config.options.m;
  const int n = inv.config.options.n;
  if (m < 0 || n < 0) throw ConfigError("--m and --n must be non-negative");
  const PolyGaussian psi = build_eigenfunction(symmetric_ladder_operator(4),
                                               symmetric_ladder_operator(2),
                                               static_cast<unsigned>(m), static_cast<unsigned>(n));
  auto exact_eigenvalue = [&](const QuadraticForm& op) -> json {
    const auto ratio = eigen_ratio(apply_quadratic_form(op, psi), psi);
    if (!ratio || ratio->im != 0) throw ComputationError("state is not an exact eigenfunction");
    return {{"exact", rational_text(ratio->re)}, {"value", ratio->re.convert_to<double>()}};
  };
  json terms = json::array();
  for (const auto& [e, c] : psi.terms()) {
    terms.push_back({{"exponents", e}, {"re", rational_text(c.re)}, {"im", rational_text(c.im)}});
  }
  return {{"m", m},
          {"n", n},
          {"b", *b},
          {"polynomial", psi.to_string()},
          {"normalization", {{"radicand", rational_text(psi.radicand())},
                             {"pi_power", rational_text(psi.pi_power())}}},
          {"terms", terms},
          {"energy", exact_eigenvalue(inv.form)},
          {"h0", exact_eigenvalue(isotropic_oscillator())},
          {"lz", exact_eigenvalue(angular_momentum())}};
}

json options_json(const Options& o) {
  json out = {{"max_quanta", o.max_quanta}, {"steps", o.steps},
              {"m", o.m}, {"n", o.n}, {"tolerance_scale", o.tolerance_scale}};
  if (!o.format.empty()) out["format"] = o.format;
  if (o.n_max) out["n_max"] = *o.n_max;
  if (o.from) out["from"] = *o.from;
  if (o.to) out["to"] = *o.to;
  if (o.seed) out["seed"] = *o.seed;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_tolerance_scale(const std::string& raw) {
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size() || !std::isfinite(v) || v <= 0.0) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("QUADHAM_TOL_SCALE must be a positive number, got '" + raw + "'");
  }
}

}  // namespace

AnalysisConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(root, {"model", "options"}, "config");
  if (!root.contains("model") || !root.at("model").is_object()) {
    throw ConfigError("config needs a 'model' object");
  }
  AnalysisConfig cfg;
  cfg.model = root.at("model");
  const bool preset = cfg.model.contains("preset");
  const bool explicit_form = cfg.model.contains("gamma");
  if (preset == explicit_form) {
    throw ConfigError("model needs exactly one of 'preset' or an explicit 'gamma'");
  }
  if (preset) {
    reject_unknown_keys(cfg.model, {"preset", "params"}, "model");
    if (!cfg.model.at("preset").is_string()) throw ConfigError("'preset' must be a string");
  } else {
    reject_unknown_keys(cfg.model, {"K", "gamma", "offset"}, "model");
  }

  const json opts = root.value("options", json::object());
  if (!opts.is_object()) throw ConfigError("'options' must be an object");
  reject_unknown_keys(opts, {"max_quanta", "n_max", "format", "tolerance_scale", "from", "to", "steps",
                             "m", "n", "seed"},
                      "options");
  Options& o = cfg.options;
  if (opts.contains("max_quanta")) o.max_quanta = static_cast<int>(integer_at(opts, "max_quanta", 0));
  if (opts.contains("n_max")) o.n_max = static_cast<int>(integer_at(opts, "n_max", 0));
  if (opts.contains("steps")) o.steps = static_cast<int>(integer_at(opts, "steps", 2));
  if (opts.contains("m")) o.m = static_cast<int>(integer_at(opts, "m", 0));
  if (opts.contains("n")) o.n = static_cast<int>(integer_at(opts, "n", 0));
  if (opts.contains("seed")) o.seed = static_cast<std::uint64_t>(integer_at(opts, "seed", 0));
  if (opts.contains("from")) o.from = number_at(opts, "from");
  if (opts.contains("to")) o.to = number_at(opts, "to");
  if (opts.contains("tolerance_scale")) {
    o.tolerance_scale = number_at(opts, "tolerance_scale");
    if (o.tolerance_scale <= 0.0) throw ConfigError("'tolerance_scale' must be positive");
  }
  if (opts.contains("format")) {
    if (!opts.at("format").is_string()) throw ConfigError("'format' must be a string");
    o.format = opts.at("format").get<std::string>();
  }
  return cfg;
}

QuadraticForm model_from_config(const json& model, const Tolerances& tol) {
  try {
    if (!model.contains("preset")) {
      if (!model.contains("K")) throw ConfigError("explicit model needs 'K'");
      const auto k = static_cast<std::size_t>(integer_at(model, "K", 1));
      const json& g = model.at("gamma");
      const auto n = static_cast<Eigen::Index>(2 * k);
      if (!g.is_array() || static_cast<Eigen::Index>(g.size()) != n) {
        throw ConfigError("'gamma' must be a " + std::to_string(n) + "x" + std::to_string(n) + " array");
      }
      Eigen::MatrixXd gamma(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = g.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
          throw ConfigError("'gamma' must be square with side 2K");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          const json& v = row.at(static_cast<std::size_t>(j));
          if (!v.is_number()) throw ConfigError("'gamma' entries must be numbers");
          gamma(i, j) = v.get<double>();
        }
      }
      if (!gamma.allFinite()) throw ConfigError("'gamma' entries must be finite");
      return quadratic_form_from_matrix(PhaseSpaceBasis(k), gamma, number_at(model, "offset", 0.0), tol);
    }

    const std::string preset = model.at("preset").get<std::string>();
    if (preset == "oscillator-b" || preset == "physical") return build_model(*dimensionless_of(model));
    if (preset == "sb") {
      const json params = params_of(model, {"B"});
      return sb_operator(number_at(params, "B"));
    }
    if (preset == "random-pd") {
      const json params = params_of(model, {"K", "seed"});
      const auto k = params.contains("K") ? static_cast<std::size_t>(integer_at(params, "K", 1)) : 2;
      const auto seed = params.contains("seed") ? static_cast<std::uint64_t>(integer_at(params, "seed", 0)) : 0;
      return random_positive_definite_form(k, seed);
    }
    throw ConfigError("unknown preset '" + preset + "'");
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env) {
  CLI::App app{"Spectral analysis of quadratic quantum Hamiltonians", kToolName};
  app.require_subcommand(1);

  std::string config_path;
  std::string format;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_quanta;
  std::optional<int> n_max;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<int> steps;
  std::optional<int> m;
  std::optional<int> n;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Model/options file (JSON)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "Write output to this file instead of stdout");
    sub->add_option("--seed", seed, "Seed of the random positive-definite model");
    sub->add_option("--max-quanta", max_quanta, "Highest total quanta in the lattice")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--n-max", n_max, "Per-mode Fock cutoff")->check(CLI::NonNegativeNumber);
    sub->add_option("--from", from, "Scan start");
    sub->add_option("--to", to, "Scan end");
    sub->add_option("--steps", steps, "Scan samples")->check(CLI::Range(2, 1000000));
    sub->add_option("--m", m, "Quanta of the Z4 mode")->check(CLI::NonNegativeNumber);
    sub->add_option("--n", n, "Quanta of the Z2 mode")->check(CLI::NonNegativeNumber);
  };
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"analyze", "Adjoint matrix, frequencies, ladder operators and classification"},
      {"spectrum", "Ladder-lattice energies and degeneracies"},
      {"scan", "Classification sweep over b with transition bisection"},
      {"verify", "Compare the lattice with the truncated Fock-basis oracle"},
      {"wavefunction", "Closed-form eigenfunction psi_mn of the symmetric oscillator"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

  std::vector<const char*> argv = {kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Invocation inv{command, {}, {}, QuadraticForm(PhaseSpaceBasis(1), Eigen::MatrixXd::Zero(2, 2))};
    if (!config_path.empty()) {
      inv.config = parse_config(read_file(config_path));
    } else if (seed && command == "verify") {
      inv.config.model = {{"preset", "random-pd"}, {"params", {{"K", 2}, {"seed", *seed}}}};
    } else {
      throw ConfigError("--config is required");
    }
    Options& o = inv.config.options;
    if (max_quanta) o.max_quanta = *max_quanta;
    if (n_max) o.n_max = *n_max;
    if (from) o.from = *from;
    if (to) o.to = *to;
    if (steps) o.steps = *steps;
    if (m) o.m = *m;
    if (n) o.n = *n;
    if (!format.empty()) o.format = format;
    if (seed) {
      if (!is_random_model(inv.config.model)) throw ConfigError("--seed applies to 'random-pd' models");
      inv.config.model["params"]["seed"] = *seed;
      o.seed = *seed;
    }
    if (o.format.empty()) o.format = command == "spectrum" ? "csv" : "json";
    if (o.format != "json" && o.format != "csv") throw ConfigError("format must be json or csv");
    if (o.format == "csv" && command != "spectrum" && command != "scan") {
      throw ConfigError("csv output is available for spectrum and scan only");
    }

    double scale = o.tolerance_scale;
    if (env.tolerance_scale) scale *= parse_tolerance_scale(*env.tolerance_scale);
    inv.tol = Tolerances{}.scaled(scale);
    inv.form = model_from_config(inv.config.model, inv.tol);

    std::string text;
    if (o.format == "csv") {
      text = command == "spectrum" ? spectrum_csv(inv) : scan_csv(inv);
    } else {
      json results;
      if (command == "analyze") results = analyze_payload(inv);
      else if (command == "spectrum") results = spectrum_payload(inv);
      else if (command == "scan") results = scan_payload(inv);
      else if (command == "verify") results = verify_payload(inv);
      else results = wavefunction_payload(inv);
      const json envelope = {
          {"tool", kToolName},
          {"version", kVersion},
          {"timestamp", env.timestamp},
          {"command", command},
          {"config", {{"model", inv.config.model}, {"options", options_json(o)}}},
          {"results", results},
      };
      text = canonical_dump(envelope);
    }

    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream file(out_path);
      if (!file) throw ConfigError("cannot write '" + out_path + "'");
      file << text;
    }
    return kSuccess;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidInput& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << "\n";
    return kComputationError;
  }
}

}  // namespace quadham::cli
