#include "campana/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "campana/counting.hpp"
#include "campana/densities.hpp"
#include "campana/orbifold.hpp"
#include "campana/run_config.hpp"
#include "format.hpp"

namespace campana::cli {

namespace {

using nlohmann::json;

const std::vector<double> kKltGrid{100, 141, 200, 283, 400, 566, 800};
const std::vector<double> kDltGrid{1e4, 1e5, 1e6};

constexpr const char* kFooter =
    "CSV output (count, verify): columns T,N,predicted,fitted,rel_err where predicted is the\n"
    "Tauberian prediction c/(a (b-1)!) T^a (log T)^(b-1), fitted uses the least-squares constant\n"
    "and rel_err = N/predicted - 1. CSV output (sweep): columns m,T,N,predicted,rel_err.\n"
    "Config files hold `key = value` lines (keys: model m S lambda T prime_bound s format threads\n"
    "output prime ms slope_tol const_tol method depth); flags override the file.\n"
    "Thread count: --threads, then the config file, then CAMPANA_THREADS, then all cores.\n"
    "Exit codes: 0 ok, 2 validation error, 3 verify tolerance exceeded.";

struct Flags {
  std::string config_path;
  std::map<std::string, std::string> values;  // config key -> flag text
  bool formal = false;
  bool regularized = false;
  bool timings = false;
  bool oracle = false;
};

void add_config_options(CLI::App& app, Flags& flags) {
  struct OptionDef {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const OptionDef specs[] = {
      {"--model", "model", "p3-heisenberg | p2-unipotent | p1-vector"},
      {"--m", "m", "multiplicity m >= 1 or 'infinity' (epsilon = 1)"},
      {"--S", "S", "places, e.g. inf,2,3"},
      {"--lambda", "lambda", "L = lambda D (rational); default 1, or kappa-1 for m = infinity"},
      {"--T", "T", "comma-separated height bounds"},
      {"--prime-bound", "prime_bound", "largest prime in Euler products"},
      {"--s", "s", "comma-separated evaluation points for densities"},
      {"--format", "format", "json | csv"},
      {"--threads", "threads", "worker threads (0 = all cores)"},
      {"--output", "output", "write the report to this file"},
      {"--prime", "prime", "prime for local factors"},
      {"--ms", "ms", "comma-separated multiplicities for sweep"},
      {"--slope-tol", "slope_tol", "verify: allowed |slope - a|"},
      {"--const-tol", "const_tol", "verify: allowed relative constant error"},
      {"--method", "method", "count: fast | brute"},
      {"--depth", "depth", "series depth for --formal"},
  };
  for (const auto& s : specs) {
    app.add_option_function<std::string>(
        s.flag, [&flags, key = std::string(s.key)](const std::string& v) { flags.values[key] = v; }, s.help);
  }
  app.add_option("--config", flags.config_path, "key = value configuration file");
  app.add_flag("--formal", flags.formal, "densities: dump the local factor in t with exact coefficients");
  app.add_flag("--regularized", flags.regularized, "densities: multiply by (1 - t^m)");
  app.add_flag("--oracle", flags.oracle, "densities --formal: also print the brute-force oracle series");
  app.add_flag("--timings", flags.timings, "count/verify: include wall-clock seconds per T");
}

RunConfig load_config(const Flags& flags) {
  RunConfig cfg;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::invalid_argument("cannot read config file " + flags.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = RunConfig::parse(ss.str());
  }
  for (const auto& [key, value] : flags.values) cfg.set(key, value);
  if (!cfg.threads) {
    if (const char* env = std::getenv("CAMPANA_THREADS")) {
      RunConfig probe;
      probe.set("threads", env);
      cfg.threads = probe.threads;
    }
  }
  return cfg;
}

unsigned threads_of(const RunConfig& cfg) { return cfg.threads.value_or(0); }

bool is_dlt(const OrbifoldModel& model) {
  for (const auto& D : model.divisors) {
    if (!D.m) return true;
  }
  return false;
}

std::vector<double> grid_of(const RunConfig& cfg, const OrbifoldModel& model) {
  if (!cfg.T.empty()) return cfg.T;
  return is_dlt(model) ? kDltGrid : kKltGrid;
}

json rationals_json(const std::vector<Rational>& xs) {
  auto arr = json::array();
  for (const auto& x : xs) arr.push_back(x.str());
  return arr;
}

json local_factor_json(const OrbifoldModel& model, const LocalFactor& f, unsigned depth) {
  json j;
  j["model"] = model.name;
  j["m"] = multiplicity_str(model.divisors.front().m);
  j["prime"] = f.substitution.prime;
  j["t"] = std::to_string(f.substitution.prime) + "^-(" + f.substitution.lambda.str() + "*s - " +
           std::to_string(f.substitution.shift) + ")";
  j["numerator"] = rationals_json(f.numerator.coeffs());
  j["denominator"] = rationals_json(f.denominator.coeffs());
  j["expression"] = "(" + f.numerator.str() + ") / (" + f.denominator.str() + ")";
  j["series"] = rationals_json(f.series(depth));
  return j;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) throw std::invalid_argument("cannot write " + cfg.output);
  file << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_json(const RunConfig& cfg, const char* command) {
  if (cfg.format != "json") throw std::invalid_argument(std::string(command) + " only supports json output");
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
  require_json(cfg, "predict");
  const OrbifoldModel model = builtin_model(cfg.model, cfg.m, cfg.lambda);
  const Invariants inv = predict_invariants(model, cfg.S);
  json j;
  j["a"] = fmt12(inv.a_bar.to_double());
  j["a_exact"] = inv.a_bar.str();
  j["b"] = inv.b_bar;
  if (inv.b_prime) j["b_prime"] = *inv.b_prime;
  j["A_eps"] = inv.A_eps;
  emit(cfg, out, dump(j));
  return kExitOk;
}

int cmd_densities(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
  require_json(cfg, "densities");
  const OrbifoldModel model = builtin_model(cfg.model, cfg.m, cfg.lambda);
  if (flags.formal) {
    if (!cfg.prime) throw std::invalid_argument("--formal needs --prime");
    const LocalFactor f = flags.regularized ? regularized_local_factor(model, *cfg.prime, cfg.S)
                                            : local_density_closed(model, *cfg.prime);
    json j = local_factor_json(model, f, cfg.depth);
    if (flags.oracle && !flags.regularized) j["oracle"] = rationals_json(local_density_oracle(model, *cfg.prime, cfg.depth));
    emit(cfg, out, dump(j));
    return kExitOk;
  }
  std::vector<double> points = cfg.s;
  if (points.empty()) points.push_back(predict_invariants(model, cfg.S).a_bar.to_double());
  json result = json::array();
  for (double s : points) result.push_back(euler_product(model, s, cfg.prime_bound, cfg.S, threads_of(cfg)).to_json());
  emit(cfg, out, dump(result.size() == 1 ? result[0] : result));
  return kExitOk;
}

int cmd_constant(const RunConfig& cfg, std::ostream& out) {
  require_json(cfg, "constant");
  const OrbifoldModel model = builtin_model(cfg.model, cfg.m, cfg.lambda);
  json j = leading_constant(model, cfg.S, cfg.prime_bound, threads_of(cfg)).to_json();
  j["model"] = model.name;
  j["m"] = multiplicity_str(cfg.m);
  j["S"] = cfg.S.str();
  emit(cfg, out, dump(j));
  return kExitOk;
}

CountReport make_report(const RunConfig& cfg, const Flags& flags, const OrbifoldModel& model) {
  VerifyOptions opt;
  opt.prime_bound = cfg.prime_bound;
  opt.threads = threads_of(cfg);
  opt.timings = flags.timings;
  CountReport rep = verify_asymptotic(model, cfg.S, grid_of(cfg, model), opt);
  if (cfg.method == "brute") {
    for (auto& row : rep.rows) {
      const auto n = enumerate_campana(model, row.T, cfg.S);
      if (BigInt(n) != row.N) throw std::logic_error("brute-force and fast counts disagree");
    }
  }
  return rep;
}

int cmd_count(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
  const OrbifoldModel model = builtin_model(cfg.model, cfg.m, cfg.lambda);
  const CountReport rep = make_report(cfg, flags, model);
  emit(cfg, out, cfg.format == "csv" ? rep.to_csv() : dump(rep.to_json()));
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const Flags& flags, std::ostream& out, std::ostream& err) {
  const OrbifoldModel model = builtin_model(cfg.model, cfg.m, cfg.lambda);
  const CountReport rep = make_report(cfg, flags, model);
  if (rep.rows.size() < 3) throw std::invalid_argument("verify needs at least 3 values of T");
  const unsigned m = cfg.m.value_or(0);
  const double slope_tol = cfg.slope_tol.value_or(default_slope_tolerance(rep.dlt, m));
  const double const_tol = cfg.const_tol.value_or(default_constant_tolerance(rep.dlt, m));
  const double slope_target = rep.a_bar.to_double();
  const bool check_slope = rep.b == 1;
  const bool slope_ok = !check_slope || std::abs(rep.slope - slope_target) <= slope_tol;
  const bool const_ok = std::abs(rep.rel_err) <= const_tol;

  json checks;
  if (check_slope) {
    checks["slope"] = {{"value", fmt12(rep.slope)}, {"target", fmt12(slope_target)}, {"tol", fmt12(slope_tol)},
                       {"pass", slope_ok}};
  }
  checks["constant"] = {{"fitted", fmt12(rep.c_hat)}, {"predicted", fmt12(rep.tauberian)},
                        {"rel_err", fmt12(rep.rel_err)}, {"tol", fmt12(const_tol)}, {"pass", const_ok}};
  const bool pass = slope_ok && const_ok;
  if (cfg.format == "csv") {
    emit(cfg, out, rep.to_csv());
    err << "verify: " << (pass ? "pass" : "FAIL") << " " << checks.dump() << "\n";
  } else {
    json j = rep.to_json();
    j["checks"] = checks;
    j["pass"] = pass;
    emit(cfg, out, dump(j));
  }
  return pass ? kExitOk : kExitTolerance;
}

int cmd_sweep(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
  std::vector<Multiplicity> ms = cfg.ms;
  if (ms.empty()) ms = {1, 2, 3};
  json cells = json::array();
  std::ostringstream csv;
  csv << "m,T,N,predicted,rel_err\n";
  for (const auto& m : ms) {
    const OrbifoldModel model = builtin_model(cfg.model, m, cfg.lambda);
    const CountReport rep = make_report(cfg, flags, model);
    for (const auto& row : rep.rows) {
      json cell;
      cell["m"] = multiplicity_str(m);
      cell["T"] = fmt12(row.T);
      cell["N"] = row.N.str();
      cell["a"] = fmt12(rep.a_bar.to_double());
      cell["b"] = rep.b;
      cell["predicted"] = fmt12(row.predicted);
      cell["rel_err"] = fmt12(row.rel_err);
      cells.push_back(cell);
      csv << multiplicity_str(m) << ',' << str12(row.T) << ',' << row.N.str() << ',' << str12(row.predicted) << ','
          << str12(row.rel_err) << '\n';
    }
  }
  emit(cfg, out, cfg.format == "csv" ? csv.str() : dump(cells));
  return kExitOk;
}

}  // namespace

double default_slope_tolerance(bool dlt, unsigned m) { return dlt || m == 1 ? 0.10 : 0.15; }

double default_constant_tolerance(bool dlt, unsigned m) {
  if (dlt) return 0.05;
  return m == 1 ? 0.10 : 0.20;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Campana points of bounded height on Heisenberg compactifications", "campana"};
  app.footer(kFooter);
  app.require_subcommand(1);
  Flags flags;
  add_config_options(app, flags);
  const char* names[][2] = {
      {"predict", "log-Manin invariants a, b, b'"},
      {"count", "counts N(T) over a grid of height bounds"},
      {"densities", "Euler products or a single local factor (--formal)"},
      {"constant", "leading constant c with tail bound"},
      {"verify", "counts, fit and tolerance checks (exit 3 on failure)"},
      {"sweep", "one row per (m, T) cell"},
  };
  for (const auto& [name, help] : names) app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> storage{"campana"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitValidation;
  }

  try {
    const RunConfig cfg = load_config(flags);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "predict") return cmd_predict(cfg, out);
    if (cmd == "densities") return cmd_densities(cfg, flags, out);
    if (cmd == "constant") return cmd_constant(cfg, out);
    if (cmd == "count") return cmd_count(cfg, flags, out);
    if (cmd == "verify") return cmd_verify(cfg, flags, out, err);
    if (cmd == "sweep") return cmd_sweep(cfg, flags, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace campana::cli
