#include "auditopt/cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "auditopt/core/strategy.hpp"
#include "auditopt/errors.hpp"
#include "auditopt/io/json_io.hpp"
#include "auditopt/linear/linear.hpp"
#include "auditopt/multistep/audit.hpp"
#include "auditopt/sim/sim.hpp"
#include "auditopt/threshold/threshold.hpp"

namespace auditopt::cli {

namespace {

using io::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d{
      {"R", "4"},         {"c", "1"},         {"alpha", "0.5"},
      {"grid-step", "0.001"},                 {"test", "threshold"},
      {"delta", "1"},     {"sigma", "1"},     {"b", "0"},
      {"p", "1"},         {"episodes", "100000"},
      {"seed", "0"},      {"mode", "static"}, {"epsilon", "0.01"},
      {"delta-range", "0:3:0.1"},             {"sigma-range", "0.1:3:0.1"},
      {"mu0", "1"},       {"s0", "1.5"},      {"k-list", "0,1,2,3,4,5"},
  };
  return d;
}

// Flag values, then config-file values, then defaults. Every value read is echoed.
class Resolver {
 public:
  Resolver(const CLI::App& app, const std::map<std::string, std::string>& flags) : app_(app), flags_(flags) {
    if (app_.count("--config")) load_config(flags_.at("config"));
  }

  std::optional<std::string> raw(const std::string& key) const {
    if (app_.count("--" + key)) return flags_.at(key);
    for (const std::string& k : {key, underscored(key)}) {
      if (!file_.contains(k)) continue;
      const json& v = file_.at(k);
      if (v.is_string()) return v.get<std::string>();
      return v.dump();
    }
    if (auto it = defaults().find(key); it != defaults().end()) return it->second;
    return std::nullopt;
  }

  bool has(const std::string& key) const { return raw(key).has_value(); }

  std::string str(const std::string& key) {
    const auto v = raw(key);
    if (!v) throw ConfigError(key + ": required");
    echo_[key] = *v;
    return *v;
  }

  double num(const std::string& key) {
    const auto v = raw(key);
    if (!v) throw ConfigError(key + ": required");
    const double d = parse_double(key, *v);
    echo_[key] = d;
    return d;
  }

  std::uint64_t count(const std::string& key) {
    const auto v = raw(key);
    if (!v) throw ConfigError(key + ": required");
    std::size_t used = 0;
    unsigned long long n = 0;
    try {
      if (!v->empty() && v->front() == '-') throw std::invalid_argument("negative");
      n = std::stoull(*v, &used);
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected a non-negative integer, got '" + *v + "'");
    }
    if (used != v->size()) throw ConfigError(key + ": expected a non-negative integer, got '" + *v + "'");
    echo_[key] = n;
    return n;
  }

  void set_echo(const std::string& key, json v) { echo_[key] = std::move(v); }
  const json& echo() const { return echo_; }

  static double parse_double(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected a number, got '" + s + "'");
    }
    if (used != s.size()) throw ConfigError(key + ": expected a number, got '" + s + "'");
    return d;
  }

 private:
  static std::string underscored(std::string k) {
    for (char& ch : k)
      if (ch == '-') ch = '_';
    return k;
  }

  void load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("config: " + std::string(e.what()));
    }
    if (j.is_object() && j.contains("config") && j.at("config").is_object()) j = j.at("config");
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    file_ = std::move(j);
  }

  const CLI::App& app_;
  const std::map<std::string, std::string>& flags_;
  json file_ = json::object();
  json echo_ = json::object();
};

struct Command {
  explicit Command(CLI::App* a) : app(a) {}
  CLI::App* app;
  std::map<std::string, std::string> flags;
};

void add_flags(Command& cmd, const std::vector<std::pair<std::string, std::string>>& keys) {
  for (const auto& [key, help] : keys) cmd.app->add_option("--" + key, cmd.flags[key], help);
}

const std::vector<std::pair<std::string, std::string>> kCommon{
    {"R", "revenue on passing"},
    {"c", "marginal cost of effort"},
    {"alpha", "discount factor in (0, 1)"},
    {"out", "output file (stdout when absent)"},
    {"config", "JSON config file; flags override it"},
    {"grid-step", "effort grid step"},
    {"x-max", "effort grid upper end (default R/c + 1)"},
};

const std::vector<std::pair<std::string, std::string>> kTestFlags{
    {"test", "threshold | linear | constant"},
    {"delta", "threshold test: threshold"},
    {"sigma", "threshold test: noise standard deviation"},
    {"b", "linear test: entrance value"},
    {"p", "constant test: pass probability"},
};

core::VendorParams params_of(Resolver& r) {
  core::VendorParams p{r.num("R"), r.num("c"), r.num("alpha")};
  if (!(p.R > 0.0)) throw ConfigError("R: must be positive");
  if (!(p.c > 0.0)) throw ConfigError("c: must be positive");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw ConfigError("alpha: must lie in (0, 1)");
  return p;
}

core::GridSpec grid_of(Resolver& r, const core::VendorParams& p) {
  core::GridSpec g = core::GridSpec::for_params(p, r.num("grid-step"));
  if (r.has("x-max")) g.x_max = r.num("x-max");
  else r.set_echo("x-max", g.x_max);
  if (!(g.step > 0.0)) throw ConfigError("grid-step: must be positive");
  if (!(g.x_max >= p.rosi())) throw ConfigError("x-max: must be at least R/c");
  return g;
}

core::TestFunction test_of(Resolver& r) {
  const std::string type = r.str("test");
  if (type == "threshold") {
    const double delta = r.num("delta");
    const double sigma = r.num("sigma");
    if (!(sigma > 0.0)) throw ConfigError("sigma: must be positive");
    return core::TestFunction::threshold(delta, sigma);
  }
  if (type == "linear") {
    const double b = r.num("b");
    if (!(b >= 0.0)) throw ConfigError("b: must be non-negative");
    return core::TestFunction::linear(b);
  }
  if (type == "constant") {
    const double p = r.num("p");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p: must lie in [0, 1]");
    return core::TestFunction::constant(p);
  }
  throw ConfigError("test: unknown type '" + type + "'");
}

multistep::Audit audit_of(Resolver& r) {
  const std::string source = r.str("audit");
  json j;
  try {
    if (!source.empty() && source.front() == '{') {
      j = json::parse(source);
    } else {
      std::ifstream in(source);
      if (!in) throw ConfigError("audit: cannot open '" + source + "'");
      in >> j;
    }
    return io::audit_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("audit: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("audit: " + std::string(e.what()));
  }
}

std::vector<double> range_of(Resolver& r, const std::string& key) {
  const std::string s = r.str(key);
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(Resolver::parse_double(key, item));
  if (parts.size() != 3) throw ConfigError(key + ": expected lo:hi:step, got '" + s + "'");
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0)) throw ConfigError(key + ": step must be positive");
  if (!(hi >= lo)) throw ConfigError(key + ": empty range");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::vector<std::size_t> k_list_of(Resolver& r) {
  const std::string s = r.str("k-list");
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = Resolver::parse_double("k-list", item);
    if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError("k-list: entries must be non-negative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ConfigError("k-list: empty");
  return out;
}

sim::Schedule schedule_of(Resolver& r) {
  const std::string s = r.str("schedule");
  std::vector<std::pair<std::size_t, double>> switches;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("schedule: expected t:x pairs, got '" + item + "'");
    const double t = Resolver::parse_double("schedule", item.substr(0, colon));
    const double x = Resolver::parse_double("schedule", item.substr(colon + 1));
    if (!(t >= 0.0) || t != std::floor(t)) throw ConfigError("schedule: step '" + item + "' is not an integer");
    switches.emplace_back(static_cast<std::size_t>(t), x);
  }
  try {
    return sim::Schedule::from_switches(switches);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("schedule: " + std::string(e.what()));
  }
}

json header(const std::string& command, const Resolver& r) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command}, {"config", r.echo()}};
}

// CSV goes to --out (with a JSON sidecar) or to stdout.
class Output {
 public:
  Output(Command& cmd, Resolver& r, std::ostream& stdout_) : stdout_(stdout_) {
    if (cmd.app->count("--out") || r.raw("out")) {
      path_ = *r.raw("out");
      file_.open(path_);
      if (!file_) throw ConfigError("out: cannot open '" + path_ + "'");
    }
  }
  std::ostream& stream() { return path_.empty() ? stdout_ : file_; }

  void sidecar(const json& meta) {
    if (path_.empty()) return;
    std::ofstream side(path_ + ".json");
    if (!side) throw ConfigError("out: cannot write '" + path_ + ".json'");
    side << meta.dump(2) << '\n';
  }

 private:
  std::ostream& stdout_;
  std::string path_;
  std::ofstream file_;
};

int cmd_g_sweep(Command& cmd, std::ostream& out) {
  Resolver r(*cmd.app, cmd.flags);
  const auto params = params_of(r);
  const auto grid = grid_of(r, params);
  const auto test = test_of(r);
  Output o(cmd, r, out);
  io::CsvWriter csv(o.stream(), {"x", "G", "CA"});
  for (double x : grid.points())
    csv.row({x, core::g_value(test, params, x), core::waiver_cost(test, params, x)});
  const auto sol = core::optimal_strategy(test, params, grid, core::default_tie_tol(params));
  json meta = header("g-sweep", r);
  meta["test"] = io::to_json(test);
  meta["optimal"] = io::to_json(sol);
  o.sidecar(meta);
  return 0;
}

int cmd_optimal(Command& cmd, std::ostream& out) {
  Resolver r(*cmd.app, cmd.flags);
  const auto params = params_of(r);
  const auto grid = grid_of(r, params);
  const auto test = test_of(r);
  Output o(cmd, r, out);
  const auto sol = core::optimal_strategy(test, params, grid, core::default_tie_tol(params));
  json j = header("optimal", r);
  j["test"] = io::to_json(test);
  j.update(io::to_json(sol));
  json classes = json::array({core::to_string(core::StrategyClass::OneAndDone)});
  if (sol.maximizers.size() > 1) classes.push_back(core::to_string(core::StrategyClass::Incremental));
  j["strategy_classes"] = classes;
  o.stream() << j.dump(2) << '\n';
  return 0;
}

int cmd_coverage(Command& cmd, std::ostream& out) {
  Resolver r(*cmd.app, cmd.flags);
  const auto params = params_of(r);
  const auto deltas = range_of(r, "delta-range");
  const auto sigmas = range_of(r, "sigma-range");
  const double mu0 = r.num("mu0");
  const double s0 = r.num("s0");
  threshold::GammaBarOptions opts;
  opts.grid_step = r.num("grid-step");
  if (!(opts.grid_step > 0.0)) throw ConfigError("grid-step: must be positive");
  for (double s : sigmas)
    if (!(s > 0.0)) throw ConfigError("sigma-range: sigma must be positive");
  if (!(s0 >= 0.0)) throw ConfigError("s0: must be non-negative");

  Output o(cmd, r, out);
  const auto cells = threshold::coverage_grid(deltas, sigmas, mu0, s0, params, opts);
  io::CsvWriter csv(o.stream(), {"delta", "sigma", "gamma_bar"});
  for (const auto& cell : cells) csv.row({cell.delta, cell.sigma, cell.gamma_bar});
  json meta = header("coverage", r);
  meta["deltas"] = deltas;
  meta["sigmas"] = sigmas;
  o.sidecar(meta);
  return 0;
}

int cmd_design(Command& cmd, std::ostream& out) {
  Resolver r(*cmd.app, cmd.flags);
  const auto params = params_of(r);
  const std::string mode = r.str("mode");
  linear::LinearDesign d;
  if (mode == "static") {
    d = linear::design_static(params);
  } else if (mode == "easier-first") {
    d = linear::design_dynamic_easier_first(params);
  } else if (mode == "harder-first") {
    d = linear::design_dynamic_harder_first(params, r.num("epsilon"));
  } else {
    throw ConfigError("mode: expected static, easier-first or harder-first, got '" + mode + "'");
  }
  Output o(cmd, r, out);
  json j = header("design", r);
  j.update(io::to_json(d));
  o.stream() << j.dump(2) << '\n';
  return 0;
}

int cmd_approx(Command& cmd, std::ostream& out) {
  Resolver r(*cmd.app, cmd.flags);
  const auto params = params_of(r);
  const auto grid = grid_of(r, params);
  const auto audit = audit_of(r);
  const auto ks = k_list_of(r);
  Output o(cmd, r, out);
  const auto study = multistep::approximation_study(audit, params, grid, ks);
  io::CsvWriter csv(o.stream(), {"k", "measured_error", "bound", "maximizer"});
  json rows = json::array();
  for (const auto& row : study.rows) {
    csv.row({static_cast<double>(row.k), row.measured_error, row.bound, row.maximizer});
    json jr{{"k", row.k}, {"unique_maximizer", row.unique_maximizer}, {"within_bound", row.within_bound}};
    if (row.stated_bound) jr["stated_bound"] = *row.stated_bound;
    rows.push_back(jr);
  }
  json meta = header("approx", r);
  meta["audit"] = io::to_json(audit);
  meta["reference_residual"] = study.reference_residual;
  meta["reference_maximizer"] = study.reference_maximizer;
  meta["reference_unique"] = study.reference_unique;
  meta["rows"] = rows;
  o.sidecar(meta);
  return 0;
}

int cmd_simulate(Command& cmd, std::ostream& out) {
  Resolver r(*cmd.app, cmd.flags);
  const auto params = params_of(r);
  multistep::Audit audit;
  if (r.has("audit")) audit = audit_of(r);
  else audit.tail = test_of(r);
  const auto schedule = schedule_of(r);
  sim::SimOptions opts;
  opts.episodes = r.count("episodes");
  if (opts.episodes < 1) throw ConfigError("episodes: must be at least 1");
  opts.seed = r.count("seed");
  if (r.has("horizon-eps")) {
    opts.horizon_eps = r.num("horizon-eps");
    if (!(opts.horizon_eps > 0.0)) throw ConfigError("horizon-eps: must be positive");
  } else {
    opts.horizon_eps = 1e-9 * params.R;
    r.set_echo("horizon-eps", opts.horizon_eps);
  }
  Output o(cmd, r, out);
  const auto res = sim::simulate(schedule, audit, params, opts);
  json j = header("simulate", r);
  j["audit"] = io::to_json(audit);
  j["schedule"] = schedule.levels();
  j.update(io::to_json(res));
  j["analytic"] = sim::evaluate_schedule(schedule, audit, params);
  o.stream() << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal vendor investment and audit design under repeated security audits", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Command g{app.add_subcommand("g-sweep", "G(x) and the waiver cost on the effort grid (CSV x,G,CA)")};
  Command opt{app.add_subcommand("optimal", "optimal utility and investment levels (JSON)")};
  Command cov{app.add_subcommand("coverage", "participation threshold over a (delta, sigma) grid (CSV)")};
  Command des{app.add_subcommand("design", "linear-test audit design (JSON)")};
  Command apx{app.add_subcommand("approx", "truncation error of a finite-prefix audit (CSV)")};
  Command sim{app.add_subcommand("simulate", "Monte Carlo of an investment schedule (JSON)")};

  for (Command* c : {&g, &opt, &cov, &des, &apx, &sim}) add_flags(*c, kCommon);
  for (Command* c : {&g, &opt, &sim}) add_flags(*c, kTestFlags);
  add_flags(cov, {{"delta-range", "lo:hi:step"}, {"sigma-range", "lo:hi:step"},
                  {"mu0", "loss mean scale"}, {"s0", "loss spread scale"}});
  add_flags(des, {{"mode", "static | easier-first | harder-first"}, {"epsilon", "minimum gap between the two tests"}});
  add_flags(apx, {{"audit", "audit JSON file"}, {"k-list", "comma-separated truncation indices"}});
  add_flags(sim, {{"audit", "audit JSON file (overrides --test)"},
                  {"episodes", "number of episodes"},
                  {"seed", "random seed"},
                  {"schedule", "t0:x0,t1:x1,... switch steps and levels"},
                  {"horizon-eps", "truncate once the remaining reward bound drops below this"}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (g.app->parsed()) return cmd_g_sweep(g, out);
    if (opt.app->parsed()) return cmd_optimal(opt, out);
    if (cov.app->parsed()) return cmd_coverage(cov, out);
    if (des.app->parsed()) return cmd_design(des, out);
    if (apx.app->parsed()) return cmd_approx(apx, out);
    if (sim.app->parsed()) return cmd_simulate(sim, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const RegimeError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace auditopt::cli
