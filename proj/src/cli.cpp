#include "cftspec/cli.hpp"

#include "cftspec/characters.hpp"
#include "cftspec/entropy_bridge.hpp"
#include "cftspec/errors.hpp"
#include "cftspec/fock_traces.hpp"
#include "cftspec/modular_data.hpp"
#include "cftspec/modular_lab.hpp"
#include "cftspec/numeric.hpp"
#include "cftspec/spectral_invariants.hpp"
#include "cftspec/virasoro.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace cftspec::cli {

namespace {

using nlohmann::json;

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string config;
  int m = 3;
  std::string sector = "vacuum";
  std::string grid;
  std::string spacing = "linear";
  unsigned precision = kDefaultDigits;
  long cutoff = 400;
  std::uint64_t seed = 42;
  std::string output;
  std::string format;
  bool shifted = false;
  bool diagonal = false;

  bool all = false;
  bool modular = false;
  bool characters = false;
  bool invariants = false;
  bool virasoro = false;
  bool fock = false;
  bool lab = false;
  bool bridge = false;
  bool corrupt_sign = false;
  std::string dims;

  std::string spectrum;
  std::string stat = "both";
  long linear = 0;
  bool ratio = false;

  std::string battery = "all";

  std::string mass;
  std::string area;
  std::string central_charge;
  std::string mu;
};

const std::set<std::string> kFlags = {"shifted", "diagonal", "all",    "modular",      "characters",
                                      "invariants", "virasoro", "fock", "lab", "bridge",
                                      "corrupt-sign", "ratio"};

const char* kFooter =
    "Options can also be read from --config FILE: one 'key = value' per line, where key is a\n"
    "long option name without the dashes and '#' starts a comment. Flags take true or false.\n"
    "Command-line flags override the file; CFTSPEC_PRECISION sets the default precision.\n"
    "Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.";

// ---- parsing helpers --------------------------------------------------------

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

Real parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    (void)std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return Real(s);
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + s + "' is not a number");
  }
}

long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + s + "' is not an integer");
  }
}

std::vector<Real> parse_reals(const std::string& s, const std::string& what) {
  std::vector<Real> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_real(item, what));
  if (out.empty()) throw ConfigError(what + " is empty");
  return out;
}

/// "lo:hi:count" with linear or log spacing.
std::vector<Real> parse_grid(const std::string& spec, const std::string& spacing) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw ConfigError("grid must be lo:hi:count, got '" + spec + "'");
  const Real lo = parse_real(parts[0], "grid lo");
  const Real hi = parse_real(parts[1], "grid hi");
  const long count = parse_long(parts[2], "grid count");
  if (!(lo > 0)) throw ConfigError("grid lo must be > 0");
  if (hi < lo) throw ConfigError("grid hi must be >= lo");
  if (count < 1 || count > 100000) throw ConfigError("grid count must be in [1, 100000]");
  if (spacing != "linear" && spacing != "log") throw ConfigError("spacing must be linear or log");
  std::vector<Real> g;
  if (count == 1) return {lo};
  for (long i = 0; i < count; ++i) {
    const Real f = Real(i) / (count - 1);
    g.push_back(spacing == "log" ? Real(lo * pow(hi / lo, f)) : Real(lo + (hi - lo) * f));
  }
  return g;
}

lab::Triple parse_dims(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw ConfigError("dims must be d1,d2,d3");
  lab::Triple t{static_cast<int>(parse_long(parts[0], "dims")),
                static_cast<int>(parse_long(parts[1], "dims")),
                static_cast<int>(parse_long(parts[2], "dims"))};
  if (t.d1 < 1 || t.d2 < 1 || t.d3 < 1 || t.dim() > 512)
    throw ConfigError("dims must be positive with product <= 512");
  return t;
}

std::vector<std::size_t> resolve_sectors(const modular::MinimalModel& model,
                                         const std::string& sel) {
  std::vector<std::size_t> out;
  if (sel == "all") {
    for (std::size_t i = 0; i < model.size(); ++i) out.push_back(i);
    return out;
  }
  if (sel == "vacuum") return {0};
  if (sel.find(',') != std::string::npos) {
    const auto p = split(sel, ',');
    if (p.size() != 2) throw ConfigError("sector must be vacuum, all, an index or r,s");
    const long r = parse_long(p[0], "sector r"), s = parse_long(p[1], "sector s");
    for (std::size_t i = 0; i < model.size(); ++i) {
      const auto& sec = model.sectors[i];
      if ((sec.r == r && sec.s == s) || (sec.r == model.m - r && sec.s == model.m + 1 - s))
        return {i};
    }
    throw ConfigError("no sector (" + sel + ") in m = " + std::to_string(model.m));
  }
  const long i = parse_long(sel, "sector");
  if (i < 0 || i >= static_cast<long>(model.size()))
    throw ConfigError("sector index out of range [0, " + std::to_string(model.size() - 1) + "]");
  return {static_cast<std::size_t>(i)};
}

std::string sector_label(const modular::MinimalModel& model, std::size_t i) {
  if (i == 0) return "vacuum";
  return std::to_string(model.sectors[i].r) + "," + std::to_string(model.sectors[i].s);
}

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string sci(const Real& x) { return to_decimal(x, 4); }

// ---- application ------------------------------------------------------------

void add_common(CLI::App* s, RunConfig& c) {
  s->add_option("--config", c.config, "Key-value config file");
  s->add_option("--precision", c.precision, "Working precision in decimal digits, >= 30");
  s->add_option("--output,-o", c.output, "Write the report to this file instead of stdout");
  s->add_option("--format", c.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
}

void add_grid(CLI::App* s, RunConfig& c) {
  s->add_option("--grid", c.grid, "t grid as lo:hi:count");
  s->add_option("--spacing", c.spacing, "Grid spacing, linear or log")
      ->check(CLI::IsMember({"linear", "log"}));
}

std::unique_ptr<CLI::App> make_app(RunConfig& c) {
  auto app = std::make_unique<CLI::App>("Spectral and modular invariants of rational chiral nets",
                                        "cftspec");
  app->require_subcommand(1);
  app->footer(kFooter);

  auto* model = app->add_subcommand("model", "Sectors, S matrix, fusion rules and mu-index");
  add_common(model, c);
  model->add_option("--m", c.m, "Minimal model M(m+1, m), m >= 3");

  auto* ch = app->add_subcommand("characters", "Character q-series and their values on a t grid");
  add_common(ch, c);
  add_grid(ch, c);
  ch->add_option("--m", c.m, "Minimal model M(m+1, m), m >= 3");
  ch->add_option("--sector", c.sector, "vacuum, all, a sector index or r,s");
  ch->add_option("--cutoff", c.cutoff, "Series cutoff, >= 10");
  ch->add_flag("--shifted", c.shifted, "Evaluate exp(2 pi t c/24) Tr exp(-2 pi t L0)");

  auto* inv = app->add_subcommand("invariants", "Fit a0, a1, a2 of log Tr exp(-2 pi t L0)");
  add_common(inv, c);
  add_grid(inv, c);
  inv->add_option("--m", c.m, "Minimal model M(m+1, m), m >= 3");
  inv->add_option("--sector", c.sector, "vacuum, all, a sector index or r,s");
  inv->add_option("--cutoff", c.cutoff, "Series cutoff, >= 10");
  inv->add_flag("--diagonal", c.diagonal, "Two-dimensional diagonal combination");

  auto* ver = app->add_subcommand("verify", "Identity batteries, one PASS/FAIL line each");
  add_common(ver, c);
  ver->add_option("--m", c.m, "Minimal model M(m+1, m), m >= 3");
  ver->add_option("--seed", c.seed, "Seed of the randomized batteries");
  ver->add_option("--cutoff", c.cutoff, "Series cutoff, >= 10");
  ver->add_flag("--all", c.all, "Every battery (the default when none is selected)");
  ver->add_flag("--modular", c.modular, "SL(2,Z) relations and Verlinde integrality");
  ver->add_flag("--characters", c.characters, "S-transform residual and dimension ratios");
  ver->add_flag("--invariants", c.invariants, "Fitted invariants against their targets");
  ver->add_flag("--virasoro", c.virasoro, "Cover embedding, Jacobi identity, free energy");
  ver->add_flag("--fock", c.fock, "Fock space traces and the Fermi ratio bounds");
  ver->add_flag("--lab", c.lab, "Finite-dimensional index and entropy identities");
  ver->add_flag("--bridge", c.bridge, "Black-hole arithmetic round trips");
  ver->add_option("--dims", c.dims, "d1,d2,d3: run the index check on this triple only");
  ver->add_flag("--corrupt-sign", c.corrupt_sign, "Flip the sign in the Fock log-trace form");

  auto* fk = app->add_subcommand("fock", "Second-quantized traces and the Fermi ratio");
  add_common(fk, c);
  add_grid(fk, c);
  fk->add_option("--spectrum", c.spectrum, "Comma-separated one-particle eigenvalues");
  fk->add_option("--stat", c.stat, "bose, fermi or both")
      ->check(CLI::IsMember({"bose", "fermi", "both"}));
  fk->add_option("--linear", c.linear, "Use h = 1, 2, ..., N for the ratio scan");
  fk->add_flag("--ratio", c.ratio, "Ratio scan of the positive spectrum");

  auto* lb = app->add_subcommand("lab", "Matrix-algebra modular theory batteries");
  add_common(lb, c);
  lb->add_option("--seed", c.seed, "Seed of the random states");
  lb->add_option("--battery", c.battery,
                 "index, symmetric, entropy, cocycle, derivative, triple or all")
      ->check(CLI::IsMember({"index", "symmetric", "entropy", "cocycle", "derivative", "triple",
                             "all"}));
  lb->add_option("--dims", c.dims, "d1,d2,d3 for the triple battery");

  auto* bh = app->add_subcommand("bh", "Black-hole quantities from one of mass, area or c");
  add_common(bh, c);
  bh->add_option("--mass", c.mass, "Schwarzschild mass");
  bh->add_option("--area", c.area, "Horizon area");
  bh->add_option("--central-charge", c.central_charge, "Central charge, A = 2 pi c / 3");
  bh->add_option("--mu", c.mu, "mu-index for F_mean_mu (default: from --m, else 1)");
  bh->add_option("--m", c.m, "Take mu from the minimal model M(m+1, m)");
  return app;
}

std::vector<std::string> reversed(const std::vector<std::string>& v) {
  return {v.rbegin(), v.rend()};
}

/// Tokens for config-file keys the command line left unset.
std::vector<std::string> config_tokens(const std::string& path, const CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw ConfigError(path + ": config files cannot nest");
    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                        "' for " + sub.get_name());
    if (opt->count() > 0) continue;
    if (kFlags.count(key)) {
      if (value == "true" || value == "1" || value == "yes" || value == "on")
        out.push_back("--" + key);
      else if (!(value == "false" || value == "0" || value == "no" || value == "off"))
        throw ConfigError(path + ": flag '" + key + "' needs true or false");
      continue;
    }
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

void validate(const RunConfig& c, const std::string& command) {
  if (c.precision < 30 || c.precision > 2000) throw ConfigError("precision must be in [30, 2000]");
  if (c.cutoff < 10) throw ConfigError("cutoff must be >= 10");
  if (!c.grid.empty()) (void)parse_grid(c.grid, c.spacing);
  const std::string f = c.format;
  if (f == "csv" && (command == "verify" || command == "lab" || command == "bh"))
    throw ConfigError("csv output is not available for " + command);
}

void emit(const RunConfig& c, const std::string& body, std::ostream& out) {
  if (c.output.empty()) {
    out << body;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + c.output + "'");
  f << body;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- model ------------------------------------------------------------------

int cmd_model(const RunConfig& c, std::ostream& out) {
  const auto model = modular::build_minimal_model(c.m);
  const auto md = modular::modular_matrices(model);
  const auto res = modular::sl2z_residuals(md);
  const auto N = modular::verlinde_fusion(md);
  const std::string fmt = c.format.empty() ? "json" : c.format;
  std::ostringstream os;
  if (fmt == "json") {
    json j = modular::to_json(model, md);
    j["schema"] = 1;
    j["command"] = "model";
    j["residuals"] = {{"symmetry", sci(res.symmetry)},
                      {"orthogonality", sci(res.orthogonality)},
                      {"s_squared", sci(res.s_squared)},
                      {"st_cubed", sci(res.st_cubed)},
                      {"mu_consistency", sci(res.mu_consistency)}};
    j["fusion"] = N;
    os << dump(j);
  } else if (fmt == "csv") {
    os << "index,r,s,h,d\n";
    for (std::size_t i = 0; i < model.size(); ++i) {
      const auto& s = model.sectors[i];
      os << i << ',' << s.r << ',' << s.s << ',' << to_string(s.h) << ',' << to_decimal(s.d)
         << '\n';
    }
  } else {
    os << "m " << model.m << "\nc " << to_string(model.c) << "\nmu " << to_decimal(md.mu)
       << "\nsectors " << model.size() << '\n';
    for (std::size_t i = 0; i < model.size(); ++i) {
      const auto& s = model.sectors[i];
      os << "  " << i << " (" << s.r << "," << s.s << ") h=" << to_string(s.h)
         << " d=" << to_decimal(s.d, 20) << '\n';
    }
    os << "sl2z residual " << sci(std::max({res.symmetry, res.orthogonality, res.s_squared,
                                             res.st_cubed, res.mu_consistency}))
       << '\n';
  }
  emit(c, os.str(), out);
  return kExitOk;
}

// ---- characters -------------------------------------------------------------

int cmd_characters(const RunConfig& c, std::ostream& out) {
  const auto model = modular::build_minimal_model(c.m);
  const auto md = modular::modular_matrices(model);
  const auto sectors = resolve_sectors(model, c.sector);
  const auto series = chars::all_characters(model, c.cutoff);
  const std::vector<Real> grid = c.grid.empty() ? std::vector<Real>{}
                                                : parse_grid(c.grid, c.spacing);
  auto value_at = [&](std::size_t i, const Real& t) {
    return t < 1 ? chars::evaluate_small_t(md, series, i, t, c.shifted)
                 : chars::evaluate(series[i], t, c.shifted);
  };
  const std::string fmt = c.format.empty() ? "json" : c.format;
  std::ostringstream os;
  if (fmt == "json") {
    json j = {{"schema", 1}, {"command", "characters"}, {"m", c.m}, {"c", to_string(model.c)},
              {"cutoff", c.cutoff}, {"shifted", c.shifted}};
    json list = json::array();
    for (auto i : sectors) {
      json s = {{"index", i}, {"label", sector_label(model, i)}, {"r", series[i].r},
                {"s", series[i].s}, {"h", to_string(series[i].h)}};
      json coeffs = json::array();
      for (const auto& a : series[i].coeffs) coeffs.push_back(a.str());
      s["coefficients"] = coeffs;
      json ev = json::array();
      for (const auto& t : grid) {
        const auto e = value_at(i, t);
        ev.push_back({{"t", to_decimal(t)}, {"value", to_decimal(e.value)},
                      {"error", sci(e.error)}});
      }
      s["evaluations"] = ev;
      list.push_back(s);
    }
    j["sectors"] = list;
    os << dump(j);
  } else if (fmt == "csv") {
    if (grid.empty()) {
      os << "sector,k,coefficient\n";
      for (auto i : sectors)
        for (std::size_t k = 0; k < series[i].coeffs.size(); ++k)
          os << i << ',' << k << ',' << series[i].coeffs[k] << '\n';
    } else {
      os << "sector,t,value,error\n";
      for (auto i : sectors)
        for (const auto& t : grid) {
          const auto e = value_at(i, t);
          os << i << ',' << to_decimal(t) << ',' << to_decimal(e.value) << ',' << sci(e.error)
             << '\n';
        }
    }
  } else {
    for (auto i : sectors) {
      os << "# sector " << sector_label(model, i) << " h=" << to_string(series[i].h) << '\n';
      if (grid.empty())
        chars::write_coefficients(os, series[i]);
      else
        for (const auto& t : grid) os << to_decimal(t, 12) << ' ' << to_decimal(value_at(i, t).value) << '\n';
    }
  }
  emit(c, os.str(), out);
  return kExitOk;
}

// ---- invariants -------------------------------------------------------------

struct FitTolerances {
  Real a0{"1e-6"};
  Real a1{"1e-4"};
  Real a2{"1e-2"};
};

int cmd_invariants(const RunConfig& c, std::ostream& out) {
  auto d = std::make_shared<const spectral::ChiralData>(spectral::make_chiral(c.m, c.cutoff));
  const bool user_grid = !c.grid.empty();
  const std::vector<Real> grid =
      user_grid ? parse_grid(c.grid, c.spacing)
                : (c.m == 3 && !c.diagonal ? spectral::default_grid() : spectral::auto_grid(d->model));
  const bool corrections = user_grid || (c.m == 3 && !c.diagonal);
  FitTolerances tol;
  if (c.diagonal) tol.a1 = Real("1e-3");

  json fits = json::array();
  bool pass = true;
  std::ostringstream text;
  spectral::LogTraceFn first;
  auto record = [&](const std::string& label, const spectral::AsymptoticFit& fit,
                    const spectral::Targets& tg) {
    json r = spectral::fit_report(label, fit, tg);
    const bool ok = abs(fit.a0 - tg.a0) <= tol.a0 && abs(fit.a1 - tg.a1) <= tol.a1 &&
                    abs(fit.a2 - tg.a2) <= tol.a2;
    r["pass"] = ok;
    pass = pass && ok;
    fits.push_back(r);
    text << (ok ? "PASS " : "FAIL ") << label << " a0=" << to_decimal(fit.a0, 12)
         << " a1=" << to_decimal(fit.a1, 12) << " a2=" << to_decimal(fit.a2, 12)
         << " targets " << to_decimal(tg.a0, 12) << ' ' << to_decimal(tg.a1, 12) << ' '
         << to_decimal(tg.a2, 12) << '\n';
  };

  if (c.diagonal) {
    std::vector<std::vector<long>> Z(d->series.size(), std::vector<long>(d->series.size(), 0));
    for (std::size_t i = 0; i < Z.size(); ++i) Z[i][i] = 1;
    const auto spec2 = spectral::make_two_dim(Z, d, d);
    first = spectral::log_trace_2d(spec2);
    std::vector<Real> gaps;
    if (corrections) gaps = spectral::leading_gap(*d, 0);
    record("diagonal", spectral::combine_2d(spec2, grid, gaps), spectral::two_dim_targets(spec2));
  } else {
    for (auto rho : resolve_sectors(d->model, c.sector)) {
      auto fn = spectral::log_trace(d, rho);
      if (!first) first = fn;
      std::vector<Real> gaps;
      if (corrections) gaps = spectral::leading_gap(*d, rho);
      record(sector_label(d->model, rho), spectral::fit_invariants(fn, grid, gaps),
             spectral::modular_targets(*d, rho));
    }
  }

  const std::string fmt = c.format.empty() ? "json" : c.format;
  std::ostringstream os;
  if (fmt == "json") {
    json j = {{"schema", 1}, {"command", "invariants"}, {"m", c.m},
              {"c", to_string(d->model.c)}, {"two_dim", c.diagonal},
              {"tolerances", {{"a0", sci(tol.a0)}, {"a1", sci(tol.a1)}, {"a2", sci(tol.a2)}}},
              {"fits", fits}, {"pass", pass}};
    os << dump(j);
  } else if (fmt == "csv") {
    spectral::write_fit_csv(os, first, grid);
  } else {
    os << text.str();
  }
  emit(c, os.str(), out);
  return pass ? kExitOk : kExitVerification;
}

// ---- verify -----------------------------------------------------------------

struct Check {
  std::string name;
  bool pass = false;
  std::string max_dev;
  std::string tolerance;
  std::string value;
  json detail;
};

Check real_check(const std::string& name, const Real& dev, const Real& tol) {
  return Check{name, dev <= tol, sci(dev), sci(tol), "", nullptr};
}

Check double_check(const std::string& name, double dev, double tol) {
  return Check{name, dev <= tol, sci(dev), sci(tol), "", nullptr};
}

class Verifier {
public:
  void run(const std::string& name, const std::function<Check()>& fn) {
    try {
      Check k = fn();
      k.name = name;
      checks_.push_back(std::move(k));
    } catch (const Error& e) {
      checks_.push_back(Check{name, false, "", "", "",
                              json{{"error", to_string(e.kind())}, {"message", e.what()}}});
    }
  }

  const std::vector<Check>& checks() const { return checks_; }

private:
  std::vector<Check> checks_;
};

Check battery_check(const lab::BatterySummary& b) {
  Check k;
  k.pass = b.pass;
  k.max_dev = sci(b.report.value("max_abs_dev", 0.0));
  k.tolerance = sci(b.report.value("tolerance", 0.0));
  if (b.report.contains("value")) k.value = sci(b.report["value"].get<double>());
  k.detail = b.report;
  return k;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const bool none = !(c.modular || c.characters || c.invariants || c.virasoro || c.fock ||
                      c.lab || c.bridge);
  const bool every = c.all || (none && c.dims.empty());
  const bool lab_only_dims = none && !c.dims.empty() && !c.all;
  const auto model = modular::build_minimal_model(c.m);
  const auto md = modular::modular_matrices(model);
  const Real exact_tol = pow(Real(10), -static_cast<int>(working_digits()) + 5);

  std::shared_ptr<const spectral::ChiralData> chiral;
  auto data = [&] {
    if (!chiral)
      chiral = std::make_shared<const spectral::ChiralData>(spectral::make_chiral(c.m, c.cutoff));
    return chiral;
  };
  std::optional<std::vector<spectral::AsymptoticFit>> fits;
  auto sector_fits = [&]() -> const std::vector<spectral::AsymptoticFit>& {
    if (!fits) {
      auto d = data();
      const bool m3 = c.m == 3;
      const auto grid = m3 ? spectral::default_grid() : spectral::auto_grid(d->model);
      fits.emplace();
      for (std::size_t rho = 0; rho < d->series.size(); ++rho)
        fits->push_back(spectral::fit_invariants(
            spectral::log_trace(d, rho), grid,
            m3 ? spectral::leading_gap(*d, rho) : std::vector<Real>{}));
    }
    return *fits;
  };

  Verifier v;
  if (every || c.modular) {
    v.run("modular.sl2z", [&] {
      const auto r = modular::sl2z_residuals(md);
      return real_check("", std::max({r.symmetry, r.orthogonality, r.s_squared, r.st_cubed,
                                      r.mu_consistency}),
                        Real("1e-20"));
    });
    v.run("modular.verlinde", [&] {
      const auto N = modular::verlinde_fusion(md);
      long bad = 0;
      for (std::size_t j = 0; j < N.size(); ++j)
        for (std::size_t k = 0; k < N.size(); ++k) bad += N[0][j][k] != (j == k ? 1 : 0);
      return real_check("", Real(bad), Real(0));
    });
  }
  if (every || c.characters) {
    v.run("characters.s_transform", [&] {
      const auto series = chars::all_characters(model, std::max(c.cutoff, 2000L));
      std::vector<Real> grid;
      for (int i = 1; i <= 10; ++i) grid.push_back(Real("0.3") * i);
      return real_check("", chars::s_transform_residual(md, series, grid), Real("1e-20"));
    });
    v.run("characters.kac_wakimoto", [&] {
      auto d = data();
      Real worst(0);
      for (std::size_t r = 0; r < d->series.size(); ++r)
        for (std::size_t s = 0; s < d->series.size(); ++s)
          worst = std::max(worst, Real(abs(spectral::kw_ratio(*d, r, s, Real("0.01")) -
                                           md.dims[r] / md.dims[s])));
      return real_check("", worst, Real("1e-6"));
    });
  }
  if (every || c.invariants) {
    const FitTolerances tol;
    v.run("invariants.a0", [&] {
      const auto tg = spectral::modular_targets(*data(), 0);
      Check k = real_check("", abs(sector_fits()[0].a0 - tg.a0), tol.a0);
      k.value = to_decimal(sector_fits()[0].a0, 12);
      return k;
    });
    v.run("invariants.a1", [&] {
      const auto tg = spectral::modular_targets(*data(), 0);
      Check k = real_check("", abs(sector_fits()[0].a1 - tg.a1), tol.a1);
      k.value = to_decimal(sector_fits()[0].a1, 12);
      return k;
    });
    v.run("invariants.a2", [&] {
      const auto tg = spectral::modular_targets(*data(), 0);
      Check k = real_check("", abs(sector_fits()[0].a2 - tg.a2), tol.a2);
      k.value = to_decimal(sector_fits()[0].a2, 12);
      return k;
    });
    v.run("invariants.sector_a1", [&] {
      Real worst(0);
      for (std::size_t rho = 1; rho < sector_fits().size(); ++rho)
        worst = std::max(worst, Real(abs(sector_fits()[rho].a1 -
                                         spectral::modular_targets(*data(), rho).a1)));
      return real_check("", worst, tol.a1);
    });
    v.run("invariants.cardy", [&] {
      const auto vac = chars::character_coeffs(model, model.sectors[0], 5000);
      const auto r = spectral::cardy_count_check(vac, 1000, 5000);
      Check k = double_check("", r.rel_dev, 0.05);
      k.pass = r.pass;
      k.value = sci(r.slope);
      return k;
    });
    v.run("invariants.two_dim", [&] {
      auto d = data();
      std::vector<std::vector<long>> Z(d->series.size(), std::vector<long>(d->series.size(), 0));
      for (std::size_t i = 0; i < Z.size(); ++i) Z[i][i] = 1;
      const auto s2 = spectral::make_two_dim(Z, d, d);
      const auto fit = spectral::combine_2d(s2, spectral::auto_grid(d->model));
      const auto tg = spectral::two_dim_targets(s2);
      Check k = real_check("", abs(fit.a1 - tg.a1), Real("1e-3"));
      k.pass = k.pass && abs(fit.a0 - tg.a0) <= Real("1e-6") &&
               abs(fit.a2 + fit.a0) <= Real("1e-2");
      k.value = to_decimal(fit.a1, 6);
      return k;
    });
  }
  if (every || c.virasoro) {
    v.run("virasoro.embedding", [&] {
      long pairs = 0;
      for (long n = 1; n <= 6; ++n) pairs += vir::verify_embedding(n, 50).pairs_checked;
      Check k = real_check("", Real(0), Real(0));
      k.value = std::to_string(pairs);
      return k;
    });
    v.run("virasoro.jacobi", [&] {
      long bad = 0;
      for (long i = -10; i <= 10; ++i)
        for (long j = -10; j <= 10; ++j)
          for (long k = -10; k <= 10; ++k) {
            const auto Li = vir::VirElement::L(i), Lj = vir::VirElement::L(j),
                       Lk = vir::VirElement::L(k);
            bad += !(vir::bracket(Li, vir::bracket(Lj, Lk)) +
                     vir::bracket(Lj, vir::bracket(Lk, Li)) +
                     vir::bracket(Lk, vir::bracket(Li, Lj)))
                        .is_zero();
          }
      return real_check("", Real(bad), Real(0));
    });
    v.run("virasoro.free_energy", [&] {
      const auto f = vir::free_energy(model.c, 1);
      Check k = real_check("", abs(f.fmean - sector_fits()[0].a0), Real("1e-6"));
      k.pass = k.pass && f.fmean_over_2pi == model.c / 24;
      k.value = to_decimal(f.fmean, 12);
      return k;
    });
  }
  if (every || c.fock) {
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_real_distribution<double> lam(0.0, 0.8);
    std::vector<fock::OneParticleOperator> ops;
    for (int i = 0; i < 100; ++i) {
      std::vector<Real> ev;
      const int n = dim(rng);
      for (int j = 0; j < n; ++j) ev.emplace_back(lam(rng));
      ops.push_back(fock::OneParticleOperator::contraction(ev));
    }
    for (auto stat : {fock::Statistics::Bose, fock::Statistics::Fermi}) {
      const std::string tag = stat == fock::Statistics::Bose ? "bose" : "fermi";
      v.run("fock.closed_form_over_bound." + tag, [&] {
        // deviations in units of the reported tail bound
        Real worst(0);
        for (const auto& a : ops) {
          const auto bf = fock::gamma_trace_bruteforce(a, stat, fock::bruteforce_cutoff(a.eigenvalues.size()));
          const Real bound = bf.tail_bound + Real("1e-40");
          worst = std::max(worst, Real(abs(fock::gamma_trace(a, stat) - bf.value) / bound));
        }
        return real_check("", worst, Real(1));
      });
      v.run("fock.log_trace_over_bound." + tag, [&] {
        // |log x - log y| <= 2 |x - y| / y while |x - y| <= y / 2
        Real worst(0);
        for (const auto& a : ops) {
          const auto bf = fock::gamma_trace_bruteforce(a, stat, fock::bruteforce_cutoff(a.eigenvalues.size()));
          const Real bound = 2 * bf.tail_bound / bf.value + Real("1e-40");
          const Real dev = abs(fock::log_gamma_trace(a, stat, c.corrupt_sign) - log(bf.value));
          worst = std::max(worst, Real(dev / bound));
        }
        return real_check("", worst, Real(1));
      });
    }
    v.run("fock.ratio_bounds", [&] {
      std::uniform_real_distribution<double> h(0.05, 5.0);
      std::vector<Real> grid = parse_grid("1e-3:1:40", "log");
      std::reverse(grid.begin(), grid.end());
      Real lo(1), hi(0);
      for (int i = 0; i < 20; ++i) {
        std::vector<Real> ev;
        const int n = dim(rng);
        for (int j = 0; j < n; ++j) ev.emplace_back(h(rng));
        for (const auto& row : fock::fermi_ratio_scan(fock::OneParticleOperator::positive(ev), grid)) {
          lo = std::min(lo, row.ratio);
          hi = std::max(hi, row.ratio);
        }
      }
      Check k = real_check("", Real(0), Real(0));
      k.value = "[" + to_decimal(lo, 8) + ", " + to_decimal(hi, 8) + "]";
      return k;
    });
    v.run("fock.linear_ratio", [&] {
      std::vector<Real> ev;
      for (int k = 1; k <= 5000; ++k) ev.emplace_back(k);
      const auto rows = fock::fermi_ratio_scan(fock::OneParticleOperator::positive(ev), {Real("0.01")});
      Check k = real_check("", abs(rows[0].ratio - pi() * pi() / 12), Real("0.01"));
      k.value = to_decimal(rows[0].ratio, 8);
      return k;
    });
  }
  if (every || c.lab || lab_only_dims) {
    if (!c.dims.empty()) {
      const auto tr = parse_dims(c.dims);
      v.run("lab.triple", [&] { return battery_check(lab::triple_battery(c.seed, tr)); });
    }
    if (every || (c.lab && c.dims.empty())) {
      v.run("lab.index", [&] { return battery_check(lab::index_battery(c.seed)); });
      v.run("lab.symmetric", [&] { return battery_check(lab::symmetric_battery(c.seed)); });
      v.run("lab.entropy", [&] { return battery_check(lab::entropy_battery(c.seed)); });
      v.run("lab.cocycle", [&] { return battery_check(lab::cocycle_battery(c.seed, 50, 4)); });
      v.run("lab.derivative", [&] { return battery_check(lab::derivative_battery(c.seed)); });
    }
  }
  if (every || c.bridge) {
    v.run("bridge.alpha", [&] {
      const auto r = bh::verify_alpha_quarter(Real(1), Real("1e-6"));
      Check k = real_check("", abs(r.extracted - Real("0.25")), Real("1e-8"));
      k.pass = k.pass && r.pass;
      k.value = to_decimal(r.extracted, 12);
      return k;
    });
    v.run("bridge.alpha_control", [&] {
      const auto r = bh::verify_alpha_quarter(Real(1), Real("1e-6"), Real("0.5"));
      Check k = real_check("", Real(0), Real(0));
      k.pass = !r.pass;
      k.value = to_decimal(r.residual, 8);
      return k;
    });
    v.run("bridge.round_trip", [&] {
      Real worst(0);
      for (const char* a : {"0.001", "1", "50.26548245743669", "1000", "12345.678"}) {
        const Real A(a);
        const auto t = bh::hawking_and_bekenstein(bh::BlackHoleParams::make(A, Real(1), Real(1)));
        worst = std::max(worst, Real(abs(bh::area_from_central_charge(t.c) - A) / A));
        worst = std::max(worst, Real(abs(t.S - A / 4) / A));
      }
      return real_check("", worst, Real("1e-12"));
    });
    v.run("bridge.mu_free_energy", [&] {
      Real worst(0);
      const Real dmax = *std::max_element(md.dims.begin(), md.dims.end());
      for (long n = 1; n <= 100; ++n) {
        const auto f = bh::mu_free_energy(md.mu, dmax, n);
        worst = std::max(worst, Real(abs(f.F_mean + log(md.mu) / (4 * pi()))));
        const Real gap = abs(f.F_n / n - f.F_mean);
        if (gap > (log(md.mu) + 2 * log(dmax)) / (4 * pi() * n)) worst = std::max(worst, gap);
      }
      const auto z = bh::mu_free_energy(Real(1), Real(1), 7);
      worst = std::max({worst, Real(abs(z.F_n)), Real(abs(z.F_mean)), Real(abs(z.log_Z))});
      return real_check("", worst, exact_tol);
    });
    v.run("bridge.additivity", [&] {
      Real worst(0);
      const Real kappa("0.25");
      for (const auto& a : md.dims)
        for (const auto& b : md.dims)
          for (const auto& e : md.dims) {
            const Real lhs = bh::incremental_free_energy(a, b, kappa).dF +
                             bh::incremental_free_energy(b, e, kappa).dF;
            worst = std::max(worst, Real(abs(lhs - bh::incremental_free_energy(a, e, kappa).dF)));
          }
      return real_check("", worst, exact_tol);
    });
    v.run("bridge.fitted_a1", [&] {
      Real worst(0);
      bool ok = true;
      const auto& f = sector_fits();
      for (std::size_t rho = 1; rho < f.size(); ++rho) {
        const auto r = bh::incremental_free_energy(md.dims[rho], md.dims[0], Real(1), f[rho].a1,
                                                   f[0].a1);
        worst = std::max(worst, *r.cross_check);
        ok = ok && r.consistent;
      }
      Check k = real_check("", worst, Real("1e-3"));
      k.pass = k.pass && ok;
      return k;
    });
  }

  bool pass = true;
  json list = json::array();
  std::ostringstream lines;
  for (const auto& k : v.checks()) {
    pass = pass && k.pass;
    lines << (k.pass ? "PASS " : "FAIL ") << k.name;
    if (!k.max_dev.empty()) lines << " max_dev=" << k.max_dev << " tol=" << k.tolerance;
    if (!k.value.empty()) lines << " value=" << k.value;
    if (k.detail.is_object() && k.detail.contains("message"))
      lines << " error=" << k.detail["message"].get<std::string>();
    lines << '\n';
    json e = {{"name", k.name}, {"pass", k.pass}, {"max_dev", k.max_dev},
              {"tolerance", k.tolerance}};
    if (!k.value.empty()) e["value"] = k.value;
    if (!k.detail.is_null()) e["detail"] = k.detail;
    list.push_back(e);
  }
  long failed = 0;
  for (const auto& k : v.checks()) failed += !k.pass;
  lines << (pass ? "ALL PASS" : "FAILED") << ' ' << (v.checks().size() - failed) << '/'
        << v.checks().size() << '\n';

  const json report = {{"schema", 1},       {"command", "verify"},
                       {"m", c.m},          {"seed", c.seed},
                       {"precision", c.precision}, {"corrupt_sign", c.corrupt_sign},
                       {"checks", list},    {"pass", pass}};
  const std::string fmt = c.format.empty() ? (c.output.empty() ? "text" : "json") : c.format;
  if (c.output.empty()) {
    out << (fmt == "json" ? dump(report) : lines.str());
  } else {
    out << lines.str();
    emit(c, fmt == "json" ? dump(report) : lines.str(), out);
  }
  return pass ? kExitOk : kExitVerification;
}

// ---- fock -------------------------------------------------------------------

int cmd_fock(const RunConfig& c, std::ostream& out) {
  if (c.spectrum.empty() && c.linear == 0)
    throw ConfigError("fock needs --spectrum or --linear");
  if (c.linear < 0 || c.linear > 1000000) throw ConfigError("linear must be in [1, 1000000]");
  const std::string fmt = c.format.empty() ? "json" : c.format;
  std::ostringstream os;

  if (c.ratio || c.linear > 0) {
    std::vector<Real> ev;
    if (c.linear > 0)
      for (long k = 1; k <= c.linear; ++k) ev.emplace_back(k);
    else
      ev = parse_reals(c.spectrum, "spectrum");
    std::vector<Real> grid = parse_grid(c.grid.empty() ? "1e-3:1:30" : c.grid,
                                        c.grid.empty() ? "log" : c.spacing);
    std::sort(grid.begin(), grid.end(), [](const Real& a, const Real& b) { return a > b; });
    const auto rows = fock::fermi_ratio_scan(fock::OneParticleOperator::positive(ev), grid);
    if (fmt == "json") {
      json list = json::array();
      for (const auto& r : rows)
        list.push_back({{"t", to_decimal(r.t)}, {"numerator", to_decimal(r.numerator)},
                        {"denominator", to_decimal(r.denominator)},
                        {"ratio", to_decimal(r.ratio)}});
      os << dump({{"schema", 1}, {"command", "fock"}, {"mode", "ratio"},
                  {"dimension", ev.size()}, {"rows", list}});
    } else if (fmt == "csv") {
      fock::write_ratio_csv(os, rows);
    } else {
      for (const auto& r : rows) os << to_decimal(r.t, 12) << ' ' << to_decimal(r.ratio, 20) << '\n';
    }
    emit(c, os.str(), out);
    return kExitOk;
  }

  const auto a = fock::OneParticleOperator::contraction(parse_reals(c.spectrum, "spectrum"));
  std::vector<fock::Statistics> stats;
  if (c.stat != "fermi") stats.push_back(fock::Statistics::Bose);
  if (c.stat != "bose") stats.push_back(fock::Statistics::Fermi);
  json list = json::array();
  if (fmt == "csv") os << "statistics,closed_form,log_trace,bruteforce,tail_bound,cutoff,terms\n";
  bool pass = true;
  for (auto stat : stats) {
    const std::string name = stat == fock::Statistics::Bose ? "bose" : "fermi";
    const Real closed = fock::gamma_trace(a, stat);
    const Real lg = fock::log_gamma_trace(a, stat);
    const auto bf = fock::gamma_trace_bruteforce(a, stat, fock::bruteforce_cutoff(a.eigenvalues.size()));
    const bool ok = abs(closed - bf.value) <= bf.tail_bound;
    pass = pass && ok;
    if (fmt == "json") {
      list.push_back({{"statistics", name}, {"closed_form", to_decimal(closed)},
                      {"log_trace", to_decimal(lg)}, {"bruteforce", to_decimal(bf.value)},
                      {"tail_bound", sci(bf.tail_bound)}, {"cutoff", bf.cutoff},
                      {"terms", bf.terms}, {"agree", ok}});
    } else if (fmt == "csv") {
      os << name << ',' << to_decimal(closed) << ',' << to_decimal(lg) << ','
         << to_decimal(bf.value) << ',' << sci(bf.tail_bound) << ',' << bf.cutoff << ','
         << bf.terms << '\n';
    } else {
      os << name << " closed=" << to_decimal(closed, 20) << " log=" << to_decimal(lg, 20)
         << " bruteforce=" << to_decimal(bf.value, 20) << " bound=" << sci(bf.tail_bound)
         << (ok ? " agree" : " DISAGREE") << '\n';
    }
  }
  if (fmt == "json")
    os << dump({{"schema", 1}, {"command", "fock"}, {"mode", "traces"}, {"traces", list},
                {"pass", pass}});
  emit(c, os.str(), out);
  return pass ? kExitOk : kExitVerification;
}

// ---- lab --------------------------------------------------------------------

int cmd_lab(const RunConfig& c, std::ostream& out) {
  if (c.battery == "triple" && c.dims.empty()) throw ConfigError("the triple battery needs --dims");
  std::vector<std::pair<std::string, std::function<lab::BatterySummary()>>> jobs;
  const bool all = c.battery == "all";
  if (all || c.battery == "index") jobs.emplace_back("index", [&] { return lab::index_battery(c.seed); });
  if (all || c.battery == "symmetric")
    jobs.emplace_back("symmetric", [&] { return lab::symmetric_battery(c.seed); });
  if (all || c.battery == "entropy")
    jobs.emplace_back("entropy", [&] { return lab::entropy_battery(c.seed); });
  if (all || c.battery == "cocycle")
    jobs.emplace_back("cocycle", [&] { return lab::cocycle_battery(c.seed, 50, 4); });
  if (all || c.battery == "derivative")
    jobs.emplace_back("derivative", [&] { return lab::derivative_battery(c.seed); });
  if (!c.dims.empty()) {
    const auto tr = parse_dims(c.dims);
    jobs.emplace_back("triple", [&c, tr] { return lab::triple_battery(c.seed, tr); });
  }
  json reports;
  bool pass = true;
  std::ostringstream text;
  for (auto& [name, job] : jobs) {
    const auto b = job();
    reports[name] = b.report;
    pass = pass && b.pass;
    text << (b.pass ? "PASS " : "FAIL ") << name
         << " max_abs_dev=" << sci(b.report.value("max_abs_dev", 0.0)) << '\n';
  }
  const std::string fmt = c.format.empty() ? "json" : c.format;
  emit(c,
       fmt == "json" ? dump({{"schema", 1}, {"command", "lab"}, {"seed", c.seed},
                             {"batteries", reports}, {"pass", pass}})
                     : text.str(),
       out);
  return pass ? kExitOk : kExitVerification;
}

// ---- bh ---------------------------------------------------------------------

int cmd_bh(const RunConfig& c, const CLI::App& sub, std::ostream& out) {
  const int given = !c.mass.empty() + !c.area.empty() + !c.central_charge.empty();
  if (given != 1) throw ConfigError("bh needs exactly one of --mass, --area, --central-charge");
  Real M;
  if (!c.mass.empty()) {
    M = parse_real(c.mass, "mass");
  } else {
    const Real A = c.area.empty() ? bh::area_from_central_charge(parse_real(c.central_charge,
                                                                            "central charge"))
                                  : parse_real(c.area, "area");
    if (!(A > 0)) throw ConfigError("area and central charge must be > 0");
    M = sqrt(A / (16 * pi()));
  }
  if (!(M > 0)) throw ConfigError("mass must be > 0");
  Real mu(1);
  if (!c.mu.empty())
    mu = parse_real(c.mu, "mu");
  else if (sub.count("--m") > 0)
    mu = modular::modular_matrices(modular::build_minimal_model(c.m)).mu;

  const auto p = bh::BlackHoleParams::schwarzschild(M);
  const auto t = bh::hawking_and_bekenstein(p);
  const auto alpha = bh::verify_alpha_quarter(M, M * Real("1e-6"));
  json j = bh::summary(p, mu);
  j["schema"] = 1;
  j["command"] = "bh";
  j["alpha"] = {{"extracted", to_decimal(alpha.extracted, 20)},
                {"residual", sci(alpha.residual)}, {"pass", alpha.pass}};
  const Real trip = abs(bh::area_from_central_charge(t.c) - p.A) / p.A;
  j["round_trip"] = {{"dev", sci(trip)}, {"pass", trip <= Real("1e-12")}};

  const std::string fmt = c.format.empty() ? "json" : c.format;
  if (fmt == "json") {
    emit(c, dump(j), out);
  } else {
    std::ostringstream os;
    for (const char* k : {"M", "A", "kappa", "beta", "S", "c", "F_mean", "F_mean_chiral", "mu",
                          "F_mean_mu"})
      os << k << ' ' << j[k].get<std::string>() << '\n';
    os << "S_equals_F_mean " << (j["S_equals_F_mean"].get<bool>() ? "true" : "false") << '\n';
    emit(c, os.str(), out);
  }
  return kExitOk;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidModel:
    case ErrorKind::InvalidCover:
    case ErrorKind::WindowTooSmall:
    case ErrorKind::InsufficientCutoff:
      return kExitConfig;
    default:
      return kExitVerification;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto fail = [&](int code, const std::string& kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
    return code;
  };
  try {
    unsigned env_precision = kDefaultDigits;
    if (const char* e = std::getenv("CFTSPEC_PRECISION"); e != nullptr && *e != '\0') {
      const long p = parse_long(e, "CFTSPEC_PRECISION");
      if (p < 0) throw ConfigError("CFTSPEC_PRECISION must be positive");
      env_precision = static_cast<unsigned>(p);
    }

    RunConfig c;
    c.precision = env_precision;
    auto app = make_app(c);
    auto parse = [&](CLI::App& a, const std::vector<std::string>& tokens) -> std::optional<int> {
      try {
        a.parse(reversed(tokens));
      } catch (const CLI::CallForHelp&) {
        const auto subs = a.get_subcommands();
        out << (subs.empty() ? a.help() : subs.front()->help());
        return kExitOk;
      } catch (const CLI::CallForAllHelp&) {
        out << a.help("", CLI::AppFormatMode::All);
        return kExitOk;
      } catch (const CLI::ParseError& e) {
        return fail(kExitConfig, "usage", e.what());
      }
      return std::nullopt;
    };
    if (auto code = parse(*app, args)) return *code;

    CLI::App* sub = app->get_subcommands().front();
    if (!c.config.empty()) {
      auto tokens = args;
      const auto extra = config_tokens(c.config, *sub);
      tokens.insert(tokens.end(), extra.begin(), extra.end());
      c = RunConfig{};
      c.precision = env_precision;
      app = make_app(c);
      if (auto code = parse(*app, tokens)) return *code;
      sub = app->get_subcommands().front();
    }

    const std::string command = sub->get_name();
    validate(c, command);
    PrecisionScope scope(c.precision);
    if (command == "model") return cmd_model(c, out);
    if (command == "characters") return cmd_characters(c, out);
    if (command == "invariants") return cmd_invariants(c, out);
    if (command == "verify") return cmd_verify(c, out);
    if (command == "fock") return cmd_fock(c, out);
    if (command == "lab") return cmd_lab(c, out);
    return cmd_bh(c, *sub, out);
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const Error& e) {
    return fail(exit_code_for(e.kind()), to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(kExitVerification, "internal", e.what());
  }
}

}  // namespace cftspec::cli
