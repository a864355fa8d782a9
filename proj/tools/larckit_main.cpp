// larckit command-line front end. All analysis goes through the C API of the
// shared library; this file only handles flags, file IO, and exit codes:
// 0 = CONTROLLABLE-BY-THM2 / success, 1 = numerical failure, 2 = bad input,
// 3 = HYPOTHESES-UNMET.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "larckit/larckit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitParse = 2;
constexpr int kExitUnmet = 3;

int exit_code(lk_status st) {
  switch (st) {
    case LK_OK:
      return kExitOk;
    case LK_ERR_NUMERIC:
      return kExitNumerical;
    case LK_ERR_PARSE:
      return kExitParse;
    case LK_HYPOTHESES_UNMET:
      return kExitUnmet;
    case LK_ERR_INVALID_ARGUMENT:
      return kExitParse;
    case LK_ERR_NULL:
      return kExitNumerical;
  }
  return kExitNumerical;
}

int fail_parse(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return kExitParse;
}

int fail_status(lk_status st) {
  const char* msg = lk_last_error();
  std::cerr << "error: " << (msg && msg[0] ? msg : "command failed") << "\n";
  return exit_code(st);
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << text;
  f.flush();
  return f.good();
}

// Report goes to --out when given, stdout otherwise.
bool deliver(const std::string& out_path, const char* text) {
  if (out_path.empty()) {
    std::cout << text;
    return true;
  }
  return write_file(out_path, text);
}

bool split_list(const std::string& text, std::vector<std::string>& out) {
  out.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) return false;
    out.push_back(item);
  }
  return !out.empty();
}

bool parse_doubles(const std::string& text, std::vector<double>& out) {
  std::vector<std::string> parts;
  if (!split_list(text, parts)) return false;
  out.clear();
  for (const std::string& p : parts) {
    try {
      size_t used = 0;
      out.push_back(std::stod(p, &used));
      if (used != p.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

bool parse_ints(const std::string& text, std::vector<int>& out) {
  std::vector<std::string> parts;
  if (!split_list(text, parts)) return false;
  out.clear();
  for (const std::string& p : parts) {
    try {
      size_t used = 0;
      out.push_back(std::stoi(p, &used));
      if (used != p.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

struct Common {
  std::string config;
  std::string out;
  std::string csv;
  std::string trunc;
  std::vector<std::string> tol;
  long long seed = -1;
};

void add_common(CLI::App* sub, Common& c, bool with_csv) {
  sub->add_option("--config", c.config, "system configuration JSON file")
      ->required();
  sub->add_option("--out", c.out, "write the JSON report here (default stdout)");
  sub->add_option("--trunc", c.trunc, "comma-separated truncation list");
  sub->add_option("--tol", c.tol, "tolerance override KEY=VAL (repeatable)");
  sub->add_option("--seed", c.seed, "RNG seed recorded in the report");
  if (with_csv) sub->add_option("--csv", c.csv, "write the CSV curve here");
}

// Folds the command-line overrides into the configuration JSON before the
// system is built, so parse-time knobs (gap_tol) see them too.
bool merge_flags(const Common& c, bool certificates, std::string& merged,
                 std::string& err) {
  std::string text;
  if (!read_file(c.config, text)) {
    err = "cannot open \"" + c.config + "\"";
    return false;
  }
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    err = e.what();
    return false;
  }
  if (!j.is_object()) {
    err = "config: top level must be an object";
    return false;
  }
  for (const std::string& pair : c.tol) {
    size_t eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      err = "--tol expects KEY=VAL, got \"" + pair + "\"";
      return false;
    }
    double value = 0.0;
    try {
      size_t used = 0;
      value = std::stod(pair.substr(eq + 1), &used);
      if (used != pair.size() - eq - 1) throw std::invalid_argument(pair);
    } catch (const std::exception&) {
      err = "--tol " + pair + ": value is not a number";
      return false;
    }
    j["tolerances"][pair.substr(0, eq)] = value;
  }
  if (!c.trunc.empty()) {
    std::vector<int> t;
    if (!parse_ints(c.trunc, t)) {
      err = "--trunc expects comma-separated integers";
      return false;
    }
    j["truncations"] = t;
  }
  if (c.seed >= 0) j["seed"] = c.seed;
  if (certificates) j["certificates"] = true;
  merged = j.dump();
  return true;
}

struct SystemGuard {
  lk_system* sys = nullptr;
  ~SystemGuard() { lk_system_free(sys); }
};

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { lk_string_free(s); }
};

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("LARCKIT_THREADS"))
    lk_set_threads(std::atoi(threads));

  CLI::App app{"approximate strong operator controllability toolkit"};
  app.require_subcommand(1);

  Common common;

  CLI::App* cmd_analyze = app.add_subcommand(
      "analyze", "spectral checks, coupling graph, closure, verdict");
  bool certificates = false;
  add_common(cmd_analyze, common, false);
  cmd_analyze->add_flag("--certificates", certificates,
                        "emit bracket-word certificates when hypotheses hold");

  CLI::App* cmd_closure =
      app.add_subcommand("closure", "Lie closure history per truncation");
  add_common(cmd_closure, common, true);

  CLI::App* cmd_kronecker = app.add_subcommand(
      "kronecker", "align drift phases with a torus target");
  std::string target_text;
  double delta = 0.0, horizon = 0.0;
  int modes = 0;
  add_common(cmd_kronecker, common, false);
  cmd_kronecker
      ->add_option("--target", target_text, "comma-separated target phases")
      ->required();
  cmd_kronecker->add_option("--delta", delta, "per-mode phase tolerance")
      ->required();
  cmd_kronecker->add_option("--horizon", horizon,
                            "scan horizon (<= 0: heuristic + auto-extend)");
  cmd_kronecker->add_option("--modes", modes,
                            "leading modes to align (<= 0: all)");

  CLI::App* cmd_recurrence = app.add_subcommand(
      "recurrence", "positive return time into a strong neighborhood");
  double t_minus = 0.0, eps = 0.0;
  int n_vectors = 3;
  add_common(cmd_recurrence, common, false);
  cmd_recurrence->add_option("--tminus", t_minus, "reference time (<= 0)");
  cmd_recurrence->add_option("--eps", eps, "neighborhood radius")->required();
  cmd_recurrence->add_option("--vectors", n_vectors,
                             "number of seeded random test vectors");

  CLI::App* cmd_blocks = app.add_subcommand(
      "blocks", "block decomposition and per-block closures");
  std::string generators_text;
  add_common(cmd_blocks, common, false);
  cmd_blocks->add_option("--generators", generators_text,
                         "comma-separated indices (0 = drift; default all)");

  CLI::App* cmd_simulate = app.add_subcommand(
      "simulate", "propagate a piecewise-constant schedule");
  std::string schedule_path;
  add_common(cmd_simulate, common, true);
  cmd_simulate->add_option("--schedule", schedule_path, "schedule JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  std::string merged, err;
  if (!merge_flags(common, certificates, merged, err)) return fail_parse(err);

  SystemGuard guard;
  lk_status st = lk_system_from_json(merged.c_str(), &guard.sys);
  if (st != LK_OK) return fail_status(st);
  lk_system* sys = guard.sys;

  StringGuard report;

  if (cmd_analyze->parsed()) {
    st = lk_analyze(sys, &report.s);
    if (st != LK_OK && st != LK_HYPOTHESES_UNMET) return fail_status(st);
    if (!deliver(common.out, report.s))
      return fail_parse("cannot write \"" + common.out + "\"");
    return exit_code(st);
  }

  if (cmd_closure->parsed()) {
    st = lk_closure(sys, &report.s);
    if (st != LK_OK) return fail_status(st);
    if (!deliver(common.out, report.s))
      return fail_parse("cannot write \"" + common.out + "\"");
    if (!common.csv.empty()) {
      StringGuard csv;
      st = lk_closure_csv(sys, &csv.s);
      if (st != LK_OK) return fail_status(st);
      if (!write_file(common.csv, csv.s))
        return fail_parse("cannot write \"" + common.csv + "\"");
    }
    return kExitOk;
  }

  if (cmd_kronecker->parsed()) {
    std::vector<double> target;
    if (!parse_doubles(target_text, target))
      return fail_parse("--target expects comma-separated numbers");
    int used = modes <= 0 ? lk_system_modes(sys) : modes;
    if (static_cast<int>(target.size()) != used)
      return fail_parse("--target needs exactly " + std::to_string(used) +
                        " phases");
    st = lk_kronecker(sys, target.data(), modes, delta, horizon, &report.s);
    if (st != LK_OK) return fail_status(st);
    if (!deliver(common.out, report.s))
      return fail_parse("cannot write \"" + common.out + "\"");
    return kExitOk;
  }

  if (cmd_recurrence->parsed()) {
    st = lk_recurrence(sys, t_minus, eps, n_vectors, &report.s);
    if (st != LK_OK) return fail_status(st);
    if (!deliver(common.out, report.s))
      return fail_parse("cannot write \"" + common.out + "\"");
    return kExitOk;
  }

  if (cmd_blocks->parsed()) {
    std::vector<int> generators;
    if (!generators_text.empty() && !parse_ints(generators_text, generators))
      return fail_parse("--generators expects comma-separated integers");
    st = lk_blocks(sys, generators.empty() ? nullptr : generators.data(),
                   static_cast<int>(generators.size()), &report.s);
    if (st != LK_OK) return fail_status(st);
    if (!deliver(common.out, report.s))
      return fail_parse("cannot write \"" + common.out + "\"");
    return kExitOk;
  }

  if (cmd_simulate->parsed()) {
    std::string schedule_text;
    if (!read_file(schedule_path, schedule_text))
      return fail_parse("cannot open \"" + schedule_path + "\"");
    st = lk_simulate(sys, schedule_text.c_str(), &report.s);
    if (st != LK_OK) return fail_status(st);
    if (!deliver(common.out, report.s))
      return fail_parse("cannot write \"" + common.out + "\"");
    if (!common.csv.empty()) {
      StringGuard csv;
      st = lk_simulate_csv(sys, schedule_text.c_str(), &csv.s);
      if (st != LK_OK) return fail_status(st);
      if (!write_file(common.csv, csv.s))
        return fail_parse("cannot write \"" + common.csv + "\"");
    }
    return kExitOk;
  }

  return fail_parse("no command");
}
