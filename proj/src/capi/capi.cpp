#include "larckit/larckit.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/config_io.hpp"
#include "core/lie_closure.hpp"
#include "core/types.hpp"

struct lk_system {
  larckit::SystemConfig cfg;
};

namespace {

thread_local std::string t_last_error;

lk_status fail(lk_status st, const char* what) {
  t_last_error = what;
  return st;
}

// Maps the library's exception taxonomy onto status codes; clears the error
// slot first so lk_last_error always refers to the latest call.
template <typename Fn>
lk_status guarded(Fn&& fn) {
  t_last_error.clear();
  try {
    return fn();
  } catch (const larckit::ParseError& e) {
    return fail(LK_ERR_PARSE, e.what());
  } catch (const larckit::HypothesesNotMet& e) {
    return fail(LK_HYPOTHESES_UNMET, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const larckit::NumericalError& e) {
    return fail(LK_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(LK_ERR_NUMERIC, e.what());
  }
}

// malloc so the string can cross the shared-library boundary and be released
// with lk_string_free from any runtime.
char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) return nullptr;
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

lk_status emit(const std::string& text, char** out) {
  *out = dup_string(text);
  if (!*out) return fail(LK_ERR_NUMERIC, "out of memory");
  return LK_OK;
}

}  // namespace

extern "C" {

const char* lk_version(void) { return larckit::kToolVersion; }

const char* lk_last_error(void) { return t_last_error.c_str(); }

void lk_set_threads(int n) {
  Eigen::setNbThreads(n < 1 ? 1 : n);
}

lk_status lk_system_from_json(const char* json_text, lk_system** out_system) {
  if (!json_text || !out_system) return fail(LK_ERR_NULL, "NULL argument");
  *out_system = nullptr;
  return guarded([&] {
    auto* sys = new lk_system{larckit::parse_config(json_text)};
    *out_system = sys;
    return LK_OK;
  });
}

lk_status lk_system_from_file(const char* path, lk_system** out_system) {
  if (!path || !out_system) return fail(LK_ERR_NULL, "NULL argument");
  *out_system = nullptr;
  return guarded([&] {
    auto* sys = new lk_system{larckit::load_config(path)};
    *out_system = sys;
    return LK_OK;
  });
}

void lk_system_free(lk_system* system) { delete system; }

int lk_system_dim(const lk_system* system) {
  return system ? system->cfg.system.dim() : -1;
}

int lk_system_modes(const lk_system* system) {
  return system ? system->cfg.system.spectrum.modes() : -1;
}

int lk_system_controls(const lk_system* system) {
  return system ? system->cfg.system.n_controls() : -1;
}

lk_status lk_set_option(lk_system* system, const char* key, double value) {
  if (!system || !key) return fail(LK_ERR_NULL, "NULL argument");
  return guarded([&] {
    system->cfg.options.set(key, value);
    return LK_OK;
  });
}

lk_status lk_set_seed(lk_system* system, unsigned long long seed) {
  if (!system) return fail(LK_ERR_NULL, "NULL argument");
  system->cfg.options.seed = seed;
  return LK_OK;
}

lk_status lk_set_truncations(lk_system* system, const int* truncations,
                             int count) {
  if (!system || (count > 0 && !truncations))
    return fail(LK_ERR_NULL, "NULL argument");
  return guarded([&] {
    std::vector<int> t(truncations, truncations + (count > 0 ? count : 0));
    for (int v : t)
      if (v < 1 || v > system->cfg.system.dim())
        throw larckit::ParseError("truncations must lie in [1, dim]");
    system->cfg.options.truncations = std::move(t);
    return LK_OK;
  });
}

lk_status lk_set_certificates(lk_system* system, int enabled) {
  if (!system) return fail(LK_ERR_NULL, "NULL argument");
  system->cfg.options.certificates = enabled != 0;
  return LK_OK;
}

lk_status lk_analyze(const lk_system* system, char** out_report) {
  if (!system || !out_report) return fail(LK_ERR_NULL, "NULL argument");
  *out_report = nullptr;
  return guarded([&]() -> lk_status {
    larckit::AnalysisOutcome outcome = larckit::analyze(system->cfg);
    lk_status st = emit(larckit::dump_json17(outcome.report), out_report);
    if (st != LK_OK) return st;
    return outcome.verdict == larckit::AnalysisVerdict::ControllableByThm2
               ? LK_OK
               : LK_HYPOTHESES_UNMET;
  });
}

lk_status lk_closure(const lk_system* system, char** out_report) {
  if (!system || !out_report) return fail(LK_ERR_NULL, "NULL argument");
  *out_report = nullptr;
  return guarded([&] {
    return emit(larckit::dump_json17(larckit::closure_report(system->cfg)),
                out_report);
  });
}

lk_status lk_closure_csv(const lk_system* system, char** out_csv) {
  if (!system || !out_csv) return fail(LK_ERR_NULL, "NULL argument");
  *out_csv = nullptr;
  return guarded([&] { return emit(larckit::closure_csv(system->cfg), out_csv); });
}

lk_status lk_kronecker(const lk_system* system, const double* target,
                       int n_modes, double delta, double horizon,
                       char** out_report) {
  if (!system || !target || !out_report) return fail(LK_ERR_NULL, "NULL argument");
  *out_report = nullptr;
  return guarded([&] {
    int used = n_modes <= 0 ? system->cfg.system.spectrum.modes() : n_modes;
    std::vector<double> phases(target, target + used);
    return emit(larckit::dump_json17(larckit::kronecker_report(
                    system->cfg, phases, delta, horizon, n_modes)),
                out_report);
  });
}

lk_status lk_recurrence(const lk_system* system, double t_minus, double eps,
                        int n_vectors, char** out_report) {
  if (!system || !out_report) return fail(LK_ERR_NULL, "NULL argument");
  *out_report = nullptr;
  return guarded([&] {
    return emit(larckit::dump_json17(larckit::recurrence_report(
                    system->cfg, t_minus, eps, n_vectors)),
                out_report);
  });
}

lk_status lk_blocks(const lk_system* system, const int* generators, int count,
                    char** out_report) {
  if (!system || !out_report || (count > 0 && !generators))
    return fail(LK_ERR_NULL, "NULL argument");
  *out_report = nullptr;
  return guarded([&] {
    std::vector<int> idx(generators, generators + (count > 0 ? count : 0));
    return emit(
        larckit::dump_json17(larckit::blocks_report(system->cfg, std::move(idx))),
        out_report);
  });
}

lk_status lk_simulate(const lk_system* system, const char* schedule_json,
                      char** out_report) {
  if (!system || !schedule_json || !out_report)
    return fail(LK_ERR_NULL, "NULL argument");
  *out_report = nullptr;
  return guarded([&] {
    larckit::ScheduleInput input = larckit::parse_schedule(schedule_json);
    return emit(
        larckit::dump_json17(larckit::simulate_report(system->cfg, input)),
        out_report);
  });
}

lk_status lk_simulate_csv(const lk_system* system, const char* schedule_json,
                          char** out_csv) {
  if (!system || !schedule_json || !out_csv)
    return fail(LK_ERR_NULL, "NULL argument");
  *out_csv = nullptr;
  return guarded([&] {
    larckit::ScheduleInput input = larckit::parse_schedule(schedule_json);
    return emit(larckit::product_formula_csv(system->cfg, input), out_csv);
  });
}

void lk_string_free(char* s) { std::free(s); }

}  // extern "C"
