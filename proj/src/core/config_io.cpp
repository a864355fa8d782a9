#include "core/config_io.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "core/matrix_ops.hpp"
#include "core/models.hpp"
#include "core/spectrum.hpp"

namespace larckit {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& what) {
  throw ParseError(ctx + ": " + what);
}

const ordered_json* find(const ordered_json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void check_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                const std::string& ctx) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) fail(ctx, "unknown key \"" + it.key() + "\"");
  }
}

double get_number(const ordered_json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ctx, "expected a number");
  double x = j.get<double>();
  if (!std::isfinite(x)) fail(ctx, "non-finite number");
  return x;
}

long long get_integer(const ordered_json& j, const std::string& ctx) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    fail(ctx, "expected an integer");
  return j.get<long long>();
}

bool get_bool(const ordered_json& j, const std::string& ctx) {
  if (!j.is_boolean()) fail(ctx, "expected a boolean");
  return j.get<bool>();
}

std::string get_string(const ordered_json& j, const std::string& ctx) {
  if (!j.is_string()) fail(ctx, "expected a string");
  return j.get<std::string>();
}

Rational rational_from_json(const ordered_json& j, const std::string& ctx) {
  try {
    if (j.is_number_integer() || j.is_number_unsigned())
      return Rational(j.get<long long>());
    if (j.is_string()) {
      std::string s = j.get<std::string>();
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t");
      if (a == std::string::npos) fail(ctx, "empty rational string");
      return Rational(s.substr(a, b - a + 1));
    }
    if (j.is_array() && j.size() == 2) {
      BigInt p(get_integer(j[0], ctx)), q(get_integer(j[1], ctx));
      if (q == 0) fail(ctx, "zero denominator");
      return Rational(p, q);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(ctx, std::string("bad rational (") + e.what() + ")");
  }
  fail(ctx, "rationals are integers, \"p/q\" strings, or [p, q] pairs");
}

Complex complex_from_json(const ordered_json& j, const std::string& ctx) {
  if (j.is_number()) return Complex(get_number(j, ctx), 0.0);
  if (j.is_array() && j.size() == 2)
    return Complex(get_number(j[0], ctx + "[0]"), get_number(j[1], ctx + "[1]"));
  fail(ctx, "complex entries are a number or an [re, im] pair");
}

ComplexMatrix dense_from_json(const ordered_json& rows, int dim,
                              const std::string& ctx) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    fail(ctx, "expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const ordered_json& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail(ctx, "row " + std::to_string(r) + ": expected " +
                    std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c)
      m(r, c) = complex_from_json(
          row[c], ctx + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

ComplexMatrix sparse_from_json(const ordered_json& entries, int dim,
                               const std::string& ctx) {
  if (!entries.is_array()) fail(ctx, "expected a list of [row, col, re, im]");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  std::set<std::pair<int, int>> given;
  for (size_t i = 0; i < entries.size(); ++i) {
    const std::string ectx = ctx + "[" + std::to_string(i) + "]";
    const ordered_json& e = entries[i];
    if (!e.is_array() || e.size() != 4) fail(ectx, "expected [row, col, re, im]");
    long long r = get_integer(e[0], ectx), c = get_integer(e[1], ectx);
    if (r < 0 || r >= dim || c < 0 || c >= dim)
      fail(ectx, "index out of range (0-based)");
    Complex v(get_number(e[2], ectx), get_number(e[3], ectx));
    if (r == c && v.imag() != 0.0) fail(ectx, "diagonal entry must be real");
    if (!given.insert({int(r), int(c)}).second) fail(ectx, "duplicate entry");
    m(r, c) = v;
  }
  // Hermitian completion: mirror every one-sided entry.
  for (const auto& [r, c] : given) {
    if (r != c && !given.count({c, r})) m(c, r) = std::conj(m(r, c));
  }
  if (!is_hermitian(m, kDefaultTol))
    fail(ctx, "entries are not Hermitian-consistent");
  return m;
}

ComplexMatrix control_from_json(const ordered_json& j, int dim,
                                const std::string& ctx) {
  ComplexMatrix m;
  if (j.is_array()) {
    m = dense_from_json(j, dim, ctx);
  } else if (j.is_object()) {
    check_keys(j, {"dense", "sparse"}, ctx);
    const ordered_json* d = find(j, "dense");
    const ordered_json* s = find(j, "sparse");
    if (!!d == !!s) fail(ctx, "give exactly one of \"dense\" or \"sparse\"");
    m = d ? dense_from_json(*d, dim, ctx + ".dense")
          : sparse_from_json(*s, dim, ctx + ".sparse");
  } else {
    fail(ctx, "expected a dense matrix or {\"dense\"| \"sparse\"} object");
  }
  if (!is_hermitian(m, kDefaultTol)) fail(ctx, "control is not Hermitian");
  return m;
}

ExactValue exact_tag_from_json(const ordered_json& j, const std::string& ctx) {
  ExactValue v;
  if (j.is_object()) {
    check_keys(j, {"rational", "coefficients"}, ctx);
    if (const ordered_json* r = find(j, "rational"))
      v.rational = rational_from_json(*r, ctx + ".rational");
    if (const ordered_json* co = find(j, "coefficients")) {
      if (!co->is_object()) fail(ctx, "\"coefficients\" must be an object");
      for (auto it = co->begin(); it != co->end(); ++it) {
        if (it.key().empty()) fail(ctx, "empty symbol name");
        v.coeffs[it.key()] =
            rational_from_json(it.value(), ctx + ".coefficients." + it.key());
      }
    }
  } else {
    v.rational = rational_from_json(j, ctx);  // bare rational shorthand
  }
  v.normalize();
  return v;
}

DriftSpectrum drift_from_json(const ordered_json& j, int dim, double gap_tol,
                              const std::string& ctx) {
  const ordered_json* eigenvalues = nullptr;
  const ordered_json* exact = nullptr;
  const ordered_json* symbols = nullptr;
  const ordered_json* matrix = nullptr;
  if (j.is_array()) {
    eigenvalues = &j;  // shorthand: bare list of diagonal values
  } else if (j.is_object()) {
    check_keys(j, {"eigenvalues", "exact", "symbols", "matrix"}, ctx);
    eigenvalues = find(j, "eigenvalues");
    exact = find(j, "exact");
    symbols = find(j, "symbols");
    matrix = find(j, "matrix");
  } else {
    fail(ctx, "expected an object or a list of eigenvalues");
  }
  if (!!eigenvalues == !!matrix)
    fail(ctx, "give exactly one of \"eigenvalues\" or \"matrix\"");

  if (matrix) {
    if (exact || symbols)
      fail(ctx, "exact tags require the \"eigenvalues\" form");
    ComplexMatrix h0 = dense_from_json(*matrix, dim, ctx + ".matrix");
    if (!is_hermitian(h0, kDefaultTol)) fail(ctx, "drift matrix not Hermitian");
    return spectrum_from_hermitian(h0, gap_tol);
  }

  if (!eigenvalues->is_array() ||
      static_cast<int>(eigenvalues->size()) != dim)
    fail(ctx, "\"eigenvalues\" must list exactly dim values");
  std::vector<double> values(dim);
  for (int i = 0; i < dim; ++i)
    values[i] = get_number((*eigenvalues)[i],
                           ctx + ".eigenvalues[" + std::to_string(i) + "]");

  std::vector<std::optional<ExactValue>> tags;
  if (exact) {
    if (!exact->is_array() || static_cast<int>(exact->size()) != dim)
      fail(ctx, "\"exact\" must list one tag (or null) per eigenvalue");
    tags.resize(dim);
    for (int i = 0; i < dim; ++i) {
      const ordered_json& t = (*exact)[i];
      if (t.is_null()) continue;
      tags[i] = exact_tag_from_json(t, ctx + ".exact[" + std::to_string(i) + "]");
    }
  }

  std::map<std::string, double> symbol_values;
  if (symbols) {
    if (!symbols->is_object()) fail(ctx, "\"symbols\" must be an object");
    for (auto it = symbols->begin(); it != symbols->end(); ++it)
      symbol_values[it.key()] =
          get_number(it.value(), ctx + ".symbols." + it.key());
  }
  return spectrum_from_diagonal(values, gap_tol, std::move(tags),
                                std::move(symbol_values));
}

void apply_tolerances(AnalysisOptions& opts, const ordered_json& j,
                      const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    opts.set(it.key(), get_number(it.value(), ctx + "." + it.key()));
}

std::vector<int> truncations_from_json(const ordered_json& j, int dim,
                                       const std::string& ctx) {
  if (!j.is_array()) fail(ctx, "expected a list of integers");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i) {
    long long v = get_integer(j[i], ctx + "[" + std::to_string(i) + "]");
    if (v < 1 || v > dim) fail(ctx, "truncations must lie in [1, dim]");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) fail(ctx, "empty truncation list");
  return out;
}

std::string canonical_model_name(std::string s) {
  for (char& c : s) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '_') c = '-';
  }
  return s;
}

ControlSystem model_from_json(const ordered_json& j, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  const ordered_json* name_j = find(j, "name");
  if (!name_j) fail(ctx, "missing \"name\"");
  std::string name = canonical_model_name(get_string(*name_j, ctx + ".name"));

  if (name == "thm2") {
    check_keys(j, {"name", "n", "eigenvalues", "coupling", "rational_tags"},
               ctx);
    if (const ordered_json* n_j = find(j, "n")) {
      long long n = get_integer(*n_j, ctx + ".n");
      if (n < 2 || n > kMaxDenseDim) fail(ctx, "n out of range");
      return make_thm2_model(static_cast<int>(n));
    }
    const ordered_json* ev = find(j, "eigenvalues");
    const ordered_json* cp = find(j, "coupling");
    if (!ev || !cp) fail(ctx, "give \"n\" or \"eigenvalues\" + \"coupling\"");
    if (!ev->is_array() || ev->empty()) fail(ctx, "bad \"eigenvalues\"");
    std::vector<double> values;
    for (size_t i = 0; i < ev->size(); ++i)
      values.push_back(get_number((*ev)[i], ctx + ".eigenvalues"));
    ComplexMatrix coupling = dense_from_json(
        *cp, static_cast<int>(values.size()), ctx + ".coupling");
    bool rational_tags = false;
    if (const ordered_json* rt = find(j, "rational_tags"))
      rational_tags = get_bool(*rt, ctx + ".rational_tags");
    return make_thm2_model(values, coupling, rational_tags);
  }

  if (name == "jaynes-cummings" || name == "jc") {
    check_keys(j, {"name", "omega_atom", "omega_cavity", "omega_int", "cutoff"},
               ctx);
    const ordered_json* oa = find(j, "omega_atom");
    const ordered_json* oc = find(j, "omega_cavity");
    const ordered_json* oi = find(j, "omega_int");
    const ordered_json* cut = find(j, "cutoff");
    if (!oa || !oc || !oi || !cut)
      fail(ctx, "requires omega_atom, omega_cavity, omega_int, cutoff");
    long long cutoff = get_integer(*cut, ctx + ".cutoff");
    if (cutoff < 1 || 2 * cutoff + 1 > kMaxDenseDim) fail(ctx, "cutoff out of range");
    return make_jaynes_cummings(get_number(*oa, ctx + ".omega_atom"),
                                get_number(*oc, ctx + ".omega_cavity"),
                                get_number(*oi, ctx + ".omega_int"),
                                static_cast<int>(cutoff));
  }

  if (name == "harmonic-oscillator" || name == "ho") {
    check_keys(j, {"name", "cutoff"}, ctx);
    const ordered_json* cut = find(j, "cutoff");
    if (!cut) fail(ctx, "requires cutoff");
    long long cutoff = get_integer(*cut, ctx + ".cutoff");
    if (cutoff < 2 || cutoff + 1 > kMaxDenseDim) fail(ctx, "cutoff out of range");
    ControlSystem sys;
    sys.spectrum = make_harmonic_oscillator(static_cast<int>(cutoff));
    return sys;
  }

  fail(ctx, "unknown model \"" + name + "\"");
}

ordered_json parse_json_text(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

// True when every projection is a 0/1 diagonal matrix, i.e. the spectrum was
// declared in the diagonal eigenvalue form and can be exported the same way.
bool diagonal_projections(const DriftSpectrum& s) {
  for (const ComplexMatrix& f : s.projections) {
    for (int r = 0; r < f.rows(); ++r)
      for (int c = 0; c < f.cols(); ++c) {
        Complex v = f(r, c);
        if (r != c && std::abs(v) > 1e-12) return false;
        if (r == c && std::abs(v) > 1e-12 && std::abs(v - 1.0) > 1e-12)
          return false;
      }
  }
  return true;
}

std::string rational_str(const Rational& r) { return r.str(); }

ordered_json exact_tag_to_json(const ExactValue& v) {
  ordered_json j = ordered_json::object();
  j["rational"] = rational_str(v.rational);
  if (!v.coeffs.empty()) {
    ordered_json co = ordered_json::object();
    for (const auto& [name, c] : v.coeffs) co[name] = rational_str(c);
    j["coefficients"] = std::move(co);
  }
  return j;
}

}  // namespace

void AnalysisOptions::set(const std::string& key, double value) {
  auto positive = [&](double v) {
    if (!(v > 0) || !std::isfinite(v))
      throw ParseError("tolerance \"" + key + "\" must be positive");
    return v;
  };
  auto integral = [&](double v, long long lo) {
    double r = std::nearbyint(v);
    if (!std::isfinite(v) || std::abs(v - r) > 0 || r < double(lo))
      throw ParseError("tolerance \"" + key + "\" must be an integer >= " +
                       std::to_string(lo));
    return static_cast<long long>(r);
  };
  if (key == "gap_tol")
    gap_tol = std::isfinite(value) ? value : -1.0;
  else if (key == "independence_bound" || key == "bound")
    independence_bound = integral(value, 1);
  else if (key == "independence_tau" || key == "tau")
    independence_tau = positive(value);
  else if (key == "edge_tol")
    edge_tol = std::isfinite(value) ? value : -1.0;
  else if (key == "rank_tol")
    rank_tol = positive(value);
  else if (key == "max_passes")
    max_passes = integral(value, 1);
  else if (key == "block_tol")
    block_tol = positive(value);
  else
    throw ParseError("unknown tolerance key \"" + key + "\"");
}

SystemConfig parse_config(const std::string& json_text) {
  ordered_json j = parse_json_text(json_text);
  if (!j.is_object()) throw ParseError("config: top level must be an object");

  SystemConfig cfg;
  const bool by_model = find(j, "model") != nullptr;
  if (by_model) {
    check_keys(j,
               {"model", "controls", "control_bound", "name", "tolerances",
                "truncations", "seed", "certificates", "dim"},
               "config");
  } else {
    check_keys(j,
               {"dim", "drift", "controls", "control_bound", "name",
                "tolerances", "truncations", "seed", "certificates"},
               "config");
  }

  if (const ordered_json* t = find(j, "tolerances"))
    apply_tolerances(cfg.options, *t, "config.tolerances");
  if (const ordered_json* n = find(j, "name"))
    cfg.name = get_string(*n, "config.name");
  if (const ordered_json* s = find(j, "seed")) {
    long long seed = get_integer(*s, "config.seed");
    if (seed < 0) throw ParseError("config.seed: must be >= 0");
    cfg.options.seed = static_cast<std::uint64_t>(seed);
  }
  if (const ordered_json* c = find(j, "certificates"))
    cfg.options.certificates = get_bool(*c, "config.certificates");

  try {
    if (by_model) {
      cfg.system = model_from_json(*find(j, "model"), "config.model");
      if (const ordered_json* d = find(j, "dim")) {
        if (get_integer(*d, "config.dim") != cfg.system.dim())
          throw ParseError("config.dim: does not match the model dimension " +
                           std::to_string(cfg.system.dim()));
      }
      if (const ordered_json* controls = find(j, "controls")) {
        if (!controls->is_array())
          throw ParseError("config.controls: expected a list");
        cfg.system.controls.clear();
        for (size_t i = 0; i < controls->size(); ++i)
          cfg.system.controls.push_back(
              control_from_json((*controls)[i], cfg.system.dim(),
                                "config.controls[" + std::to_string(i) + "]"));
      }
    } else {
      const ordered_json* dim_j = find(j, "dim");
      if (!dim_j) throw ParseError("config: missing \"dim\"");
      long long dim = get_integer(*dim_j, "config.dim");
      if (dim < 1 || dim > kMaxDenseDim)
        throw ParseError("config.dim: must lie in [1, " +
                         std::to_string(kMaxDenseDim) + "]");
      const ordered_json* drift = find(j, "drift");
      if (!drift) throw ParseError("config: missing \"drift\"");
      cfg.system.spectrum = drift_from_json(
          *drift, static_cast<int>(dim), cfg.options.gap_tol, "config.drift");
      if (const ordered_json* controls = find(j, "controls")) {
        if (!controls->is_array())
          throw ParseError("config.controls: expected a list");
        for (size_t i = 0; i < controls->size(); ++i)
          cfg.system.controls.push_back(
              control_from_json((*controls)[i], static_cast<int>(dim),
                                "config.controls[" + std::to_string(i) + "]"));
      }
    }
    if (const ordered_json* b = find(j, "control_bound")) {
      double bound = get_number(*b, "config.control_bound");
      if (!(bound > 0)) throw ParseError("config.control_bound: must be > 0");
      cfg.system.control_bound = bound;
    }
    // Spectrum-only configs (no controls) are fine for the kronecker and
    // recurrence commands; analyze will report them as unmet hypotheses.
    if (cfg.system.controls.empty())
      cfg.system.spectrum.validate();
    else
      cfg.system.validate();
  } catch (const std::invalid_argument& e) {
    // Precondition violations from the constructors mean the file describes
    // an inadmissible system: a parse-level failure for the CLI contract.
    throw ParseError(std::string("config: ") + e.what());
  }

  if (const ordered_json* t = find(j, "truncations"))
    cfg.options.truncations =
        truncations_from_json(*t, cfg.system.dim(), "config.truncations");
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

nlohmann::ordered_json config_to_json(const SystemConfig& c) {
  const DriftSpectrum& s = c.system.spectrum;
  ordered_json j = ordered_json::object();
  if (!c.name.empty()) j["name"] = c.name;
  j["dim"] = s.dim;

  ordered_json drift = ordered_json::object();
  if (diagonal_projections(s)) {
    // Per-dimension diagonal values: position i belongs to the mode whose
    // projection carries it.
    std::vector<int> mode_of(s.dim, -1);
    for (int k = 0; k < s.modes(); ++k)
      for (int i = 0; i < s.dim; ++i)
        if (std::abs(s.projections[k](i, i) - 1.0) < 1e-12) mode_of[i] = k;
    ordered_json values = ordered_json::array();
    for (int i = 0; i < s.dim; ++i) values.push_back(s.eigenvalues[mode_of[i]]);
    drift["eigenvalues"] = std::move(values);
    if (!s.exact_values.empty()) {
      ordered_json exact = ordered_json::array();
      bool any = false;
      for (int i = 0; i < s.dim; ++i) {
        const auto& tag = s.exact_values[mode_of[i]];
        if (tag) {
          exact.push_back(exact_tag_to_json(*tag));
          any = true;
        } else {
          exact.push_back(nullptr);
        }
      }
      if (any) drift["exact"] = std::move(exact);
    }
    if (!s.symbols.empty()) {
      ordered_json sym = ordered_json::object();
      for (const auto& [name, value] : s.symbols) sym[name] = value;
      drift["symbols"] = std::move(sym);
    }
  } else {
    drift["matrix"] = matrix_to_json(s.drift_matrix());
  }
  j["drift"] = std::move(drift);

  ordered_json controls = ordered_json::array();
  for (const ComplexMatrix& h : c.system.controls)
    controls.push_back(matrix_to_json(h));
  j["controls"] = std::move(controls);
  j["control_bound"] = c.system.control_bound;

  const AnalysisOptions& o = c.options;
  ordered_json tol = ordered_json::object();
  if (o.gap_tol >= 0) tol["gap_tol"] = o.gap_tol;
  tol["independence_bound"] = o.independence_bound;
  tol["independence_tau"] = o.independence_tau;
  if (o.edge_tol >= 0) tol["edge_tol"] = o.edge_tol;
  tol["rank_tol"] = o.rank_tol;
  tol["max_passes"] = o.max_passes;
  tol["block_tol"] = o.block_tol;
  j["tolerances"] = std::move(tol);
  if (!o.truncations.empty()) {
    ordered_json tr = ordered_json::array();
    for (int t : o.truncations) tr.push_back(t);
    j["truncations"] = std::move(tr);
  }
  j["seed"] = o.seed;
  if (o.certificates) j["certificates"] = true;
  return j;
}

ScheduleInput parse_schedule(const std::string& json_text) {
  ordered_json j = parse_json_text(json_text);
  const ordered_json* segments = nullptr;
  const ordered_json* initial = nullptr;
  if (j.is_array()) {
    segments = &j;  // shorthand: bare list of segments
  } else if (j.is_object()) {
    check_keys(j, {"segments", "initial"}, "schedule");
    segments = find(j, "segments");
    initial = find(j, "initial");
  } else {
    fail("schedule", "top level must be an object or a segment list");
  }

  ScheduleInput out;
  if (segments) {
    if (!segments->is_array()) fail("schedule.segments", "expected a list");
    for (size_t i = 0; i < segments->size(); ++i) {
      const std::string ctx = "schedule.segments[" + std::to_string(i) + "]";
      const ordered_json& seg = (*segments)[i];
      if (!seg.is_object()) fail(ctx, "expected an object");
      check_keys(seg, {"duration", "amplitudes"}, ctx);
      const ordered_json* dur = find(seg, "duration");
      const ordered_json* amp = find(seg, "amplitudes");
      if (!dur || !amp) fail(ctx, "requires duration and amplitudes");
      Segment s;
      s.duration = get_number(*dur, ctx + ".duration");
      if (s.duration < 0) fail(ctx, "negative duration");
      if (!amp->is_array()) fail(ctx, "amplitudes must be a list");
      for (size_t k = 0; k < amp->size(); ++k)
        s.amplitudes.push_back(get_number((*amp)[k], ctx + ".amplitudes"));
      out.schedule.push_back(std::move(s));
    }
  }
  if (initial) {
    if (!initial->is_array()) fail("schedule.initial", "expected a list");
    for (size_t i = 0; i < initial->size(); ++i) {
      const std::string ctx = "schedule.initial[" + std::to_string(i) + "]";
      const ordered_json& vec = (*initial)[i];
      if (!vec.is_array() || vec.empty()) fail(ctx, "expected a vector");
      ComplexVector v(vec.size());
      for (size_t k = 0; k < vec.size(); ++k)
        v[k] = complex_from_json(vec[k], ctx + "[" + std::to_string(k) + "]");
      out.initial.push_back(std::move(v));
    }
  }
  return out;
}

ScheduleInput load_schedule(const std::string& path) {
  return parse_schedule(read_text_file(path));
}

std::string format_double(double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("format_double: non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::ordered_json complex_to_json(const Complex& z) {
  return ordered_json::array({z.real(), z.imag()});
}

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::ordered_json vector_to_json(const ComplexVector& v) {
  ordered_json out = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

namespace {

bool all_primitive(const ordered_json& arr) {
  for (const auto& e : arr)
    if (e.is_array() || e.is_object()) return false;
  return true;
}

void dump_rec(const ordered_json& j, std::string& out, int depth) {
  const std::string pad(2 * size_t(depth), ' ');
  const std::string pad_in(2 * size_t(depth + 1), ' ');
  switch (j.type()) {
    case ordered_json::value_t::null:
      out += "null";
      return;
    case ordered_json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case ordered_json::value_t::number_integer:
    case ordered_json::value_t::number_unsigned:
      out += j.dump();
      return;
    case ordered_json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case ordered_json::value_t::string:
      out += ordered_json(j.get<std::string>()).dump();
      return;
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (all_primitive(j)) {  // inline short numeric rows
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          dump_rec(e, out, depth);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        dump_rec(j[i], out, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in + ordered_json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    default:
      throw std::invalid_argument("dump_json17: unsupported value type");
  }
}

}  // namespace

std::string dump_json17(const nlohmann::ordered_json& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += "\n";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof())
    throw ParseError("error while reading \"" + path + "\"");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open \"" + path + "\" for writing");
  out << text;
  out.flush();
  if (!out.good())
    throw std::runtime_error("error while writing \"" + path + "\"");
}

}  // namespace larckit
