#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/control_system.hpp"
#include "core/types.hpp"

namespace larckit {

// Malformed configuration input (bad JSON, missing fields, shape mismatch).
// Kept distinct from NumericalError so the CLI can map it to its own exit
// code.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Analysis knobs carried alongside the system description. Negative values
// mean "module default" where noted; every tolerance quoted in a report comes
// from here.
struct AnalysisOptions {
  double gap_tol = -1.0;        // degeneracy clustering; < 0 = 1e-9 * max|x|
  long long independence_bound = 20;  // B
  double independence_tau = 1e-9;     // tau
  double edge_tol = -1.0;       // coupling graph; < 0 = module default
  double rank_tol = 1e-9;       // Lie closure adjoin threshold
  long long max_passes = 50;
  double block_tol = 1e-7;      // commutant kernel threshold
  std::vector<int> truncations;  // empty = {dim}
  std::uint64_t seed = 0;
  bool certificates = false;  // emit bracket words in analyze reports

  // Applies a --tol KEY=VAL override; throws ParseError on an unknown key.
  void set(const std::string& key, double value);
};

struct SystemConfig {
  std::string name;  // optional label, echoed in reports
  ControlSystem system;
  AnalysisOptions options;
};

// Parses the JSON system format. Either an explicit description
//   { "dim": n,
//     "drift": { "eigenvalues": [...], "exact": [tag|null, ...],
//                "symbols": {...} }          (or "matrix": [[...]])
//     "controls": [ dense rows | {"dense": rows} | {"sparse": [[r,c,re,im]]} ],
//     "control_bound": 1.0, "tolerances": {...}, "truncations": [...],
//     "seed": 0, "certificates": false, "name": "..." }
// or a named model
//   { "model": { "name": "thm2" | "jaynes-cummings" | "harmonic-oscillator",
//                ...parameters... }, ...shared overrides... }
// Complex entries are a number or an [re, im] pair; exact-tag rationals are
// integers, "p/q" strings, or [p, q] pairs. Sparse controls are 0-based and
// Hermitian-completed (the mirror entry is filled in unless given).
SystemConfig parse_config(const std::string& json_text);
SystemConfig load_config(const std::string& path);

// Inverse of parse_config (dense controls, tags as strings); parses back to
// an equivalent system.
nlohmann::ordered_json config_to_json(const SystemConfig& c);

// Piecewise-constant schedule plus optional initial vectors:
//   { "segments": [ {"duration": t, "amplitudes": [...]}, ... ],
//     "initial": [ [entry, ...], ... ] }
struct ScheduleInput {
  Schedule schedule;
  std::vector<ComplexVector> initial;
};
ScheduleInput parse_schedule(const std::string& json_text);
ScheduleInput load_schedule(const std::string& path);

// Serialization helpers shared by every report writer.
std::string format_double(double x);  // %.17g
nlohmann::ordered_json complex_to_json(const Complex& z);  // [re, im]
nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m);
nlohmann::ordered_json vector_to_json(const ComplexVector& v);

// Deterministic dump: 2-space indent, keys in insertion order, every float
// printed with 17 significant digits, trailing newline.
std::string dump_json17(const nlohmann::ordered_json& j);

std::string read_text_file(const std::string& path);   // ParseError on failure
void write_text_file(const std::string& path, const std::string& text);

}  // namespace larckit
