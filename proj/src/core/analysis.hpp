#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "core/config_io.hpp"

namespace larckit {

inline constexpr const char* kToolName = "larckit";
inline constexpr const char* kToolVersion = "1.0.0";

enum class AnalysisVerdict { ControllableByThm2, HypothesesUnmet };
const char* to_string(AnalysisVerdict v);

struct AnalysisOutcome {
  AnalysisVerdict verdict = AnalysisVerdict::HypothesesUnmet;
  nlohmann::ordered_json report;
};

// Full pipeline: spectral verdicts -> coupling graph -> Lie closure per
// truncation -> hypothesis checklist -> verdict; bracket-word certificates
// when requested and the hypotheses hold; block report when the dimension
// permits. The report is deterministic: same config, same bytes.
AnalysisOutcome analyze(const SystemConfig& cfg);

// Closure-only report (the "closure" section of analyze) and its CSV history.
nlohmann::ordered_json closure_report(const SystemConfig& cfg);
std::string closure_csv(const SystemConfig& cfg);

// Torus phase alignment on the first n_modes eigenvalues (n_modes <= 0: all):
// finds t with dist(t * x_k / (2 pi) - target_k, Z) < delta, re-verifying the
// returned residuals. horizon <= 0 selects the heuristic plus auto-extension.
nlohmann::ordered_json kronecker_report(const SystemConfig& cfg,
                                        const std::vector<double>& target,
                                        double delta, double horizon,
                                        int n_modes);

// Return time into the strong eps-neighborhood of exp(i t_minus H0) on
// n_vectors seeded random unit test vectors; achieved error re-verified.
nlohmann::ordered_json recurrence_report(const SystemConfig& cfg,
                                         double t_minus, double eps,
                                         int n_vectors);

// Block decomposition plus per-block closure for the chosen generators
// (0 = drift, j >= 1 = control j); empty selection means all of them.
nlohmann::ordered_json blocks_report(const SystemConfig& cfg,
                                     std::vector<int> generator_indices);

// Propagator of a piecewise-constant schedule and its action on the given
// initial vectors.
nlohmann::ordered_json simulate_report(const SystemConfig& cfg,
                                       const ScheduleInput& input);

// CSV curves: closure history ("truncation,closure_dim,...") and product-
// formula convergence for the first segment's Hamiltonian split.
std::string product_formula_csv(const SystemConfig& cfg,
                                const ScheduleInput& input);

}  // namespace larckit
