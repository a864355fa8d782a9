#pragma once

#include <optional>
#include <vector>

#include "core/spectrum.hpp"
#include "core/types.hpp"

namespace larckit {

// Point of the maximal torus of the drift: V = sum_k e^{2 pi i lambda_k} F_k,
// one dimensionless phase per eigenprojection.
struct TorusElement {
  std::vector<double> phases;
  ComplexMatrix materialize(const DriftSpectrum& s) const;
};

// Torus generator X = sum_k x_k F_k (Hermitian); exp(i X) lands in the torus.
struct TorusGenerator {
  std::vector<double> phases;
  ComplexMatrix materialize(const DriftSpectrum& s) const;
};

// Strong neighborhood of a reference unitary: W belongs iff
// ||W psi_j - V psi_j|| < eps for every test vector.
struct NeighborhoodSpec {
  ComplexMatrix reference;
  std::vector<ComplexVector> test_vectors;
  double eps = 0.0;

  bool contains(const ComplexMatrix& w) const;
  double max_deviation(const ComplexMatrix& w) const;
};

struct KroneckerCertificate {
  double t = 0.0;
  std::vector<long long> y;
  std::vector<double> residuals;  // |t * xhat_k - y_k - lambda_k|
  double max_residual = 0.0;
  double search_horizon = 0.0;
  long long evaluations = 0;
};

// Search failure; carries the best candidate seen so the caller can retry
// with a larger horizon or report the near miss.
class HorizonExhausted : public NumericalError {
 public:
  HorizonExhausted(const std::string& what, KroneckerCertificate best_seen)
      : NumericalError(what), best(std::move(best_seen)) {}
  KroneckerCertificate best;
};

enum class RefineMode {
  Entry,     // earliest t entering the dip below delta (bisected crossing)
  LocalMin,  // bottom of the dip (golden-section)
};

struct KroneckerOptions {
  // Scan range is t in [0, horizon]; horizon <= 0 selects the heuristic
  // 1e3 / (smallest pairwise gap of xhat).
  double horizon = 0.0;
  // When set, the horizon doubles on exhaustion instead of failing, until the
  // evaluation budget runs out.
  bool auto_extend = false;
  long long max_total_steps = 10'000'000;
  // Skip the dip containing the scan start when it already qualifies
  // (recurrence from t_minus = 0 must not return the trivial t = 0 plateau).
  bool skip_initial_plateau = false;
  RefineMode refine = RefineMode::Entry;
  // Step for the near-miss rescue scan that resolves dips too shallow for the
  // certified coarse grid to be obliged to see.
  double fine_step = 1e-6;
  double near_miss_factor = 1.5;
};

// Find t with |t * xhat_k - y_k - lambda_k| < delta for all k and integer y.
// Scans pivot-mode alignment windows in ascending t with a certified coarse
// step delta / (2 max|xhat|): any t* with residual <= delta/2 is never missed.
// Throws HorizonExhausted (with best candidate) or std::invalid_argument.
KroneckerCertificate kronecker_solve(const std::vector<double>& xhat,
                                     const std::vector<double>& lambda,
                                     double delta,
                                     const KroneckerOptions& opts);

// Fixed-horizon form.
KroneckerCertificate kronecker_solve(const std::vector<double>& xhat,
                                     const std::vector<double>& lambda,
                                     double delta, double horizon);

double default_horizon(const std::vector<double>& xhat);

struct TorusApproxResult {
  double t = 0.0;
  double achieved = 0.0;  // ||(exp(i t H0) - V) P_n||
  double delta = 0.0;     // eps / (4 pi n): per-mode phase tolerance used
  int n_modes = 0;
  KroneckerCertificate certificate;
};

// Steer exp(i t H0) within eps of the torus element on the span of the first
// n_modes eigenprojections. delta = eps / (4 pi n_modes) via the chordal
// bound |e^{2 pi i a} - e^{2 pi i b}| <= 2 pi |a - b|.
TorusApproxResult torus_approx(const DriftSpectrum& s,
                               const TorusElement& target, double eps,
                               int n_modes);

struct RecurrenceResult {
  double t_plus = 0.0;
  double achieved = 0.0;  // max_j ||(exp(i t_plus H0) - reference) psi_j||
  double delta = 0.0;
  int n_modes_used = 0;
  bool exact_period = false;  // fast path: commensurable tagged spectrum
  std::optional<KroneckerCertificate> certificate;
};

struct RecurrenceOptions {
  // Allow the closed-form answer t_minus + m * period when the tags prove the
  // flow periodic (the scan path is still available for testing).
  bool allow_exact_period = true;
  long long max_total_steps = 100'000'000;
};

// Positive return time into the strong neighborhood of exp(i t_minus H0):
// tail modes are cut where ||(1 - P_N) psi_j|| <= eps/3 (greedy smallest N),
// the first N phases are matched within delta = eps / (6 pi) by
// kronecker_solve, and the result is re-verified on the full space.
RecurrenceResult recurrence_time(const DriftSpectrum& s, double t_minus,
                                 const NeighborhoodSpec& nbhd,
                                 const RecurrenceOptions& opts = {});

}  // namespace larckit
