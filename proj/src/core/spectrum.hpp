#pragma once

#include <map>
#include <optional>
#include <vector>

#include "core/exact_value.hpp"
#include "core/types.hpp"

namespace larckit {

// Pure-point drift at truncation: distinct eigenvalues with spectral
// projections resolving the identity. The ambient basis is whatever the
// projections are expressed in; nothing requires it to be the eigenbasis.
struct DriftSpectrum {
  int dim = 0;
  std::vector<double> eigenvalues;  // distinct, ascending
  std::vector<int> multiplicities;
  std::vector<ComplexMatrix> projections;
  // Empty, or one entry per eigenvalue (individual entries may be absent).
  std::vector<std::optional<ExactValue>> exact_values;
  std::map<std::string, double> symbols;  // declared symbol values

  int modes() const { return static_cast<int>(eigenvalues.size()); }
  bool non_degenerate() const;
  bool has_exact_tags() const;  // every eigenvalue tagged
  ComplexMatrix drift_matrix() const;  // sum x_k F_k
  ComplexMatrix prefix_projector(int n_modes) const;  // sum of first n_modes F_k
  std::vector<double> xhat() const;  // eigenvalues / (2 pi)

  // Resolution of identity, orthogonal Hermitian idempotents, multiplicities
  // consistent with traces, tags consistent with numeric values.
  void validate(double tol = kDefaultTol) const;
};

// Clusters raw values whose consecutive sorted gap is below gap_tol (clusters
// are maximal chains). Projections are built from the matching eigenvector
// columns; identity columns if eigenvectors is null. Representative value is
// the cluster mean.
DriftSpectrum group_degenerate(const std::vector<double>& raw, double gap_tol,
                               const ComplexMatrix* eigenvectors = nullptr);

// Eigendecomposes a Hermitian matrix and groups degenerate values.
// gap_tol < 0 selects the default 1e-9 * max|x_k|.
DriftSpectrum spectrum_from_hermitian(const ComplexMatrix& h0,
                                      double gap_tol = -1.0);

// Diagonal drift with optional exact tags (one per raw value).
DriftSpectrum spectrum_from_diagonal(
    const std::vector<double>& values, double gap_tol = -1.0,
    std::vector<std::optional<ExactValue>> tags = {},
    std::map<std::string, double> symbols = {});

// F_k with bounds checking.
const ComplexMatrix& eigenprojection(const DriftSpectrum& s, int k);

// Deterministic orthonormal eigenbasis assembled from the projections:
// columns grouped mode by mode (multiplicity columns each), every column
// phase-fixed so its largest-magnitude entry is real positive.
ComplexMatrix eigenbasis_matrix(const DriftSpectrum& s);

enum class IndependenceStatus { Independent, Dependent, Inconclusive };

struct IndependenceVerdict {
  IndependenceStatus status = IndependenceStatus::Inconclusive;
  bool exact = false;           // decided symbolically from tags
  long long coeff_bound = 0;    // bound under which the verdict is certified
  double tolerance = 0.0;       // tau
  std::vector<long long> witness;  // relation (Dependent) or near miss (Inconclusive)
  double witness_residual = 0.0;   // extended-precision |sum c_k x_k|
  std::string method;  // "exact-tags", "exhaustive", "lll", "degenerate"
};

const char* to_string(IndependenceStatus s);

// Rational-independence decision over the distinct eigenvalues. Exact when
// all eigenvalues carry tags; otherwise numeric, certified relative to
// (bound, tau): exhaustive enumeration for up to 4 values, lattice reduction
// beyond that (heuristic for Dependent; Independent then means "no relation
// found"). Inconclusive when a candidate residual cannot be separated from
// tau in extended precision.
IndependenceVerdict check_rational_independence(const DriftSpectrum& s,
                                                long long bound = 20,
                                                double tau = 1e-9);

// Exact commensurability from tags: if every eigenvalue is tagged and all
// tags are pairwise parallel over Q, the flow exp(i t H0) is periodic; returns
// the minimal period T > 0 with T * x_k in 2 pi Z for all nonzero x_k.
// nullopt if tags are missing, not parallel, or all eigenvalues vanish.
std::optional<double> exact_flow_period(const DriftSpectrum& s);

}  // namespace larckit
