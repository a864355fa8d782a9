#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "core/control_system.hpp"
#include "core/coupling_graph.hpp"
#include "core/types.hpp"

namespace larckit {

// Real Lie algebra basis: anti-Hermitian elements, orthonormal in the
// Hilbert-Schmidt inner product (which is a real inner product there).
struct LieBasis {
  int dim_ambient = 0;  // matrix size n; the algebra lives in u(n), dim n^2
  std::vector<ComplexMatrix> elements;
  std::vector<std::string> provenance;  // bracket word that produced each element
  double rank_tol = 0.0;
  bool closed = false;  // a full pass added nothing, or dim reached n^2
  int passes = 0;

  int dim() const { return static_cast<int>(elements.size()); }
  // HS norm of the component of x orthogonal to the span (real coefficients).
  double residual_off_span(const ComplexMatrix& x) const;
};

// Bracket-and-orthonormalize closure: seeds with the normalized generators,
// then each pass brackets (new x all) pairs, adjoining residuals with HS norm
// >= rank_tol. Stops when a pass adds nothing, dim hits n^2, or max_passes.
// Throws std::invalid_argument for non-anti-Hermitian input.
LieBasis lie_closure(const std::vector<ComplexMatrix>& generators,
                     double rank_tol = 1e-9, int max_passes = 50,
                     const std::vector<std::string>& labels = {});

// Dimension over C of the complex Lie closure (no anti-Hermitian restriction);
// equals the real closure dim of the anti-Hermitian form.
int complex_lie_closure_dim(const std::vector<ComplexMatrix>& generators,
                            double rank_tol = 1e-9, int max_passes = 50);

enum class LarcVerdict { Full, Proper, MaxIterations };
const char* to_string(LarcVerdict v);

struct LarcEntry {
  int truncation = 0;   // leading eigenvectors kept
  int closure_dim = 0;
  int ambient_dim = 0;  // truncation^2
  LarcVerdict verdict = LarcVerdict::Proper;
  int passes = 0;
};

struct LarcReport {
  std::vector<LarcEntry> history;  // one entry per requested truncation
  // Fields of the last (largest) truncation, for quick access.
  int closure_dim = 0;
  int ambient_dim = 0;
  LarcVerdict verdict = LarcVerdict::Proper;
  int iterations = 0;
};

// Approximate rank condition at each truncation: generators are the truncated
// drift eigenprojections (times i) plus the truncated controls (times i).
LarcReport larc_check(const ControlSystem& sys,
                      const std::vector<int>& truncations,
                      double rank_tol = 1e-9, int max_passes = 50);

// sym = [F_w, [H, F_v]] = alpha |v><w| + conj(alpha) |w><v|,
// antisym = [F_v, [F_w, [H, F_v]]] = alpha |v><w| - conj(alpha) |w><v|,
// alpha = <v|H|w>, for orthogonal rank-1 projections F_v, F_w.
std::pair<ComplexMatrix, ComplexMatrix> double_bracket(const ComplexMatrix& f_v,
                                                       const ComplexMatrix& h,
                                                       const ComplexMatrix& f_w,
                                                       double tol = 1e-8);

// Machine-evaluable bracket word over labeled generators ("F3" = third drift
// eigenprojection, "H2" = second control).
struct BracketExpr {
  enum class Kind { Generator, Commutator, LinearCombo };
  Kind kind = Kind::Generator;
  std::string label;                  // Generator
  std::vector<BracketExpr> children;  // Commutator (2) or LinearCombo
  std::vector<Complex> weights;       // LinearCombo, one per child

  ComplexMatrix evaluate(
      const std::function<ComplexMatrix(const std::string&)>& lookup) const;
  std::string to_string() const;
};

struct BracketCertificate {
  int v = 0, w = 0;        // target |phi_v><phi_w|, 0-based mode indices
  BracketExpr word;
  ComplexMatrix target;
  ComplexMatrix produced;  // word evaluated on the declared generators
  double error = 0.0;      // hs_norm(produced - target)
};

class HypothesesNotMet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constructive reachability witnesses: for every ordered eigenvector pair, a
// bracket word over {F_k, H_l} evaluating to |phi_v><phi_w| within 1e-9.
// Requires non-degenerate drift, Independent spectrum verdict, and a
// connected coupling graph; throws HypothesesNotMet otherwise.
std::vector<BracketCertificate> thm2_certificate(const ControlSystem& sys,
                                                 double edge_tol = -1.0,
                                                 long long bound = 20,
                                                 double tau = 1e-9);

}  // namespace larckit
