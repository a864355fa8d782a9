#pragma once

#include <optional>
#include <vector>

namespace larckit {

// Nonzero integer vector c with |sum_k c_k x_k| below tolerance.
struct IntegerRelation {
  std::vector<long long> coeffs;
  double residual;  // extended-precision |sum c_k x_k|
};

// Extended-precision (long double) evaluation of |sum c_k x_k|.
long double relation_residual(const std::vector<double>& x,
                              const std::vector<long long>& c);

// Magnitude below which |sum c_k x_k| cannot be separated from zero in long
// double arithmetic; used for Inconclusive decisions.
long double relation_uncertainty(const std::vector<double>& x,
                                 const std::vector<long long>& c);

// Exhaustive search over max|c_k| <= bound, in order of increasing radius.
// Intended for at most 4 values. Returns the first relation with residual
// < tau, or the best candidate seen if record_best and none qualify.
std::optional<IntegerRelation> find_relation_exhaustive(
    const std::vector<double>& x, long long bound, double tau);

// LLL reduction of the classic relation lattice (identity block plus a scaled
// copy of x); reduced vectors within the coefficient bound are validated in
// extended precision. Heuristic for finding relations; absence of a result is
// not a proof of independence.
std::optional<IntegerRelation> find_relation_lll(const std::vector<double>& x,
                                                 long long bound, double tau);

}  // namespace larckit
