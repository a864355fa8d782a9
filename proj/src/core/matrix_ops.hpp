#pragma once

#include "core/types.hpp"

namespace larckit {

// Entrywise sup norm.
double max_abs(const ComplexMatrix& a);

// Largest singular value.
double operator_norm(const ComplexMatrix& a);

// Predicates use a deviation threshold of tol * max(1, sup-norm of the input).
bool is_hermitian(const ComplexMatrix& a, double tol = kDefaultTol);
bool is_anti_hermitian(const ComplexMatrix& a, double tol = kDefaultTol);
bool is_unitary(const ComplexMatrix& a, double tol = kDefaultTol);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Hilbert-Schmidt inner product trace(a^dagger b).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double hs_norm(const ComplexMatrix& a);

// exp(i t h) for Hermitian h, via eigendecomposition. Exactly unitary up to
// eigensolver accuracy; never a truncated series.
ComplexMatrix herm_exp(const ComplexMatrix& h, double t = 1.0,
                       double tol = kDefaultTol);

// exp(x) for anti-Hermitian x (evaluates herm_exp of -i x).
ComplexMatrix antiherm_exp(const ComplexMatrix& x, double tol = kDefaultTol);

// a^n for n >= 0 by repeated squaring.
ComplexMatrix matrix_power(const ComplexMatrix& a, long long n);

// [exp(i a / n) exp(i b / n)]^n for Hermitian a, b; converges to exp(i(a+b)).
ComplexMatrix trotter_product(const ComplexMatrix& a, const ComplexMatrix& b,
                              long long n, double tol = kDefaultTol);

// [exp(a/n) exp(b/n) exp(-a/n) exp(-b/n)]^(n^2) for anti-Hermitian a, b;
// converges to exp([a, b]).
ComplexMatrix commutator_product(const ComplexMatrix& a, const ComplexMatrix& b,
                                 long long n, double tol = kDefaultTol);

// a - (trace(a)/dim) * I.
ComplexMatrix traceless_part(const ComplexMatrix& a);

}  // namespace larckit
