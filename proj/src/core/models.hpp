#pragma once

#include <vector>

#include "core/control_system.hpp"
#include "core/types.hpp"

namespace larckit {

// First n primes, ascending.
std::vector<long long> first_primes(int n);

// Drift diag(sqrt(p_1) .. sqrt(p_n)) with exact irrational tags, one
// tridiagonal control with unit couplings (a connected path graph).
ControlSystem make_thm2_model(int n);

// User variant: explicit drift eigenvalues (untagged unless rational_tags)
// and coupling matrix. rational_tags attaches x_k as an exact rational when
// it is one (detected via llround within 1e-12).
ControlSystem make_thm2_model(const std::vector<double>& spectrum_values,
                              const ComplexMatrix& coupling,
                              bool rational_tags = false);

// Two-level atom in a single-mode cavity, truncated at the photon cutoff with
// the incomplete final block dropped (dim = 2 * cutoff + 1). Basis ordered by
// the invariant blocks: |0;0>, then |mu;0> = |0> (x) |mu>, |mu;1> = |1> (x)
// |mu-1> for mu = 1..cutoff. Controls: H1 = sigma3 (x) 1 (diagonal in this
// basis), H2 = sigma1 (x) 1 (couples neighboring blocks).
ControlSystem make_jaynes_cummings(double omega_a, double omega_c,
                                   double omega_i, int cutoff);

// Harmonic oscillator levels k + 1/2, k = 0..cutoff, with exact rational
// tags: the canonical rationally-dependent (periodic-flow) example.
DriftSpectrum make_harmonic_oscillator(int cutoff);

}  // namespace larckit
