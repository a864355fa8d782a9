#pragma once

#include <vector>

#include "core/spectrum.hpp"
#include "core/types.hpp"

namespace larckit {

// Bilinear system: drift given by its spectral data plus finitely many
// Hermitian control couplings with a common amplitude bound.
struct ControlSystem {
  DriftSpectrum spectrum;
  std::vector<ComplexMatrix> controls;
  double control_bound = 1.0;

  int dim() const { return spectrum.dim; }
  int n_controls() const { return static_cast<int>(controls.size()); }
  void validate(double tol = kDefaultTol) const;
};

// One piecewise-constant segment: hold amplitudes y for the given duration.
struct Segment {
  std::vector<double> amplitudes;
  double duration = 0.0;
};

using Schedule = std::vector<Segment>;

// H(y) = H0 + sum_j y_j H_j.
ComplexMatrix hamiltonian(const ControlSystem& sys,
                          const std::vector<double>& y);

// Throws std::invalid_argument on shape mismatch, negative duration, or an
// amplitude outside [-control_bound, control_bound].
void validate_schedule(const ControlSystem& sys, const Schedule& sched);

// Product of the segment exponentials exp(i tau_m H(y_m)); the first segment
// is the leftmost factor.
ComplexMatrix propagate(const ControlSystem& sys, const Schedule& sched);

// out[m] = product of the first m segment factors (out[0] = identity, the
// last entry equals propagate(sys, sched)).
std::vector<ComplexMatrix> propagate_prefixes(const ControlSystem& sys,
                                              const Schedule& sched);

}  // namespace larckit
