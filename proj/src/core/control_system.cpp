#include "core/control_system.hpp"

#include <cmath>

#include "core/matrix_ops.hpp"

namespace larckit {

void ControlSystem::validate(double tol) const {
  spectrum.validate(tol);
  if (controls.empty())
    throw std::invalid_argument("ControlSystem: at least one control required");
  for (const auto& h : controls) {
    if (h.rows() != spectrum.dim || h.cols() != spectrum.dim)
      throw std::invalid_argument("ControlSystem: control shape mismatch");
    if (!is_hermitian(h, tol))
      throw std::invalid_argument("ControlSystem: control not Hermitian");
  }
  if (!(control_bound > 0) || !std::isfinite(control_bound))
    throw std::invalid_argument("ControlSystem: control bound must be positive");
}

ComplexMatrix hamiltonian(const ControlSystem& sys,
                          const std::vector<double>& y) {
  if (y.size() != sys.controls.size())
    throw std::invalid_argument("hamiltonian: amplitude count mismatch");
  ComplexMatrix h = sys.spectrum.drift_matrix();
  for (size_t j = 0; j < y.size(); ++j) h += y[j] * sys.controls[j];
  return h;
}

void validate_schedule(const ControlSystem& sys, const Schedule& sched) {
  for (const auto& seg : sched) {
    if (seg.amplitudes.size() != sys.controls.size())
      throw std::invalid_argument("schedule: amplitude count mismatch");
    if (!(seg.duration >= 0) || !std::isfinite(seg.duration))
      throw std::invalid_argument("schedule: segment duration must be >= 0");
    for (double a : seg.amplitudes)
      if (!std::isfinite(a) || std::fabs(a) > sys.control_bound * (1 + 1e-12))
        throw std::invalid_argument("schedule: amplitude exceeds control bound");
  }
}

ComplexMatrix propagate(const ControlSystem& sys, const Schedule& sched) {
  validate_schedule(sys, sched);
  ComplexMatrix u = ComplexMatrix::Identity(sys.dim(), sys.dim());
  for (const auto& seg : sched)
    u = u * herm_exp(hamiltonian(sys, seg.amplitudes), seg.duration);
  return u;
}

std::vector<ComplexMatrix> propagate_prefixes(const ControlSystem& sys,
                                              const Schedule& sched) {
  validate_schedule(sys, sched);
  std::vector<ComplexMatrix> out;
  out.reserve(sched.size() + 1);
  out.push_back(ComplexMatrix::Identity(sys.dim(), sys.dim()));
  for (const auto& seg : sched)
    out.push_back(out.back() *
                  herm_exp(hamiltonian(sys, seg.amplitudes), seg.duration));
  return out;
}

}  // namespace larckit
