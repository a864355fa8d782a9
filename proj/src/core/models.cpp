#include "core/models.hpp"

#include <cmath>
#include <string>

#include "core/exact_value.hpp"

namespace larckit {

std::vector<long long> first_primes(int n) {
  if (n < 1) throw std::invalid_argument("first_primes: n < 1");
  std::vector<long long> primes;
  for (long long c = 2; static_cast<int>(primes.size()) < n; ++c) {
    bool prime = true;
    for (long long p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

ControlSystem make_thm2_model(int n) {
  if (n < 2) throw std::invalid_argument("make_thm2_model: n must be >= 2");
  if (n > kMaxDenseDim)
    throw std::invalid_argument("make_thm2_model: n exceeds dense limit");
  auto primes = first_primes(n);
  std::vector<double> values(n);
  std::vector<std::optional<ExactValue>> tags(n);
  for (int k = 0; k < n; ++k) {
    values[k] = std::sqrt(double(primes[k]));
    ExactValue t;
    t.coeffs["sqrt" + std::to_string(primes[k])] = 1;
    tags[k] = std::move(t);
  }
  ControlSystem sys;
  sys.spectrum = spectrum_from_diagonal(values, -1.0, std::move(tags), {});
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = 1.0;
  sys.controls = {std::move(h)};
  sys.control_bound = 1.0;
  sys.validate();
  return sys;
}

ControlSystem make_thm2_model(const std::vector<double>& spectrum_values,
                              const ComplexMatrix& coupling,
                              bool rational_tags) {
  int n = static_cast<int>(spectrum_values.size());
  if (n < 2) throw std::invalid_argument("make_thm2_model: need >= 2 levels");
  if (coupling.rows() != n || coupling.cols() != n)
    throw std::invalid_argument("make_thm2_model: coupling shape mismatch");
  std::vector<std::optional<ExactValue>> tags;
  if (rational_tags) {
    tags.resize(n);
    for (int k = 0; k < n; ++k) {
      double v = spectrum_values[k];
      long long r = std::llround(v);
      if (std::fabs(v - double(r)) < 1e-12) {
        ExactValue t;
        t.rational = r;
        tags[k] = std::move(t);
      }
    }
  }
  ControlSystem sys;
  sys.spectrum =
      spectrum_from_diagonal(spectrum_values, -1.0, std::move(tags), {});
  sys.controls = {coupling};
  sys.control_bound = 1.0;
  sys.validate();
  return sys;
}

ControlSystem make_jaynes_cummings(double omega_a, double omega_c,
                                   double omega_i, int cutoff) {
  if (cutoff < 1)
    throw std::invalid_argument("make_jaynes_cummings: cutoff must be >= 1");
  if (omega_a == 0 || omega_c == 0 || omega_i == 0)
    throw std::invalid_argument("make_jaynes_cummings: zero frequency");
  int fock = cutoff + 1;  // photon numbers 0..cutoff
  int full = 2 * fock;
  int n = 2 * cutoff + 1;
  if (n > kMaxDenseDim)
    throw std::invalid_argument("make_jaynes_cummings: cutoff exceeds dense limit");

  // Atom-major tensor index: |s> (x) |m>  ->  s * fock + m.
  ComplexMatrix a = ComplexMatrix::Zero(fock, fock);
  for (int m = 1; m < fock; ++m) a(m - 1, m) = std::sqrt(double(m));
  ComplexMatrix number = a.adjoint() * a;

  auto kron2 = [&](const Eigen::Matrix2cd& s, const ComplexMatrix& f) {
    ComplexMatrix out = ComplexMatrix::Zero(full, full);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (s(i, j) != Complex(0)) out.block(i * fock, j * fock, fock, fock) = s(i, j) * f;
    return out;
  };

  Eigen::Matrix2cd s3, s1, sp, sm;
  s3 << -1, 0, 0, 1;  // |0> ground, |1> excited in atom index order
  s1 << 0, 1, 1, 0;
  sp << 0, 0, 1, 0;  // sigma_plus = |1><0|
  sm << 0, 1, 0, 0;

  ComplexMatrix h0_t = omega_a * kron2(s3, ComplexMatrix::Identity(fock, fock)) +
                       omega_c * kron2(Eigen::Matrix2cd::Identity(), number) +
                       omega_i * (kron2(sp, a) + kron2(sm, a.adjoint()));
  ComplexMatrix h1_t = kron2(s3, ComplexMatrix::Identity(fock, fock));
  ComplexMatrix h2_t = kron2(s1, ComplexMatrix::Identity(fock, fock));

  // Block-ordered retained vectors: |0;0>, then per mu the pair
  // |mu;0> = |0>(x)|mu> and |mu;1> = |1>(x)|mu-1>; |1>(x)|cutoff> is dropped.
  std::vector<int> keep;
  keep.reserve(n);
  keep.push_back(0);
  for (int mu = 1; mu <= cutoff; ++mu) {
    keep.push_back(mu);
    keep.push_back(fock + mu - 1);
  }
  auto restrict_to = [&](const ComplexMatrix& m) {
    ComplexMatrix r(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = m(keep[i], keep[j]);
    return r;
  };

  ControlSystem sys;
  sys.spectrum = spectrum_from_hermitian(restrict_to(h0_t));
  sys.controls = {restrict_to(h1_t), restrict_to(h2_t)};
  sys.control_bound = 1.0;
  sys.validate();
  return sys;
}

DriftSpectrum make_harmonic_oscillator(int cutoff) {
  if (cutoff < 2)
    throw std::invalid_argument("make_harmonic_oscillator: cutoff must be >= 2");
  int n = cutoff + 1;
  if (n > kMaxDenseDim)
    throw std::invalid_argument("make_harmonic_oscillator: cutoff exceeds dense limit");
  std::vector<double> values(n);
  std::vector<std::optional<ExactValue>> tags(n);
  for (int k = 0; k < n; ++k) {
    values[k] = double(k) + 0.5;
    ExactValue t;
    t.rational = Rational(2 * k + 1, 2);
    tags[k] = std::move(t);
  }
  return spectrum_from_diagonal(values, -1.0, std::move(tags), {});
}

}  // namespace larckit
