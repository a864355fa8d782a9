#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/kronecker.hpp"
#include "core/matrix_ops.hpp"
#include "core/models.hpp"
#include "core/spectrum.hpp"
#include "oracles.hpp"

using namespace larckit;

namespace {

// Independent re-check of a certificate against its defining inequality.
void check_certificate(const std::vector<double>& xhat,
                       const std::vector<double>& lambda,
                       const KroneckerCertificate& c, double delta) {
  REQUIRE(c.y.size() == xhat.size());
  REQUIRE(c.residuals.size() == xhat.size());
  double m = 0.0;
  for (size_t k = 0; k < xhat.size(); ++k) {
    double r = std::fabs(c.t * xhat[k] - static_cast<double>(c.y[k]) - lambda[k]);
    CHECK(r == doctest::Approx(c.residuals[k]).epsilon(1e-9));
    m = std::max(m, r);
  }
  CHECK(m == doctest::Approx(c.max_residual).epsilon(1e-9));
  CHECK(m < delta);
}

ExactValue pi_tag(long long coeff) {
  ExactValue v;
  v.coeffs["pi"] = coeff;
  return v;
}

}  // namespace

TEST_CASE("kronecker_solve: zero target is hit at t = 0") {
  KroneckerOptions opts;
  auto c = kronecker_solve({std::sqrt(2.0), std::sqrt(3.0)}, {0.0, 0.0}, 1e-3,
                           opts);
  CHECK(c.t == 0.0);
  CHECK(c.max_residual == 0.0);
  CHECK(c.y == std::vector<long long>{0, 0});
}

TEST_CASE("kronecker_solve: single frequency vs grid oracle") {
  std::vector<double> xhat = {std::sqrt(2.0) / (2 * M_PI)};
  std::vector<double> lambda = {0.5};
  double delta = 1e-3;
  auto c = kronecker_solve(xhat, lambda, delta, 1e4);
  check_certificate(xhat, lambda, c, delta);

  double tg = oracle::grid_first_hit(xhat, lambda, delta, 1e-5, 1e4);
  REQUIRE(tg >= 0.0);
  // Entry refinement lands within a grid step of the brute-force first hit.
  CHECK(std::fabs(c.t - tg) <= 1.2e-5);
}

TEST_CASE("kronecker_solve: two frequencies, residuals certified") {
  std::vector<double> xhat = {std::sqrt(2.0), std::sqrt(3.0)};
  std::vector<double> lambda = {0.25, 0.75};
  double delta = 1e-2;
  KroneckerOptions opts;
  opts.auto_extend = true;
  auto c = kronecker_solve(xhat, lambda, delta, opts);
  CHECK(c.t > 0.0);
  check_certificate(xhat, lambda, c, delta);

  // Tighter targets stay satisfied at their own tolerance.
  for (double d : {3e-3, 1e-3}) {
    auto cd = kronecker_solve(xhat, lambda, d, opts);
    check_certificate(xhat, lambda, cd, d);
  }

  // The brute-force grid agrees something exists nearby at coarse delta.
  double tg = oracle::grid_first_hit(xhat, lambda, delta, 1e-5, 1e3);
  CHECK(tg >= 0.0);
}

TEST_CASE("kronecker_solve: horizon exhaustion carries the best candidate") {
  std::vector<double> xhat = {std::sqrt(2.0), std::sqrt(3.0)};
  std::vector<double> lambda = {0.25, 0.75};
  double delta = 1e-4;
  bool threw = false;
  try {
    kronecker_solve(xhat, lambda, delta, 0.5);
  } catch (const HorizonExhausted& e) {
    threw = true;
    CHECK(e.best.search_horizon == doctest::Approx(0.5));
    CHECK(e.best.t <= 0.5 + 1e-9);
    CHECK(e.best.max_residual >= delta);  // otherwise it would have returned
    CHECK(e.best.evaluations > 0);
  }
  CHECK(threw);

  // auto_extend rescues the same instance.
  KroneckerOptions opts;
  opts.horizon = 0.5;
  opts.auto_extend = true;
  auto c = kronecker_solve(xhat, lambda, delta, opts);
  check_certificate(xhat, lambda, c, delta);
  CHECK(c.search_horizon > 0.5);
}

TEST_CASE("kronecker_solve: argument validation") {
  CHECK_THROWS_AS(kronecker_solve({}, {}, 1e-2, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(kronecker_solve({1.0}, {0.1, 0.2}, 1e-2, 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(kronecker_solve({1.0}, {0.1}, 0.0, 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(kronecker_solve({1.0}, {0.1}, -1e-3, 10.0),
                  std::invalid_argument);
}

TEST_CASE("default_horizon") {
  CHECK(default_horizon({1.0, 1.5}) == doctest::Approx(2000.0));
  CHECK(default_horizon({2.0}) == doctest::Approx(500.0));
  CHECK(default_horizon({0.0}) == doctest::Approx(1000.0));
  CHECK_THROWS_AS(default_horizon({}), std::invalid_argument);
}

TEST_CASE("torus element and generator materialization") {
  DriftSpectrum s = spectrum_from_diagonal({1.0, 2.0, 3.0});

  TorusElement v{{0.1, 0.2, 0.3}};
  ComplexMatrix vm = v.materialize(s);
  CHECK(is_unitary(vm, 1e-12));
  for (int k = 0; k < 3; ++k) {
    Complex expect = std::exp(Complex(0, 2 * M_PI * v.phases[k]));
    CHECK(std::abs(vm(k, k) - expect) < 1e-14);
  }
  // Commutes with the drift and every projection.
  CHECK(max_abs(commutator(vm, s.drift_matrix())) < 1e-14);
  for (const auto& p : s.projections) CHECK(max_abs(commutator(vm, p)) < 1e-14);

  TorusGenerator g{{0.5, -1.0, 2.0}};
  ComplexMatrix gm = g.materialize(s);
  CHECK(is_hermitian(gm));
  // exp(i X) is the torus element with phases x_k / (2 pi).
  TorusElement ge{{0.5 / (2 * M_PI), -1.0 / (2 * M_PI), 2.0 / (2 * M_PI)}};
  CHECK(max_abs(herm_exp(gm) - ge.materialize(s)) < 1e-12);

  CHECK_THROWS_AS((TorusElement{{0.1, 0.2}}.materialize(s)),
                  std::invalid_argument);
  CHECK_THROWS_AS((TorusGenerator{{0.1}}.materialize(s)),
                  std::invalid_argument);
}

TEST_CASE("torus_approx: trivial target") {
  DriftSpectrum s = spectrum_from_diagonal({1.0, 2.0, 3.0});
  TorusElement target{{0.0, 0.0, 0.0}};
  auto r = torus_approx(s, target, 1e-3, 3);
  CHECK(r.t == 0.0);
  CHECK(r.achieved < 1e-12);
  CHECK(r.n_modes == 3);
}

TEST_CASE("torus_approx: incommensurable spectrum reaches a generic target") {
  DriftSpectrum s = spectrum_from_diagonal(
      {std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)});
  TorusElement target{{0.1, 0.2, 0.3}};
  double eps = 1e-2;
  auto r = torus_approx(s, target, eps, 3);
  CHECK(r.achieved < eps);
  CHECK(r.delta == doctest::Approx(eps / (4 * M_PI * 3)));
  check_certificate(s.xhat(), target.phases, r.certificate, r.delta);

  // Independent re-computation of the achieved deviation.
  ComplexMatrix u = herm_exp(s.drift_matrix(), r.t);
  ComplexMatrix vm = target.materialize(s);
  CHECK(operator_norm(((u - vm) * s.prefix_projector(3)).eval()) ==
        doctest::Approx(r.achieved).epsilon(1e-9));

  // Chordal bound: vector deviations on the retained span stay below eps.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexVector psi = oracle::random_unit_vector(rng, 3);
    CHECK(((u - vm) * psi).norm() < eps);
  }
}

TEST_CASE("torus_approx: target on the flow orbit") {
  DriftSpectrum s = spectrum_from_diagonal(
      {std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)});
  double t_star = 1.7;
  std::vector<double> phases;
  for (double xk : s.xhat()) {
    double p = t_star * xk;
    phases.push_back(p - std::floor(p));
  }
  auto r = torus_approx(s, TorusElement{phases}, 1e-3, 3);
  CHECK(r.achieved < 1e-3);
}

TEST_CASE("torus_approx validates arguments") {
  DriftSpectrum s = spectrum_from_diagonal({1.0, 2.0});
  TorusElement t2{{0.1, 0.2}};
  CHECK_THROWS_AS(torus_approx(s, t2, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(torus_approx(s, t2, 1e-2, 0), std::invalid_argument);
  CHECK_THROWS_AS(torus_approx(s, t2, 1e-2, 3), std::invalid_argument);
  CHECK_THROWS_AS(torus_approx(s, TorusElement{{0.1}}, 1e-2, 2),
                  std::invalid_argument);
}

TEST_CASE("ladder spectrum: adversarial target stays out of reach") {
  // Harmonic ladder is periodic; targets off the closed orbit have a
  // positive residual floor the scan can never beat.
  DriftSpectrum s = make_harmonic_oscillator(3);
  std::vector<double> xhat = s.xhat();
  std::vector<double> lambda = {0.17, 0.62, 0.05, 0.40};
  double period = 4 * M_PI;

  double floor = oracle::grid_floor(xhat, lambda, 1e-4, period);
  CHECK(floor > 0.03);

  KroneckerOptions opts;
  opts.horizon = 3 * period;
  opts.max_total_steps = 2'000'000;
  bool threw = false;
  try {
    kronecker_solve(xhat, lambda, 1e-2, opts);
  } catch (const HorizonExhausted& e) {
    threw = true;
    // Best candidate cannot beat the orbit floor (minus grid slack).
    CHECK(e.best.max_residual > floor - 1e-3);
  }
  CHECK(threw);
}

TEST_CASE("recurrence_time: commensurable spectrum, exact and scanned") {
  std::vector<std::optional<ExactValue>> tags = {pi_tag(2), pi_tag(4),
                                                 pi_tag(6)};
  DriftSpectrum s = spectrum_from_diagonal(
      {2 * M_PI, 4 * M_PI, 6 * M_PI}, -1.0, tags);

  std::mt19937_64 rng(9);
  NeighborhoodSpec nbhd;
  nbhd.reference = ComplexMatrix::Identity(3, 3);  // exp(0 * H0)
  nbhd.test_vectors = {oracle::random_unit_vector(rng, 3),
                       oracle::random_unit_vector(rng, 3)};
  nbhd.eps = 1e-2;

  auto exact = recurrence_time(s, 0.0, nbhd);
  CHECK(exact.exact_period);
  CHECK(exact.t_plus == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.achieved < 1e-8);

  RecurrenceOptions scan;
  scan.allow_exact_period = false;
  auto scanned = recurrence_time(s, 0.0, nbhd, scan);
  CHECK_FALSE(scanned.exact_period);
  CHECK(scanned.t_plus > 0.0);
  CHECK(std::fabs(scanned.t_plus - 1.0) <= 1e-6);
  CHECK(scanned.achieved < nbhd.eps);
  CHECK(scanned.certificate.has_value());
}

TEST_CASE("recurrence_time: incommensurable spectrum from t_minus = -1") {
  DriftSpectrum s = spectrum_from_diagonal({std::sqrt(2.0), std::sqrt(3.0)});
  double t_minus = -1.0;
  std::mt19937_64 rng(23);
  NeighborhoodSpec nbhd;
  nbhd.reference = herm_exp(s.drift_matrix(), t_minus);
  nbhd.test_vectors = {oracle::random_unit_vector(rng, 2),
                       oracle::random_unit_vector(rng, 2)};
  nbhd.eps = 1e-2;

  auto r = recurrence_time(s, t_minus, nbhd);
  CHECK(r.t_plus > 0.0);
  CHECK(r.achieved < nbhd.eps);
  CHECK_FALSE(r.exact_period);

  // Direct evaluation of the strong-neighborhood condition.
  ComplexMatrix w = herm_exp(s.drift_matrix(), r.t_plus);
  for (const auto& psi : nbhd.test_vectors)
    CHECK(((w - nbhd.reference) * psi).norm() < nbhd.eps);
  CHECK(nbhd.contains(w));
  CHECK(nbhd.max_deviation(w) == doctest::Approx(r.achieved).epsilon(1e-9));
}

TEST_CASE("recurrence_time: argument validation") {
  DriftSpectrum s = spectrum_from_diagonal({1.0, 2.0});
  std::mt19937_64 rng(1);
  NeighborhoodSpec good;
  good.reference = ComplexMatrix::Identity(2, 2);
  good.test_vectors = {oracle::random_unit_vector(rng, 2)};
  good.eps = 1e-2;

  // Positive start time.
  CHECK_THROWS_AS(recurrence_time(s, 0.5, good), std::invalid_argument);

  // eps must be positive.
  NeighborhoodSpec bad_eps = good;
  bad_eps.eps = 0.0;
  CHECK_THROWS_AS(recurrence_time(s, 0.0, bad_eps), std::invalid_argument);

  // Test vectors must be unit.
  NeighborhoodSpec bad_vec = good;
  bad_vec.test_vectors[0] *= 2.0;
  CHECK_THROWS_AS(recurrence_time(s, 0.0, bad_vec), std::invalid_argument);

  // Reference must be the flow at t_minus.
  NeighborhoodSpec bad_ref = good;
  bad_ref.reference = herm_exp(s.drift_matrix(), 0.37);
  CHECK_THROWS_AS(recurrence_time(s, 0.0, bad_ref), std::invalid_argument);

  // No test vectors.
  NeighborhoodSpec empty = good;
  empty.test_vectors.clear();
  CHECK_THROWS_AS(recurrence_time(s, 0.0, empty), std::invalid_argument);
}
