#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/coupling_graph.hpp"
#include "core/kronecker.hpp"
#include "core/matrix_ops.hpp"
#include "core/models.hpp"
#include "core/spectrum.hpp"
#include "oracles.hpp"

using namespace larckit;

TEST_CASE("first_primes") {
  CHECK(first_primes(5) == std::vector<long long>{2, 3, 5, 7, 11});
  CHECK(first_primes(1) == std::vector<long long>{2});
  CHECK(first_primes(10).back() == 29);
  CHECK_THROWS_AS(first_primes(0), std::invalid_argument);
}

TEST_CASE("textbook model: sqrt-prime ladder with a tridiagonal control") {
  ControlSystem sys = make_thm2_model(4);
  REQUIRE(sys.dim() == 4);
  REQUIRE(sys.n_controls() == 1);
  CHECK(sys.control_bound == 1.0);

  auto primes = first_primes(4);
  REQUIRE(sys.spectrum.has_exact_tags());
  for (int k = 0; k < 4; ++k) {
    CHECK(sys.spectrum.eigenvalues[k] ==
          doctest::Approx(std::sqrt(double(primes[k]))).epsilon(1e-14));
    // Tag evaluates back to the numeric eigenvalue through builtin symbols.
    CHECK(sys.spectrum.exact_values[k]->value({}) ==
          doctest::Approx(sys.spectrum.eigenvalues[k]).epsilon(1e-14));
  }

  CHECK(is_hermitian(sys.controls[0]));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double expect = std::abs(i - j) == 1 ? 1.0 : 0.0;
      CHECK(sys.controls[0](i, j).real() == doctest::Approx(expect));
    }

  CHECK(is_connected(build_graph(sys)).connected);
  auto verdict = check_rational_independence(sys.spectrum);
  CHECK(verdict.status == IndependenceStatus::Independent);
  CHECK(verdict.exact);

  CHECK_THROWS_AS(make_thm2_model(1), std::invalid_argument);
  CHECK_THROWS_AS(make_thm2_model(300), std::invalid_argument);
}

TEST_CASE("textbook model: user-supplied spectrum and coupling") {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 1) = h(1, 0) = 1;
  h(1, 2) = h(2, 1) = 1;

  ControlSystem integer = make_thm2_model({1.0, 2.0, 3.0}, h, true);
  CHECK(integer.spectrum.has_exact_tags());
  auto v = check_rational_independence(integer.spectrum);
  CHECK(v.status == IndependenceStatus::Dependent);
  CHECK(v.exact);

  // Non-integer values stay untagged.
  ControlSystem mixed = make_thm2_model({1.0, 2.5, 4.0}, h, true);
  CHECK_FALSE(mixed.spectrum.has_exact_tags());

  ControlSystem plain = make_thm2_model({1.0, 2.0, 3.0}, h, false);
  CHECK(plain.spectrum.exact_values.empty());

  CHECK_THROWS_AS(make_thm2_model({1.0}, ComplexMatrix::Zero(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_thm2_model({1.0, 2.0}, h), std::invalid_argument);
}

TEST_CASE("atom-cavity model: dimensions and block structure") {
  CHECK(make_jaynes_cummings(1.0, 1.1, 0.05, 1).dim() == 3);

  double wa = 1.0, wc = 1.1, wi = 0.05;
  ControlSystem sys = make_jaynes_cummings(wa, wc, wi, 2);
  REQUIRE(sys.dim() == 5);
  REQUIRE(sys.n_controls() == 2);

  ComplexMatrix h0 = sys.spectrum.drift_matrix();
  CHECK(is_hermitian(h0));
  for (const auto& c : sys.controls) CHECK(is_hermitian(c));

  // Basis order |0;0>, |1;0>, |1;1>, |2;0>, |2;1>.
  // Diagonal: -wa for atom 0 with mu photons, +wa for atom 1 with mu-1.
  CHECK(h0(0, 0).real() == doctest::Approx(-wa));
  CHECK(h0(1, 1).real() == doctest::Approx(-wa + wc));
  CHECK(h0(2, 2).real() == doctest::Approx(wa));
  CHECK(h0(3, 3).real() == doctest::Approx(-wa + 2 * wc));
  CHECK(h0(4, 4).real() == doctest::Approx(wa + wc));

  // Excitation-number blocks {0}, {1,2}, {3,4}; coupling wi * sqrt(mu).
  CHECK(h0(2, 1).real() == doctest::Approx(wi * 1.0));
  CHECK(h0(4, 3).real() == doctest::Approx(wi * std::sqrt(2.0)));
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {0, 3}, {0, 4},
                      {1, 3}, {1, 4}, {2, 3}, {2, 4}})
    CHECK(std::abs(h0(i, j)) < 1e-12);

  // H1 = sigma3 (x) 1 is diagonal (-1 on atom-0 states, +1 on atom-1).
  ComplexMatrix h1 = sys.controls[0];
  std::vector<double> diag_expect = {-1, -1, 1, -1, 1};
  for (int i = 0; i < 5; ++i) {
    CHECK(h1(i, i).real() == doctest::Approx(diag_expect[i]));
    for (int j = 0; j < 5; ++j)
      if (i != j) CHECK(std::abs(h1(i, j)) < 1e-12);
  }

  // H2 = sigma1 (x) 1 flips the atom at a fixed photon number; the partner
  // of |2;0> fell past the cutoff, so its row vanishes.
  ComplexMatrix h2 = sys.controls[1];
  CHECK(h2(0, 2).real() == doctest::Approx(1.0));
  CHECK(h2(1, 4).real() == doctest::Approx(1.0));
  for (int j = 0; j < 5; ++j) CHECK(std::abs(h2(3, j)) < 1e-12);
  CHECK(std::abs(h2(0, 1)) < 1e-12);
  CHECK(std::abs(h2(2, 4)) < 1e-12);

  CHECK_THROWS_AS(make_jaynes_cummings(0.0, 1.1, 0.05, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_jaynes_cummings(1.0, 1.1, 0.05, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_jaynes_cummings(1.0, 1.1, 0.05, 200),
                  std::invalid_argument);
}

TEST_CASE("harmonic ladder: tagged half-integer levels") {
  DriftSpectrum s = make_harmonic_oscillator(3);
  REQUIRE(s.modes() == 4);
  REQUIRE(s.has_exact_tags());
  for (int k = 0; k < 4; ++k) {
    CHECK(s.eigenvalues[k] == doctest::Approx(k + 0.5));
    CHECK(s.exact_values[k]->is_rational());
    CHECK(s.exact_values[k]->rational == Rational(2 * k + 1, 2));
  }

  auto v = check_rational_independence(s);
  CHECK(v.status == IndependenceStatus::Dependent);
  CHECK(v.exact);

  auto period = exact_flow_period(s);
  REQUIRE(period.has_value());
  CHECK(*period == doctest::Approx(4 * M_PI).epsilon(1e-12));

  CHECK_THROWS_AS(make_harmonic_oscillator(1), std::invalid_argument);
}

TEST_CASE("harmonic ladder: exact recurrence at the closed-orbit period") {
  DriftSpectrum s = make_harmonic_oscillator(3);
  std::mt19937_64 rng(53);
  NeighborhoodSpec nbhd;
  nbhd.reference = ComplexMatrix::Identity(4, 4);
  nbhd.test_vectors = {oracle::random_unit_vector(rng, 4)};
  nbhd.eps = 1e-9;
  auto r = recurrence_time(s, 0.0, nbhd);
  CHECK(r.exact_period);
  CHECK(r.t_plus == doctest::Approx(4 * M_PI).epsilon(1e-12));
  CHECK(r.achieved < 1e-9);
}
