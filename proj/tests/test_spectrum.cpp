#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/integer_relation.hpp"
#include "core/matrix_ops.hpp"
#include "core/models.hpp"
#include "core/spectrum.hpp"
#include "oracles.hpp"

using namespace larckit;

namespace {

ExactValue tag_rational(long long p, long long q = 1) {
  ExactValue v;
  v.rational = Rational(p, q);
  return v;
}

ExactValue tag_symbol(const std::string& name, long long coeff) {
  ExactValue v;
  v.coeffs[name] = coeff;
  return v;
}

}  // namespace

TEST_CASE("group_degenerate clusters by gap") {
  DriftSpectrum s = group_degenerate({1.0, 2.0, 3.0}, 1e-9);
  CHECK(s.modes() == 3);
  CHECK(s.multiplicities == std::vector<int>{1, 1, 1});
  CHECK(s.non_degenerate());
  s.validate();

  DriftSpectrum d = group_degenerate({1.0, 1.0 + 1e-12, 2.0}, 1e-9);
  CHECK(d.modes() == 2);
  CHECK(d.multiplicities == std::vector<int>{2, 1});
  CHECK_FALSE(d.non_degenerate());
  // Representative is the cluster mean.
  CHECK(d.eigenvalues[0] == doctest::Approx(1.0 + 5e-13).epsilon(1e-6));
  d.validate();

  CHECK_THROWS_AS(group_degenerate({}, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(group_degenerate({1.0}, -1.0), std::invalid_argument);
}

TEST_CASE("spectrum_from_hermitian detects degeneracy and reconstructs") {
  std::mt19937_64 rng(7);
  ComplexMatrix u = oracle::random_unitary(rng, 4);
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d.diagonal() << 1.0, 1.0, 2.0, 3.0;
  ComplexMatrix h0 = u * d * u.adjoint();
  h0 = 0.5 * (h0 + h0.adjoint()).eval();  // kill representation noise

  DriftSpectrum s = spectrum_from_hermitian(h0);
  s.validate();
  REQUIRE(s.modes() == 3);
  CHECK(s.multiplicities == std::vector<int>{2, 1, 1});
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0));

  // Reconstruction sum x_k F_k and resolution of identity.
  CHECK(max_abs(s.drift_matrix() - h0) < 1e-9);
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  for (const auto& p : s.projections) sum += p;
  CHECK(max_abs(sum - ComplexMatrix::Identity(4, 4)) < 1e-9);
  CHECK(eigenprojection(s, 0).trace().real() == doctest::Approx(2.0));

  CHECK_THROWS_AS(spectrum_from_hermitian(ComplexMatrix::Random(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("eigenprojection: diagonal, rotated, bounds") {
  DriftSpectrum s = spectrum_from_diagonal({1.0, 2.0, 3.0});
  for (int k = 0; k < 3; ++k) {
    ComplexMatrix ek = ComplexMatrix::Zero(3, 3);
    ek(k, k) = 1;
    CHECK(max_abs(eigenprojection(s, k) - ek) == 0.0);
  }
  CHECK_THROWS_AS(eigenprojection(s, 3), std::invalid_argument);
  CHECK_THROWS_AS(eigenprojection(s, -1), std::invalid_argument);

  // Conjugation oracle: projections of U D U* are U |e_k><e_k| U*.
  std::mt19937_64 rng(13);
  ComplexMatrix u = oracle::random_unitary(rng, 3);
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << -1.0, 0.5, 2.0;
  DriftSpectrum r = spectrum_from_hermitian((u * d * u.adjoint()).eval());
  REQUIRE(r.modes() == 3);
  for (int k = 0; k < 3; ++k) {
    ComplexMatrix ek = ComplexMatrix::Zero(3, 3);
    ek(k, k) = 1;
    CHECK(max_abs(eigenprojection(r, k) - u * ek * u.adjoint()) < 1e-9);
  }
}

TEST_CASE("eigenbasis_matrix is unitary and diagonalizes the drift") {
  std::mt19937_64 rng(17);
  ComplexMatrix u = oracle::random_unitary(rng, 4);
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d.diagonal() << 1.0, 1.0, 2.0, 3.0;
  DriftSpectrum s = spectrum_from_hermitian((u * d * u.adjoint()).eval());
  ComplexMatrix v = eigenbasis_matrix(s);
  CHECK(is_unitary(v, 1e-9));
  ComplexMatrix diag = v.adjoint() * s.drift_matrix() * v;
  CHECK(max_abs(diag - diag.diagonal().asDiagonal().toDenseMatrix()) < 1e-9);
  // Columns ordered mode by mode: first two carry eigenvalue 1.
  CHECK(diag(0, 0).real() == doctest::Approx(1.0));
  CHECK(diag(1, 1).real() == doctest::Approx(1.0));
  CHECK(diag(3, 3).real() == doctest::Approx(3.0));
  // Deterministic: a second call reproduces the same matrix.
  CHECK(max_abs(eigenbasis_matrix(s) - v) == 0.0);
}

TEST_CASE("independence: rational spectrum is dependent with tiny witness") {
  DriftSpectrum s = spectrum_from_diagonal({1.0, 2.0, 3.0});
  IndependenceVerdict v = check_rational_independence(s);
  CHECK(v.status == IndependenceStatus::Dependent);
  CHECK_FALSE(v.exact);
  CHECK(v.method == "exhaustive");
  REQUIRE_FALSE(v.witness.empty());
  // Re-evaluate the witness independently in extended precision.
  CHECK(static_cast<double>(relation_residual(s.eigenvalues, v.witness)) <
        1e-12);
  bool nonzero = false;
  for (long long c : v.witness) nonzero |= (c != 0);
  CHECK(nonzero);
}

TEST_CASE("independence: exact tags certify sqrt primes") {
  std::vector<std::optional<ExactValue>> tags = {
      tag_symbol("sqrt2", 1), tag_symbol("sqrt3", 1), tag_symbol("sqrt5", 1)};
  DriftSpectrum s = spectrum_from_diagonal(
      {std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)}, -1.0, tags);
  REQUIRE(s.has_exact_tags());
  IndependenceVerdict v = check_rational_independence(s);
  CHECK(v.status == IndependenceStatus::Independent);
  CHECK(v.exact);
  CHECK(v.method == "exact-tags");

  // The numeric path on the same untagged values also finds no relation.
  DriftSpectrum plain = spectrum_from_diagonal(
      {std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)});
  IndependenceVerdict nv = check_rational_independence(plain, 50, 1e-9);
  CHECK(nv.status == IndependenceStatus::Independent);
  CHECK_FALSE(nv.exact);
  CHECK(nv.coeff_bound == 50);
}

TEST_CASE("independence: exact tags expose a rational relation") {
  // 2 pi, 4 pi, 6 pi: kernel over the pi coordinate.
  std::vector<std::optional<ExactValue>> tags = {
      tag_symbol("pi", 2), tag_symbol("pi", 4), tag_symbol("pi", 6)};
  DriftSpectrum s = spectrum_from_diagonal(
      {2 * M_PI, 4 * M_PI, 6 * M_PI}, -1.0, tags);
  IndependenceVerdict v = check_rational_independence(s);
  CHECK(v.status == IndependenceStatus::Dependent);
  CHECK(v.exact);
  CHECK(v.method == "exact-tags");
  REQUIRE(v.witness.size() == 3);
  CHECK(static_cast<double>(relation_residual(s.eigenvalues, v.witness)) <
        1e-12);
}

TEST_CASE("independence: equally spaced ladder is dependent") {
  // Harmonic levels k + 1/2: second differences vanish.
  DriftSpectrum tagged = make_harmonic_oscillator(3);
  IndependenceVerdict ve = check_rational_independence(tagged);
  CHECK(ve.status == IndependenceStatus::Dependent);
  CHECK(ve.exact);

  DriftSpectrum plain = spectrum_from_diagonal({0.5, 1.5, 2.5, 3.5});
  IndependenceVerdict vn = check_rational_independence(plain);
  CHECK(vn.status == IndependenceStatus::Dependent);
  CHECK(vn.method == "exhaustive");
  CHECK(static_cast<double>(relation_residual(plain.eigenvalues, vn.witness)) <
        1e-12);
}

TEST_CASE("exhaustive and lattice searches agree on small instances") {
  struct Case {
    std::vector<double> x;
    bool dependent;
  };
  std::vector<Case> cases = {
      {{1.0, 2.0, 3.0}, true},
      {{1.0 / 3, 2.0 / 3, 1.0}, true},
      {{std::sqrt(2.0), std::sqrt(3.0)}, false},
      {{1.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(6.0)}, false},
  };
  for (const auto& c : cases) {
    CAPTURE(c.x);
    auto ex = find_relation_exhaustive(c.x, 10, 1e-9);
    auto ll = find_relation_lll(c.x, 10, 1e-9);
    bool ex_hit = ex && ex->residual < 1e-9;
    bool ll_hit = ll && ll->residual < 1e-9;
    CHECK(ex_hit == c.dependent);
    CHECK(ll_hit == c.dependent);
    if (ex_hit) {
      CHECK(static_cast<double>(relation_residual(c.x, ex->coeffs)) < 1e-9);
      CHECK(static_cast<double>(relation_residual(c.x, ll->coeffs)) < 1e-9);
    }
  }
}

TEST_CASE("independence argument validation") {
  DriftSpectrum s = spectrum_from_diagonal({1.0, 2.0});
  CHECK_THROWS_AS(check_rational_independence(s, 0, 1e-9),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_rational_independence(s, 20, 0.0),
                  std::invalid_argument);
}

TEST_CASE("validate rejects corrupted spectra") {
  DriftSpectrum good = spectrum_from_diagonal({1.0, 2.0, 3.0});
  good.validate();

  DriftSpectrum bad = good;
  bad.projections[0] *= 1.1;  // no longer idempotent
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.multiplicities[0] = 2;  // trace mismatch / sum mismatch
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  std::swap(bad.eigenvalues[0], bad.eigenvalues[2]);  // not ascending
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.exact_values = {tag_rational(9), std::nullopt, std::nullopt};  // tag off
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("exact_flow_period") {
  // 2 pi (1, 2, 3) -> period 1.
  std::vector<std::optional<ExactValue>> pi_tags = {
      tag_symbol("pi", 2), tag_symbol("pi", 4), tag_symbol("pi", 6)};
  DriftSpectrum rat = spectrum_from_diagonal(
      {2 * M_PI, 4 * M_PI, 6 * M_PI}, -1.0, pi_tags);
  auto t = exact_flow_period(rat);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(1.0).epsilon(1e-12));

  // Harmonic levels k + 1/2 -> period 4 pi.
  auto ho = exact_flow_period(make_harmonic_oscillator(3));
  REQUIRE(ho.has_value());
  CHECK(*ho == doctest::Approx(4 * M_PI).epsilon(1e-12));

  // Untagged -> no certificate.
  CHECK_FALSE(exact_flow_period(spectrum_from_diagonal({1.0, 2.0})).has_value());

  // Non-parallel tags -> incommensurable, no period.
  std::vector<std::optional<ExactValue>> mixed = {tag_symbol("sqrt2", 1),
                                                  tag_symbol("sqrt3", 1)};
  DriftSpectrum irr = spectrum_from_diagonal(
      {std::sqrt(2.0), std::sqrt(3.0)}, -1.0, mixed);
  CHECK_FALSE(exact_flow_period(irr).has_value());

  // All eigenvalues zero -> no positive period.
  DriftSpectrum zero = spectrum_from_diagonal({0.0}, -1.0, {tag_rational(0)});
  CHECK_FALSE(exact_flow_period(zero).has_value());
}

TEST_CASE("xhat and prefix projectors") {
  DriftSpectrum s = spectrum_from_diagonal({1.0, 2.0, 3.0});
  auto xh = s.xhat();
  REQUIRE(xh.size() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK(xh[k] == doctest::Approx(s.eigenvalues[k] / (2 * M_PI)));

  ComplexMatrix p2 = s.prefix_projector(2);
  ComplexMatrix expect = ComplexMatrix::Zero(3, 3);
  expect(0, 0) = expect(1, 1) = 1;
  CHECK(max_abs(p2 - expect) == 0.0);
  CHECK(max_abs(s.prefix_projector(0)) == 0.0);
  CHECK(max_abs(s.prefix_projector(3) - ComplexMatrix::Identity(3, 3)) == 0.0);
  CHECK_THROWS_AS(s.prefix_projector(4), std::invalid_argument);
}
