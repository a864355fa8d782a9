#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/block_structure.hpp"
#include "core/matrix_ops.hpp"
#include "core/models.hpp"
#include "core/spectrum.hpp"
#include "oracles.hpp"

using namespace larckit;

namespace {

ComplexMatrix pauli(int k) {
  ComplexMatrix s(2, 2);
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

ComplexMatrix sigma3_tensor_id() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m.diagonal() << 1, 1, -1, -1;
  return m;
}

// Wedderburn counts must reconcile with the word-span and commutant oracles.
void check_wedderburn(const std::vector<ComplexMatrix>& gens,
                      const BlockDecomposition& d) {
  int n = static_cast<int>(gens[0].rows());
  int sum_h2 = 0, sum_m2 = 0, sum_hm = 0;
  for (const auto& b : d.blocks) {
    sum_h2 += b.block_dim * b.block_dim;
    sum_m2 += b.multiplicity * b.multiplicity;
    sum_hm += b.block_dim * b.multiplicity;
  }
  CHECK(sum_hm == n);
  CHECK(sum_m2 == d.commutant_dim);
  CHECK(sum_h2 == oracle::word_span_dim(gens));
  CHECK(static_cast<int>(d.blocks.size()) == d.center_dim);
}

void check_central_projections(const BlockDecomposition& d, int n) {
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (size_t i = 0; i < d.central_projections.size(); ++i) {
    const ComplexMatrix& p = d.central_projections[i];
    CHECK(is_hermitian(p, 1e-8));
    CHECK(max_abs((p * p - p).eval()) < 1e-7);
    for (size_t j = i + 1; j < d.central_projections.size(); ++j)
      CHECK(max_abs((p * d.central_projections[j]).eval()) < 1e-7);
    sum += p;
  }
  CHECK(max_abs(sum - ComplexMatrix::Identity(n, n)) < 1e-7);
}

}  // namespace

TEST_CASE("commutant_basis extremes") {
  // Identity alone: everything commutes -> dim n^2.
  auto full = commutant_basis({ComplexMatrix::Identity(3, 3)});
  CHECK(full.size() == 9);

  // Irreducible generators: commutant is the scalars.
  auto scalars = commutant_basis({pauli(1), pauli(2)});
  REQUIRE(scalars.size() == 1);
  CHECK(max_abs(commutator(scalars[0], pauli(1))) < 1e-7);

  // sigma3 (x) 1: two 2-dim eigenspaces -> commutant M_2 + M_2, dim 8.
  auto split = commutant_basis({sigma3_tensor_id()});
  CHECK(split.size() == 8);
  for (const auto& x : split)
    CHECK(max_abs(commutator(x, sigma3_tensor_id())) < 1e-6);

  // Orthonormal in the HS inner product.
  for (size_t i = 0; i < split.size(); ++i)
    for (size_t j = 0; j < split.size(); ++j) {
      double expect = i == j ? 1.0 : 0.0;
      CHECK(std::abs(hs_inner(split[i], split[j]) - expect) < 1e-6);
    }

  CHECK_THROWS_AS(commutant_basis({}), std::invalid_argument);
  CHECK_THROWS_AS(commutant_basis({ComplexMatrix::Identity(65, 65)}),
                  std::invalid_argument);
}

TEST_CASE("block_decompose: sigma3 (x) 1") {
  std::vector<ComplexMatrix> gens = {sigma3_tensor_id()};
  BlockDecomposition d = block_decompose(gens);
  REQUIRE(d.blocks.size() == 2);
  for (const auto& b : d.blocks) {
    CHECK(b.block_dim == 1);
    CHECK(b.multiplicity == 2);
  }
  CHECK(d.center_dim == 2);
  CHECK(d.commutant_dim == 8);
  check_wedderburn(gens, d);
  check_central_projections(d, 4);
  CHECK(is_unitary(d.assembled_basis(), 1e-9));
}

TEST_CASE("block_decompose: diagonal with a repeated eigenvalue") {
  ComplexMatrix g = ComplexMatrix::Zero(3, 3);
  g.diagonal() << 1, 1, 2;
  BlockDecomposition d = block_decompose({g});
  REQUIRE(d.blocks.size() == 2);
  // Repeated eigenvalue: scalar factor with multiplicity 2; then a simple one.
  CHECK(d.blocks[0].block_dim == 1);
  CHECK(d.blocks[0].multiplicity == 2);
  CHECK(d.blocks[1].block_dim == 1);
  CHECK(d.blocks[1].multiplicity == 1);
  CHECK(d.commutant_dim == 5);
  check_wedderburn({g}, d);
  check_central_projections(d, 3);
}

TEST_CASE("block_decompose: irreducible pair is a single full block") {
  std::mt19937_64 rng(43);
  std::vector<ComplexMatrix> gens = {oracle::random_hermitian(rng, 4),
                                     oracle::random_hermitian(rng, 4)};
  BlockDecomposition d = block_decompose(gens);
  REQUIRE(d.blocks.size() == 1);
  CHECK(d.blocks[0].block_dim == 4);
  CHECK(d.blocks[0].multiplicity == 1);
  CHECK(d.commutant_dim == 1);
  CHECK(d.center_dim == 1);
  check_wedderburn(gens, d);
}

TEST_CASE("block_decompose: atom-cavity drift and detuning control") {
  ControlSystem sys = make_jaynes_cummings(1.0, 1.1, 0.05, 3);
  REQUIRE(sys.dim() == 7);
  std::vector<ComplexMatrix> gens = {sys.spectrum.drift_matrix(),
                                     sys.controls[0]};
  BlockDecomposition d = block_decompose(gens);
  REQUIRE(d.blocks.size() == 4);
  std::vector<int> subspace_dims;
  for (const auto& b : d.blocks)
    subspace_dims.push_back(b.block_dim * b.multiplicity);
  CHECK(subspace_dims == std::vector<int>{1, 2, 2, 2});
  CHECK(d.blocks[0].block_dim == 1);
  for (int i = 1; i < 4; ++i) {
    CHECK(d.blocks[i].block_dim == 2);
    CHECK(d.blocks[i].multiplicity == 1);
  }
  check_wedderburn(gens, d);  // sum h^2 = 13, commutant 4, sum hm = 7
  check_central_projections(d, 7);

  // Conjugation by the assembled basis block-diagonalizes every generator.
  ComplexMatrix v = d.assembled_basis();
  CHECK(is_unitary(v, 1e-9));
  std::vector<int> offsets = {0};
  for (const auto& b : d.blocks)
    offsets.push_back(offsets.back() + b.block_dim * b.multiplicity);
  for (const auto& g : gens) {
    ComplexMatrix c = v.adjoint() * g * v;
    for (size_t bi = 0; bi < d.blocks.size(); ++bi)
      for (size_t bj = 0; bj < d.blocks.size(); ++bj) {
        if (bi == bj) continue;
        CHECK(max_abs(c.block(offsets[bi], offsets[bj],
                              offsets[bi + 1] - offsets[bi],
                              offsets[bj + 1] - offsets[bj])
                          .eval()) < 1e-9);
      }
  }
}

TEST_CASE("block_decompose is deterministic for a fixed seed") {
  std::vector<ComplexMatrix> gens = {sigma3_tensor_id()};
  BlockDecomposition a = block_decompose(gens, 7);
  BlockDecomposition b = block_decompose(gens, 7);
  CHECK(max_abs(a.assembled_basis() - b.assembled_basis()) == 0.0);
}

TEST_CASE("block_lie_closure: invariant blocks of the atom-cavity model") {
  ControlSystem sys = make_jaynes_cummings(1.0, 1.1, 0.05, 3);
  BlockClosureReport rep = block_lie_closure(sys, {0, 1});
  REQUIRE(rep.per_block.size() == 4);

  // Trivial block: traceless restriction of a 1-dim factor is zero.
  CHECK(rep.per_block[0].subspace_dim == 1);
  CHECK(rep.per_block[0].closure_dim == 0);
  CHECK(rep.per_block[0].su_dim == 0);
  CHECK(rep.per_block[0].u_dim == 1);

  // Every 2-dim block realizes its full su(2).
  for (int i = 1; i < 4; ++i) {
    CHECK(rep.per_block[i].subspace_dim == 2);
    CHECK(rep.per_block[i].block_dim == 2);
    CHECK(rep.per_block[i].closure_dim == 3);
    CHECK(rep.per_block[i].su_dim == 3);
    CHECK(rep.per_block[i].u_dim == 4);
  }

  // The held-out coupling control is what restores full controllability.
  CHECK(rep.has_remaining_controls);
  CHECK(rep.full_ambient_dim == 49);
  CHECK(rep.full_closure_dim == 49);

  // Using every generator leaves nothing out.
  BlockClosureReport all = block_lie_closure(sys, {0, 1, 2});
  CHECK_FALSE(all.has_remaining_controls);
  REQUIRE(all.per_block.size() == 1);
  CHECK(all.per_block[0].block_dim == 7);
  CHECK(all.per_block[0].closure_dim == 48);  // su(7)
  CHECK(all.full_closure_dim == 49);
}

TEST_CASE("block_lie_closure: drift alone on a non-degenerate spectrum") {
  ControlSystem sys = make_thm2_model(3);
  BlockClosureReport rep = block_lie_closure(sys, {0});
  REQUIRE(rep.per_block.size() == 3);
  for (const auto& e : rep.per_block) {
    CHECK(e.subspace_dim == 1);
    CHECK(e.closure_dim == 0);
  }
  CHECK(rep.has_remaining_controls);
  // Remaining tridiagonal control upgrades the full-space closure to u(3).
  CHECK(rep.full_closure_dim == 9);
}

TEST_CASE("block_lie_closure argument validation") {
  ControlSystem sys = make_thm2_model(3);
  CHECK_THROWS_AS(block_lie_closure(sys, {}), std::invalid_argument);
  CHECK_THROWS_AS(block_lie_closure(sys, {2}), std::invalid_argument);
  CHECK_THROWS_AS(block_lie_closure(sys, {-1}), std::invalid_argument);
}
