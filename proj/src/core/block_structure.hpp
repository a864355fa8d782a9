#pragma once

#include <cstdint>
#include <vector>

#include "core/control_system.hpp"
#include "core/lie_closure.hpp"
#include "core/types.hpp"

namespace larckit {

// Dense commutant computations scale as (n^2)^3; keep them desk-sized.
inline constexpr int kMaxBlockDim = 64;

// Orthonormal basis (HS inner product) of {X : XG = GX for every generator
// and every adjoint}, the commutant of the *-algebra the generators create.
// Computed as the kernel of the accumulated Gram matrix of the stacked
// commutator maps.
std::vector<ComplexMatrix> commutant_basis(
    const std::vector<ComplexMatrix>& generators, double tol = 1e-7);

struct Block {
  ComplexMatrix basis;   // n x (block_dim * multiplicity), orthonormal columns
  int block_dim = 0;     // h: size of the simple factor acting on the subspace
  int multiplicity = 0;  // m: copies of that factor (subspace dim = h * m)
};

struct BlockDecomposition {
  std::vector<Block> blocks;  // ordered by first supported basis index
  std::vector<ComplexMatrix> central_projections;  // aligned with blocks
  int commutant_dim = 0;
  int center_dim = 0;

  // Concatenated block bases; unitary within tolerance.
  ComplexMatrix assembled_basis() const;
};

// Wedderburn-type decomposition of the von Neumann algebra generated by the
// matrices: center = commutant of (generators plus their commutant), minimal
// central projections from the spectral clusters of a randomly sampled
// Hermitian center element (resampled on degeneracy, up to 8 draws),
// multiplicities from the commutant restricted to each central block.
BlockDecomposition block_decompose(const std::vector<ComplexMatrix>& generators,
                                   std::uint64_t seed = 0, double tol = 1e-7);

struct BlockClosureEntry {
  int block_index = 0;
  int subspace_dim = 0;
  int block_dim = 0;
  int multiplicity = 0;
  int closure_dim = 0;  // per-block closure of the traceless restrictions
  int su_dim = 0;       // h^2 - 1
  int u_dim = 0;        // h^2
};

struct BlockClosureReport {
  BlockDecomposition decomposition;
  std::vector<BlockClosureEntry> per_block;
  // Closure of (chosen generators plus the remaining controls) on the full
  // space, against ambient u(n).
  int full_closure_dim = 0;
  int full_ambient_dim = 0;
  bool has_remaining_controls = false;
};

// generator_indices: 0 selects the drift, j >= 1 selects control j. Per-block
// closures use the traceless (su) projections of the restricted generators;
// the full-space run keeps traces. tol is the commutant kernel threshold.
BlockClosureReport block_lie_closure(const ControlSystem& sys,
                                     const std::vector<int>& generator_indices,
                                     double rank_tol = 1e-9,
                                     int max_passes = 50,
                                     std::uint64_t seed = 0,
                                     double tol = 1e-7);

}  // namespace larckit
