#include "core/block_structure.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "core/matrix_ops.hpp"

namespace larckit {

namespace {

void validate_generators(const std::vector<ComplexMatrix>& gens) {
  if (gens.empty())
    throw std::invalid_argument("block_structure: no generators");
  int n = static_cast<int>(gens.front().rows());
  if (n < 1 || n > kMaxBlockDim)
    throw std::invalid_argument("block_structure: dimension out of range");
  for (const auto& g : gens)
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("block_structure: generator shape mismatch");
}

// vec(GX - XG) = (I (x) G - G^T (x) I) vec(X), column-major vec.
ComplexMatrix commutator_map(const ComplexMatrix& g) {
  int n = static_cast<int>(g.rows());
  ComplexMatrix l = ComplexMatrix::Zero(n * n, n * n);
  for (int j = 0; j < n; ++j)
    l.block(j * n, j * n, n, n) += g;
  for (int j2 = 0; j2 < n; ++j2)
    for (int j1 = 0; j1 < n; ++j1)
      for (int i = 0; i < n; ++i) l(j2 * n + i, j1 * n + i) -= g(j1, j2);
  return l;
}

ComplexMatrix unvec(const ComplexVector& v, int n) {
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

}  // namespace

std::vector<ComplexMatrix> commutant_basis(
    const std::vector<ComplexMatrix>& generators, double tol) {
  validate_generators(generators);
  int n = static_cast<int>(generators.front().rows());

  ComplexMatrix gram = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& g : generators) {
    double scale = std::max(1.0, hs_norm(g));
    ComplexMatrix l = commutator_map(g / scale);
    gram += l.adjoint() * l;
    ComplexMatrix la = commutator_map(g.adjoint() / scale);
    gram += la.adjoint() * la;
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
  if (es.info() != Eigen::Success)
    throw NumericalError("commutant_basis: eigendecomposition failed");
  double lam_max = es.eigenvalues().maxCoeff();
  double cutoff = tol * std::max(1.0, lam_max);

  std::vector<ComplexMatrix> basis;
  for (int i = 0; i < n * n; ++i)
    if (es.eigenvalues()(i) < cutoff)
      basis.push_back(unvec(es.eigenvectors().col(i), n));
  return basis;
}

ComplexMatrix BlockDecomposition::assembled_basis() const {
  if (blocks.empty()) return ComplexMatrix();
  int n = static_cast<int>(blocks.front().basis.rows());
  ComplexMatrix u(n, n);
  int col = 0;
  for (const auto& b : blocks) {
    u.middleCols(col, b.basis.cols()) = b.basis;
    col += static_cast<int>(b.basis.cols());
  }
  if (col != n)
    throw NumericalError("assembled_basis: blocks do not fill the space");
  return u;
}

BlockDecomposition block_decompose(const std::vector<ComplexMatrix>& generators,
                                   std::uint64_t seed, double tol) {
  validate_generators(generators);
  int n = static_cast<int>(generators.front().rows());

  std::vector<ComplexMatrix> comm = commutant_basis(generators, tol);
  std::vector<ComplexMatrix> with_comm = generators;
  for (const auto& g : generators) with_comm.push_back(g.adjoint());
  with_comm.insert(with_comm.end(), comm.begin(), comm.end());
  std::vector<ComplexMatrix> center = commutant_basis(with_comm, tol);

  BlockDecomposition out;
  out.commutant_dim = static_cast<int>(comm.size());
  out.center_dim = static_cast<int>(center.size());

  // Real (Hermitian) spanning set of the center.
  std::vector<ComplexMatrix> herm;
  for (const auto& z : center) {
    herm.push_back(0.5 * (z + z.adjoint()));
    herm.push_back(Complex(0, 0.5) * (z - z.adjoint()));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<int>> clusters;
  ComplexMatrix vecs;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 8)
      throw NumericalError(
          "block_decompose: central element degenerate after 8 draws");
    ComplexMatrix z = ComplexMatrix::Zero(n, n);
    for (const auto& h : herm) z += gauss(rng) * h;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(z);
    if (es.info() != Eigen::Success)
      throw NumericalError("block_decompose: center eigendecomposition failed");
    double scale = std::max(1.0, std::fabs(es.eigenvalues()(0)));
    scale = std::max(scale, std::fabs(es.eigenvalues()(n - 1)));
    double gap = 1e-6 * scale;
    clusters.assign(1, {0});
    for (int i = 1; i < n; ++i) {
      if (es.eigenvalues()(i) - es.eigenvalues()(i - 1) < gap)
        clusters.back().push_back(i);
      else
        clusters.push_back({i});
    }
    if (static_cast<int>(clusters.size()) == out.center_dim) {
      vecs = es.eigenvectors();
      break;
    }
  }

  struct Raw {
    ComplexMatrix projection;
    int first_support = 0;
  };
  std::vector<Raw> raw;
  for (const auto& c : clusters) {
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (int i : c) p += vecs.col(i) * vecs.col(i).adjoint();
    int first = n;
    for (int i = 0; i < n && first == n; ++i)
      if (p(i, i).real() > 0.5 / n) first = i;
    raw.push_back({std::move(p), first});
  }
  std::sort(raw.begin(), raw.end(),
            [](const Raw& a, const Raw& b) { return a.first_support < b.first_support; });

  for (auto& r : raw) {
    const ComplexMatrix& p = r.projection;
    // Central projections must commute with every generator.
    for (const auto& g : generators)
      if (max_abs(commutator(p, g)) > 1e-7 * std::max(1.0, max_abs(g)))
        throw NumericalError("block_decompose: projection escapes the center");

    int d = static_cast<int>(std::llround(p.trace().real()));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(p);
    if (es.info() != Eigen::Success)
      throw NumericalError("block_decompose: projection decomposition failed");
    ComplexMatrix basis(n, d);
    int found = 0;
    for (int i = 0; i < n; ++i)
      if (es.eigenvalues()(i) > 0.5) {
        if (found == d)
          throw NumericalError("block_decompose: projection rank mismatch");
        basis.col(found++) = es.eigenvectors().col(i);
      }
    if (found != d)
      throw NumericalError("block_decompose: projection rank mismatch");
    for (int c = 0; c < d; ++c) {
      int imax = 0;
      for (int i = 1; i < n; ++i)
        if (std::abs(basis(i, c)) > std::abs(basis(imax, c))) imax = i;
      Complex ph = basis(imax, c);
      if (std::abs(ph) > 0) basis.col(c) *= std::conj(ph) / std::abs(ph);
    }

    // Multiplicity^2 = dimension of the commutant restricted to the block.
    int restricted_dim = 0;
    {
      ComplexMatrix span(d * d, comm.size());
      int cols = 0;
      for (const auto& x : comm) {
        ComplexMatrix y = basis.adjoint() * x * basis;
        ComplexVector v = Eigen::Map<const ComplexVector>(y.data(), d * d);
        for (int pass = 0; pass < 2 && cols > 0; ++pass)
          v -= span.leftCols(cols) * (span.leftCols(cols).adjoint() * v);
        if (v.norm() >= 1e-7) span.col(cols++) = v / v.norm();
      }
      restricted_dim = cols;
    }
    int m = static_cast<int>(std::llround(std::sqrt(double(restricted_dim))));
    if (m * m != restricted_dim || m < 1 || d % m != 0)
      throw NumericalError("block_decompose: restricted commutant dimension " +
                           std::to_string(restricted_dim) +
                           " is not a square dividing the block");
    Block blk;
    blk.basis = std::move(basis);
    blk.block_dim = d / m;
    blk.multiplicity = m;
    out.blocks.push_back(std::move(blk));
    out.central_projections.push_back(r.projection);
  }
  return out;
}

BlockClosureReport block_lie_closure(const ControlSystem& sys,
                                     const std::vector<int>& generator_indices,
                                     double rank_tol, int max_passes,
                                     std::uint64_t seed, double tol) {
  sys.validate();
  if (generator_indices.empty())
    throw std::invalid_argument("block_lie_closure: no generator indices");
  std::vector<ComplexMatrix> chosen;
  std::vector<bool> used(static_cast<size_t>(sys.n_controls()) + 1, false);
  for (int idx : generator_indices) {
    if (idx < 0 || idx > sys.n_controls())
      throw std::invalid_argument("block_lie_closure: generator index out of range");
    if (used[static_cast<size_t>(idx)]) continue;
    used[static_cast<size_t>(idx)] = true;
    chosen.push_back(idx == 0 ? sys.spectrum.drift_matrix()
                              : sys.controls[static_cast<size_t>(idx - 1)]);
  }

  BlockClosureReport report;
  report.decomposition = block_decompose(chosen, seed, tol);

  for (size_t b = 0; b < report.decomposition.blocks.size(); ++b) {
    const Block& blk = report.decomposition.blocks[b];
    int d = static_cast<int>(blk.basis.cols());
    std::vector<ComplexMatrix> gens;
    for (const auto& g : chosen) {
      ComplexMatrix r = blk.basis.adjoint() * g * blk.basis;
      gens.push_back(Complex(0, 1) * traceless_part(r));
    }
    BlockClosureEntry entry;
    entry.block_index = static_cast<int>(b);
    entry.subspace_dim = d;
    entry.block_dim = blk.block_dim;
    entry.multiplicity = blk.multiplicity;
    entry.su_dim = blk.block_dim * blk.block_dim - 1;
    entry.u_dim = blk.block_dim * blk.block_dim;
    bool all_zero = true;
    for (const auto& g : gens)
      if (hs_norm(g) > rank_tol) all_zero = false;
    entry.closure_dim =
        all_zero ? 0 : lie_closure(gens, rank_tol, max_passes).dim();
    report.per_block.push_back(entry);
  }

  std::vector<ComplexMatrix> full;
  for (const auto& g : chosen) full.push_back(Complex(0, 1) * g);
  for (int l = 1; l <= sys.n_controls(); ++l)
    if (!used[static_cast<size_t>(l)]) {
      full.push_back(Complex(0, 1) * sys.controls[static_cast<size_t>(l - 1)]);
      report.has_remaining_controls = true;
    }
  report.full_closure_dim = lie_closure(full, rank_tol, max_passes).dim();
  report.full_ambient_dim = sys.dim() * sys.dim();
  return report;
}

}  // namespace larckit
