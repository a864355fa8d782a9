#include "core/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "core/integer_relation.hpp"
#include "core/matrix_ops.hpp"

namespace larckit {

bool DriftSpectrum::non_degenerate() const {
  return std::all_of(multiplicities.begin(), multiplicities.end(),
                     [](int m) { return m == 1; });
}

bool DriftSpectrum::has_exact_tags() const {
  if (exact_values.size() != eigenvalues.size()) return false;
  return std::all_of(exact_values.begin(), exact_values.end(),
                     [](const auto& t) { return t.has_value(); });
}

ComplexMatrix DriftSpectrum::drift_matrix() const {
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (size_t k = 0; k < eigenvalues.size(); ++k)
    h += eigenvalues[k] * projections[k];
  return h;
}

ComplexMatrix DriftSpectrum::prefix_projector(int n_modes) const {
  if (n_modes < 0 || n_modes > modes())
    throw std::invalid_argument("prefix_projector: mode count out of range");
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < n_modes; ++k) p += projections[k];
  return p;
}

std::vector<double> DriftSpectrum::xhat() const {
  std::vector<double> out(eigenvalues.size());
  for (size_t k = 0; k < out.size(); ++k)
    out[k] = eigenvalues[k] / (2.0 * std::numbers::pi);
  return out;
}

void DriftSpectrum::validate(double tol) const {
  if (dim < 1 || dim > kMaxDenseDim)
    throw std::invalid_argument("DriftSpectrum: dimension out of range");
  size_t K = eigenvalues.size();
  if (K == 0 || multiplicities.size() != K || projections.size() != K)
    throw std::invalid_argument("DriftSpectrum: inconsistent field sizes");
  if (!exact_values.empty() && exact_values.size() != K)
    throw std::invalid_argument("DriftSpectrum: tag count mismatch");
  for (size_t k = 1; k < K; ++k)
    if (!(eigenvalues[k] > eigenvalues[k - 1]))
      throw std::invalid_argument(
          "DriftSpectrum: eigenvalues must be strictly ascending");
  double scale = 1.0;
  for (double x : eigenvalues) scale = std::max(scale, std::fabs(x));
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  int mult_total = 0;
  for (size_t k = 0; k < K; ++k) {
    const ComplexMatrix& f = projections[k];
    if (f.rows() != dim || f.cols() != dim)
      throw std::invalid_argument("DriftSpectrum: projection shape mismatch");
    if (!is_hermitian(f, tol))
      throw std::invalid_argument("DriftSpectrum: projection not Hermitian");
    if (max_abs(f * f - f) > tol * std::max(1.0, max_abs(f)))
      throw std::invalid_argument("DriftSpectrum: projection not idempotent");
    double tr = f.trace().real();
    if (std::fabs(tr - multiplicities[k]) > 1e-6)
      throw std::invalid_argument(
          "DriftSpectrum: multiplicity inconsistent with projection trace");
    for (size_t j = 0; j < k; ++j)
      if (max_abs(projections[j] * f) > tol * 10.0)
        throw std::invalid_argument(
            "DriftSpectrum: projections not mutually orthogonal");
    sum += f;
    mult_total += multiplicities[k];
  }
  sum.diagonal().array() -= 1.0;
  if (max_abs(sum) > tol * 10.0)
    throw std::invalid_argument(
        "DriftSpectrum: projections do not resolve the identity");
  if (mult_total != dim)
    throw std::invalid_argument("DriftSpectrum: multiplicities do not sum to dim");
  if (!exact_values.empty()) {
    for (size_t k = 0; k < K; ++k) {
      if (!exact_values[k]) continue;
      double v = exact_values[k]->value(symbols);
      if (std::fabs(v - eigenvalues[k]) > 1e-8 * std::max(1.0, scale))
        throw std::invalid_argument(
            "DriftSpectrum: exact tag disagrees with numeric eigenvalue");
    }
  }
}

DriftSpectrum group_degenerate(const std::vector<double>& raw, double gap_tol,
                               const ComplexMatrix* eigenvectors) {
  int n = static_cast<int>(raw.size());
  if (n < 1) throw std::invalid_argument("group_degenerate: empty spectrum");
  if (gap_tol < 0) throw std::invalid_argument("group_degenerate: gap_tol < 0");
  if (eigenvectors &&
      (eigenvectors->rows() != n || eigenvectors->cols() != n))
    throw std::invalid_argument("group_degenerate: eigenvector shape mismatch");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return raw[a] < raw[b]; });

  DriftSpectrum s;
  s.dim = n;
  // Clusters are maximal chains of consecutive gaps below gap_tol.
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i + 1;
    while (j < order.size() &&
           raw[order[j]] - raw[order[j - 1]] < gap_tol)
      ++j;
    double mean = 0.0;
    ComplexMatrix f = ComplexMatrix::Zero(n, n);
    for (size_t t = i; t < j; ++t) {
      mean += raw[order[t]];
      if (eigenvectors) {
        ComplexVector v = eigenvectors->col(order[t]);
        f += v * v.adjoint();
      } else {
        f(order[t], order[t]) += 1.0;
      }
    }
    mean /= double(j - i);
    s.eigenvalues.push_back(mean);
    s.multiplicities.push_back(static_cast<int>(j - i));
    s.projections.push_back(std::move(f));
    i = j;
  }
  return s;
}

DriftSpectrum spectrum_from_hermitian(const ComplexMatrix& h0, double gap_tol) {
  if (h0.rows() != h0.cols() || h0.rows() < 1)
    throw std::invalid_argument("spectrum_from_hermitian: not square");
  if (!is_hermitian(h0))
    throw std::invalid_argument("spectrum_from_hermitian: not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h0);
  if (es.info() != Eigen::Success)
    throw NumericalError("spectrum_from_hermitian: eigendecomposition failed");
  std::vector<double> raw(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  if (gap_tol < 0) {
    double scale = 0.0;
    for (double v : raw) scale = std::max(scale, std::fabs(v));
    gap_tol = 1e-9 * std::max(1.0, scale);
  }
  ComplexMatrix vecs = es.eigenvectors();
  return group_degenerate(raw, gap_tol, &vecs);
}

DriftSpectrum spectrum_from_diagonal(const std::vector<double>& values,
                                     double gap_tol,
                                     std::vector<std::optional<ExactValue>> tags,
                                     std::map<std::string, double> symbols) {
  if (!tags.empty() && tags.size() != values.size())
    throw std::invalid_argument("spectrum_from_diagonal: tag count mismatch");
  if (gap_tol < 0) {
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::fabs(v));
    gap_tol = 1e-9 * std::max(1.0, scale);
  }
  DriftSpectrum s = group_degenerate(values, gap_tol, nullptr);
  s.symbols = std::move(symbols);
  if (!tags.empty()) {
    // Tags survive only where the cluster is a single raw value; a merged
    // cluster replaces its members' tags with nothing.
    s.exact_values.assign(s.eigenvalues.size(), std::nullopt);
    for (size_t k = 0; k < s.eigenvalues.size(); ++k) {
      if (s.multiplicities[k] != 1) continue;
      for (size_t i = 0; i < values.size(); ++i) {
        if (std::fabs(values[i] - s.eigenvalues[k]) == 0.0 && tags[i]) {
          s.exact_values[k] = tags[i];
          s.exact_values[k]->normalize();
          break;
        }
      }
    }
  }
  s.validate();
  return s;
}

const ComplexMatrix& eigenprojection(const DriftSpectrum& s, int k) {
  if (k < 0 || k >= s.modes())
    throw std::invalid_argument("eigenprojection: index out of range");
  return s.projections[static_cast<size_t>(k)];
}

ComplexMatrix eigenbasis_matrix(const DriftSpectrum& s) {
  ComplexMatrix basis(s.dim, s.dim);
  int col = 0;
  for (size_t k = 0; k < s.projections.size(); ++k) {
    const ComplexMatrix& f = s.projections[k];
    int m = s.multiplicities[k];
    if (m == 1) {
      // Rank one: the heaviest column of F, normalized, is the eigenvector.
      int best = 0;
      for (int j = 1; j < s.dim; ++j)
        if (f.col(j).norm() > f.col(best).norm()) best = j;
      basis.col(col) = f.col(best) / f.col(best).norm();
    } else {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(f);
      if (es.info() != Eigen::Success)
        throw NumericalError("eigenbasis_matrix: projection decomposition failed");
      int found = 0;
      for (int j = 0; j < s.dim; ++j)
        if (es.eigenvalues()(j) > 0.5) {
          basis.col(col + found) = es.eigenvectors().col(j);
          ++found;
        }
      if (found != m)
        throw NumericalError("eigenbasis_matrix: projection rank mismatch");
    }
    for (int c = col; c < col + m; ++c) {
      int imax = 0;
      for (int i = 1; i < s.dim; ++i)
        if (std::abs(basis(i, c)) > std::abs(basis(imax, c))) imax = i;
      Complex z = basis(imax, c);
      if (std::abs(z) > 0) basis.col(c) *= std::conj(z) / std::abs(z);
    }
    col += m;
  }
  return basis;
}

const char* to_string(IndependenceStatus s) {
  switch (s) {
    case IndependenceStatus::Independent: return "independent";
    case IndependenceStatus::Dependent: return "dependent";
    case IndependenceStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Coordinates of a tag over the basis (1, symbols...): "" keys the rational
// part. Exactness is over Q; the declared symbols plus 1 are assumed
// Q-linearly independent.
std::map<std::string, Rational> tag_coordinates(const ExactValue& t) {
  std::map<std::string, Rational> v;
  if (t.rational != 0) v[""] = t.rational;
  for (const auto& [name, c] : t.coeffs)
    if (c != 0) v[name] = c;
  return v;
}

// Nonzero rational c with sum_k c_k row_k = 0, if one exists: kernel of the
// transposed coordinate matrix by exact Gaussian elimination.
std::optional<std::vector<Rational>> exact_left_kernel(
    const std::vector<std::map<std::string, Rational>>& rows) {
  // Collect coordinate names.
  std::vector<std::string> coords;
  for (const auto& r : rows)
    for (const auto& [name, _] : r)
      if (std::find(coords.begin(), coords.end(), name) == coords.end())
        coords.push_back(name);
  size_t K = rows.size();
  size_t C = coords.size();
  // a[c][k] = coordinate c of row k (the transpose).
  std::vector<std::vector<Rational>> a(C, std::vector<Rational>(K, Rational(0)));
  for (size_t k = 0; k < K; ++k)
    for (size_t c = 0; c < C; ++c) {
      auto it = rows[k].find(coords[c]);
      if (it != rows[k].end()) a[c][k] = it->second;
    }
  // Row echelon over Q; record pivot columns.
  std::vector<int> pivot_of_col(K, -1);
  size_t row = 0;
  for (size_t col = 0; col < K && row < C; ++col) {
    size_t sel = row;
    while (sel < C && a[sel][col] == 0) ++sel;
    if (sel == C) continue;
    std::swap(a[row], a[sel]);
    Rational p = a[row][col];
    for (size_t j = col; j < K; ++j) a[row][j] /= p;
    for (size_t r = 0; r < C; ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (size_t j = col; j < K; ++j) a[r][j] -= f * a[row][j];
    }
    pivot_of_col[col] = static_cast<int>(row);
    ++row;
  }
  // First free column yields a kernel vector.
  for (size_t col = 0; col < K; ++col) {
    if (pivot_of_col[col] >= 0) continue;
    std::vector<Rational> c(K, Rational(0));
    c[col] = 1;
    for (size_t j = 0; j < K; ++j) {
      if (pivot_of_col[j] < 0) continue;
      c[j] = -a[static_cast<size_t>(pivot_of_col[j])][col];
    }
    return c;
  }
  return std::nullopt;
}

std::optional<std::vector<long long>> integerize(
    const std::vector<Rational>& c) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt l = 1;
  for (const auto& r : c) l = boost::multiprecision::lcm(l, denominator(r));
  std::vector<BigInt> ints;
  ints.reserve(c.size());
  BigInt g = 0;
  for (const auto& r : c) {
    BigInt v = numerator(r) * (l / denominator(r));
    ints.push_back(v);
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(v));
  }
  if (g == 0) return std::nullopt;
  std::vector<long long> out;
  out.reserve(ints.size());
  const BigInt cap = BigInt(std::numeric_limits<long long>::max()) / 2;
  for (auto& v : ints) {
    BigInt w = v / g;
    if (boost::multiprecision::abs(w) > cap) return std::nullopt;
    out.push_back(static_cast<long long>(w));
  }
  return out;
}

}  // namespace

IndependenceVerdict check_rational_independence(const DriftSpectrum& s,
                                                long long bound, double tau) {
  if (bound < 1) throw std::invalid_argument("independence: bound must be >= 1");
  if (!(tau > 0)) throw std::invalid_argument("independence: tau must be > 0");
  const std::vector<double>& x = s.eigenvalues;
  size_t K = x.size();
  if (K == 0) throw std::invalid_argument("independence: empty spectrum");

  IndependenceVerdict v;
  v.coeff_bound = bound;
  v.tolerance = tau;

  if (s.has_exact_tags()) {
    std::vector<std::map<std::string, Rational>> rows;
    rows.reserve(K);
    for (const auto& t : s.exact_values) rows.push_back(tag_coordinates(*t));
    auto kernel = exact_left_kernel(rows);
    if (kernel) {
      if (auto w = integerize(*kernel)) {
        v.status = IndependenceStatus::Dependent;
        v.exact = true;
        v.method = "exact-tags";
        v.witness = *w;
        v.witness_residual = static_cast<double>(relation_residual(x, *w));
        long long wmax = 0;
        for (auto c : *w) wmax = std::max(wmax, std::llabs(c));
        v.coeff_bound = std::max(bound, wmax);
        return v;
      }
      // Witness coefficients overflow; fall through to the numeric path.
    } else {
      v.status = IndependenceStatus::Independent;
      v.exact = true;
      v.method = "exact-tags";
      return v;
    }
  }

  // Numeric path. A near-tau candidate makes the verdict Inconclusive.
  auto decide = [&](const std::optional<IntegerRelation>& hit,
                    const std::optional<IntegerRelation>& near_hit,
                    const char* method) {
    v.method = method;
    if (hit) {
      long double res = relation_residual(x, hit->coeffs);
      long double unc = relation_uncertainty(x, hit->coeffs);
      if (static_cast<long double>(tau) - res > unc) {
        v.status = IndependenceStatus::Dependent;
        v.witness = hit->coeffs;
        v.witness_residual = static_cast<double>(res);
      } else {
        v.status = IndependenceStatus::Inconclusive;
        v.witness = hit->coeffs;
        v.witness_residual = static_cast<double>(res);
      }
      return;
    }
    if (near_hit) {
      long double res = relation_residual(x, near_hit->coeffs);
      long double unc = relation_uncertainty(x, near_hit->coeffs);
      if (res - static_cast<long double>(tau) <= unc) {
        v.status = IndependenceStatus::Inconclusive;
        v.witness = near_hit->coeffs;
        v.witness_residual = static_cast<double>(res);
        return;
      }
    }
    v.status = IndependenceStatus::Independent;
  };

  if (K <= 4) {
    auto hit = find_relation_exhaustive(x, bound, tau);
    std::optional<IntegerRelation> near_hit;
    if (!hit) {
      double mag = 0.0;
      for (double xv : x) mag += std::fabs(xv);
      double widened = tau + 1e-15 * double(bound) * std::max(1.0, mag);
      near_hit = find_relation_exhaustive(x, bound, widened);
    }
    decide(hit, near_hit, "exhaustive");
  } else {
    auto hit = find_relation_lll(x, bound, tau);
    decide(hit, std::nullopt, "lll");
  }
  return v;
}

std::optional<double> exact_flow_period(const DriftSpectrum& s) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (!s.has_exact_tags()) return std::nullopt;
  std::vector<std::map<std::string, Rational>> rows;
  for (const auto& t : s.exact_values) rows.push_back(tag_coordinates(*t));

  int pivot = -1;
  for (size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k].empty()) {
      pivot = static_cast<int>(k);
      break;
    }
  }
  if (pivot < 0) return std::nullopt;  // zero drift

  const auto& vp = rows[static_cast<size_t>(pivot)];
  const auto& [c0_name, c0_val] = *vp.begin();
  std::vector<Rational> ratios;
  for (size_t k = 0; k < rows.size(); ++k) {
    const auto& vk = rows[k];
    if (vk.empty()) continue;  // x_k = 0 constrains nothing
    auto it = vk.find(c0_name);
    if (it == vk.end()) return std::nullopt;
    Rational r = it->second / c0_val;
    if (vk.size() != vp.size()) return std::nullopt;
    for (const auto& [name, val] : vp) {
      auto jt = vk.find(name);
      if (jt == vk.end() || jt->second != r * val) return std::nullopt;
    }
    ratios.push_back(r);
  }

  // Minimal positive rational sigma with sigma * r_k integer for all k:
  // lcm of denominators over gcd of numerators (reduced ratios).
  BigInt num_gcd = 0, den_lcm = 1;
  for (const auto& r : ratios) {
    num_gcd = boost::multiprecision::gcd(
        num_gcd, boost::multiprecision::abs(numerator(r)));
    den_lcm = boost::multiprecision::lcm(den_lcm, denominator(r));
  }
  if (num_gcd == 0) return std::nullopt;
  Rational sigma(den_lcm, num_gcd);
  double xp = s.eigenvalues[static_cast<size_t>(pivot)];
  double t = 2.0 * std::numbers::pi * static_cast<double>(sigma) / std::fabs(xp);
  if (!(t > 0) || !std::isfinite(t)) return std::nullopt;
  return t;
}

}  // namespace larckit
