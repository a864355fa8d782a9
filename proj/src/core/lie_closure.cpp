#include "core/lie_closure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/matrix_ops.hpp"
#include "core/spectrum.hpp"

namespace larckit {

namespace {

// Anti-Hermitian matrices form a real vector space; Re tr(A^dagger B) is the
// matching real inner product, i.e. the dot product of the stacked real and
// imaginary parts.
Eigen::VectorXd flatten(const ComplexMatrix& m) {
  int n2 = static_cast<int>(m.size());
  Eigen::VectorXd v(2 * n2);
  v.head(n2) = Eigen::Map<const Eigen::MatrixXd>(
                   reinterpret_cast<const double*>(m.data()), 2, n2)
                   .row(0);
  v.tail(n2) = Eigen::Map<const Eigen::MatrixXd>(
                   reinterpret_cast<const double*>(m.data()), 2, n2)
                   .row(1);
  return v;
}

ComplexMatrix unflatten(const Eigen::VectorXd& v, int n) {
  ComplexMatrix m(n, n);
  int n2 = n * n;
  for (int i = 0; i < n2; ++i) m.data()[i] = Complex(v(i), v(n2 + i));
  return m;
}

// Incremental orthonormal span over the reals with twice-reorthogonalized
// Gram-Schmidt.
class RealSpan {
 public:
  explicit RealSpan(int n) : n_(n), cols_(0), basis_(2 * n * n, 2 * n * n) {}

  int dim() const { return cols_; }

  double off_span_norm(const ComplexMatrix& x) const {
    Eigen::VectorXd r = flatten(x);
    for (int pass = 0; pass < 2 && cols_ > 0; ++pass)
      r -= basis_.leftCols(cols_) * (basis_.leftCols(cols_).transpose() * r);
    return r.norm();
  }

  // Adjoins the off-span residual when its norm reaches tol; returns the
  // normalized element or nothing.
  std::optional<ComplexMatrix> adjoin(const ComplexMatrix& x, double tol) {
    Eigen::VectorXd r = flatten(x);
    if (r.norm() < tol) return std::nullopt;
    for (int pass = 0; pass < 2 && cols_ > 0; ++pass)
      r -= basis_.leftCols(cols_) * (basis_.leftCols(cols_).transpose() * r);
    double nr = r.norm();
    if (nr < tol) return std::nullopt;
    r /= nr;
    basis_.col(cols_++) = r;
    return unflatten(r, n_);
  }

 private:
  int n_;
  int cols_;
  Eigen::MatrixXd basis_;
};

ComplexMatrix skew_part(const ComplexMatrix& m) {
  return 0.5 * (m - m.adjoint());
}

}  // namespace

double LieBasis::residual_off_span(const ComplexMatrix& x) const {
  RealSpan span(dim_ambient);
  for (const auto& e : elements) span.adjoin(e, 1e-300);
  return span.off_span_norm(x);
}

LieBasis lie_closure(const std::vector<ComplexMatrix>& generators,
                     double rank_tol, int max_passes,
                     const std::vector<std::string>& labels) {
  if (generators.empty())
    throw std::invalid_argument("lie_closure: no generators");
  if (!(rank_tol > 0)) throw std::invalid_argument("lie_closure: rank_tol <= 0");
  if (max_passes < 1) throw std::invalid_argument("lie_closure: max_passes < 1");
  if (!labels.empty() && labels.size() != generators.size())
    throw std::invalid_argument("lie_closure: label count mismatch");
  int n = static_cast<int>(generators.front().rows());
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("lie_closure: generator shape mismatch");
    if (!is_anti_hermitian(g, 1e-8))
      throw std::invalid_argument("lie_closure: generator not anti-Hermitian");
  }
  if (n > kMaxDenseDim)
    throw std::invalid_argument("lie_closure: dimension exceeds dense limit");

  LieBasis out;
  out.dim_ambient = n;
  out.rank_tol = rank_tol;
  const int ambient = n * n;

  RealSpan span(n);
  auto adjoin = [&](const ComplexMatrix& x, std::string word) {
    if (auto e = span.adjoin(skew_part(x), rank_tol)) {
      out.elements.push_back(std::move(*e));
      out.provenance.push_back(std::move(word));
    }
  };

  for (size_t j = 0; j < generators.size(); ++j) {
    double nj = hs_norm(generators[j]);
    if (nj == 0.0) continue;
    std::string label =
        labels.empty() ? "g" + std::to_string(j + 1) : labels[j];
    adjoin(generators[j] / nj, std::move(label));
  }

  int new_lo = 0;
  int new_hi = out.dim();
  while (out.passes < max_passes && out.dim() < ambient && new_hi > new_lo) {
    ++out.passes;
    for (int i = new_lo; i < new_hi && out.dim() < ambient; ++i)
      for (int j = 0; j < i && out.dim() < ambient; ++j)
        adjoin(commutator(out.elements[i], out.elements[j]),
               "[" + out.provenance[i] + "," + out.provenance[j] + "]");
    new_lo = new_hi;
    new_hi = out.dim();
  }
  out.closed = out.dim() == ambient || new_hi == new_lo;
  return out;
}

int complex_lie_closure_dim(const std::vector<ComplexMatrix>& generators,
                            double rank_tol, int max_passes) {
  if (generators.empty())
    throw std::invalid_argument("complex_lie_closure_dim: no generators");
  int n = static_cast<int>(generators.front().rows());
  int ambient = n * n;

  std::vector<ComplexMatrix> elements;
  ComplexMatrix basis(ambient, ambient);  // flattened columns
  int dim = 0;
  auto adjoin = [&](const ComplexMatrix& x) {
    ComplexVector r = Eigen::Map<const ComplexVector>(x.data(), ambient);
    if (r.norm() < rank_tol) return;
    for (int pass = 0; pass < 2 && dim > 0; ++pass)
      r -= basis.leftCols(dim) * (basis.leftCols(dim).adjoint() * r);
    double nr = r.norm();
    if (nr < rank_tol) return;
    r /= nr;
    basis.col(dim++) = r;
    elements.push_back(
        Eigen::Map<const ComplexMatrix>(r.data(), n, n));
  };

  for (const auto& g : generators) {
    double ng = hs_norm(g);
    if (ng > 0) adjoin(g / ng);
  }
  int new_lo = 0, new_hi = dim, passes = 0;
  while (passes < max_passes && dim < ambient && new_hi > new_lo) {
    ++passes;
    for (int i = new_lo; i < new_hi && dim < ambient; ++i)
      for (int j = 0; j < i && dim < ambient; ++j)
        adjoin(commutator(elements[i], elements[j]));
    new_lo = new_hi;
    new_hi = dim;
  }
  return dim;
}

const char* to_string(LarcVerdict v) {
  switch (v) {
    case LarcVerdict::Full: return "full";
    case LarcVerdict::Proper: return "proper";
    case LarcVerdict::MaxIterations: return "max-iterations";
  }
  return "?";
}

LarcReport larc_check(const ControlSystem& sys,
                      const std::vector<int>& truncations, double rank_tol,
                      int max_passes) {
  sys.validate();
  if (truncations.empty())
    throw std::invalid_argument("larc_check: no truncations");
  const DriftSpectrum& s = sys.spectrum;
  ComplexMatrix basis = eigenbasis_matrix(s);
  std::vector<int> offset(s.modes() + 1, 0);
  for (int k = 0; k < s.modes(); ++k)
    offset[k + 1] = offset[k] + s.multiplicities[k];

  LarcReport report;
  for (int nu : truncations) {
    if (nu < 1 || nu > s.dim)
      throw std::invalid_argument("larc_check: truncation out of range");
    ComplexMatrix b = basis.leftCols(nu);

    std::vector<ComplexMatrix> gens;
    std::vector<std::string> labels;
    for (int k = 0; k < s.modes() && offset[k] < nu; ++k) {
      ComplexMatrix f = ComplexMatrix::Zero(nu, nu);
      for (int c = offset[k]; c < std::min(offset[k + 1], nu); ++c)
        f(c, c) = 1.0;  // projections are exactly diagonal in the eigenbasis
      gens.push_back(Complex(0, 1) * f);
      labels.push_back("F" + std::to_string(k + 1));
    }
    for (int l = 0; l < sys.n_controls(); ++l) {
      gens.push_back(Complex(0, 1) * (b.adjoint() * sys.controls[l] * b));
      labels.push_back("H" + std::to_string(l + 1));
    }

    LieBasis lb = lie_closure(gens, rank_tol, max_passes, labels);
    LarcEntry entry;
    entry.truncation = nu;
    entry.closure_dim = lb.dim();
    entry.ambient_dim = nu * nu;
    entry.passes = lb.passes;
    entry.verdict = lb.dim() == nu * nu ? LarcVerdict::Full
                    : lb.closed        ? LarcVerdict::Proper
                                       : LarcVerdict::MaxIterations;
    report.history.push_back(entry);
  }
  const LarcEntry& last = report.history.back();
  report.closure_dim = last.closure_dim;
  report.ambient_dim = last.ambient_dim;
  report.verdict = last.verdict;
  report.iterations = last.passes;
  return report;
}

std::pair<ComplexMatrix, ComplexMatrix> double_bracket(const ComplexMatrix& f_v,
                                                       const ComplexMatrix& h,
                                                       const ComplexMatrix& f_w,
                                                       double tol) {
  auto check_rank1 = [&](const ComplexMatrix& f, const char* which) {
    if (!is_hermitian(f, tol) || max_abs(f * f - f) > tol ||
        std::fabs(f.trace().real() - 1.0) > tol)
      throw std::invalid_argument(std::string("double_bracket: ") + which +
                                  " is not a rank-1 projection");
  };
  check_rank1(f_v, "F_v");
  check_rank1(f_w, "F_w");
  if (max_abs(f_v * f_w) > tol)
    throw std::invalid_argument("double_bracket: projections not orthogonal");
  if (!is_hermitian(h, tol))
    throw std::invalid_argument("double_bracket: H not Hermitian");
  ComplexMatrix inner = commutator(h, f_v);
  ComplexMatrix sym = commutator(f_w, inner);
  ComplexMatrix antisym = commutator(f_v, sym);
  return {sym, antisym};
}

ComplexMatrix BracketExpr::evaluate(
    const std::function<ComplexMatrix(const std::string&)>& lookup) const {
  switch (kind) {
    case Kind::Generator:
      return lookup(label);
    case Kind::Commutator:
      return commutator(children[0].evaluate(lookup),
                        children[1].evaluate(lookup));
    case Kind::LinearCombo: {
      ComplexMatrix acc = weights[0] * children[0].evaluate(lookup);
      for (size_t i = 1; i < children.size(); ++i)
        acc += weights[i] * children[i].evaluate(lookup);
      return acc;
    }
  }
  throw std::logic_error("BracketExpr: bad kind");
}

std::string BracketExpr::to_string() const {
  switch (kind) {
    case Kind::Generator:
      return label;
    case Kind::Commutator:
      return "[" + children[0].to_string() + "," + children[1].to_string() +
             "]";
    case Kind::LinearCombo: {
      std::ostringstream os;
      os.precision(17);
      for (size_t i = 0; i < children.size(); ++i) {
        if (i) os << " + ";
        os << "(" << weights[i].real() << (weights[i].imag() < 0 ? "" : "+")
           << weights[i].imag() << "i)*" << children[i].to_string();
      }
      return os.str();
    }
  }
  throw std::logic_error("BracketExpr: bad kind");
}

namespace {

BracketExpr gen(std::string label) {
  BracketExpr e;
  e.kind = BracketExpr::Kind::Generator;
  e.label = std::move(label);
  return e;
}

BracketExpr comm(BracketExpr a, BracketExpr b) {
  BracketExpr e;
  e.kind = BracketExpr::Kind::Commutator;
  e.children = {std::move(a), std::move(b)};
  return e;
}

BracketExpr combo(std::vector<Complex> w, std::vector<BracketExpr> c) {
  BracketExpr e;
  e.kind = BracketExpr::Kind::LinearCombo;
  e.weights = std::move(w);
  e.children = std::move(c);
  return e;
}

}  // namespace

std::vector<BracketCertificate> thm2_certificate(const ControlSystem& sys,
                                                 double edge_tol,
                                                 long long bound, double tau) {
  sys.validate();
  const DriftSpectrum& s = sys.spectrum;
  if (!s.non_degenerate())
    throw HypothesesNotMet("thm2_certificate: drift spectrum is degenerate");
  IndependenceVerdict iv = check_rational_independence(s, bound, tau);
  if (iv.status != IndependenceStatus::Independent)
    throw HypothesesNotMet(
        std::string("thm2_certificate: independence verdict is ") +
        to_string(iv.status));
  CouplingGraph graph = build_graph(sys, edge_tol);
  if (!is_connected(graph).connected)
    throw HypothesesNotMet("thm2_certificate: coupling graph is disconnected");

  int n = s.dim;
  ComplexMatrix basis = eigenbasis_matrix(s);
  // Strongest witness control per unordered edge.
  std::vector<std::vector<int>> edge_control(n, std::vector<int>(n, -1));
  for (const auto& e : graph.edges)
    edge_control[e.v][e.w] = edge_control[e.w][e.v] = e.control;

  auto lookup = [&](const std::string& label) -> ComplexMatrix {
    int idx = std::stoi(label.substr(1)) - 1;
    if (label[0] == 'F') return s.projections.at(idx);
    return sys.controls.at(static_cast<size_t>(idx));
  };

  // Matrix unit |phi_a><phi_b| along a graph edge, as (sym + antisym)/(2 alpha).
  auto unit_expr = [&](int a, int b) {
    int l = edge_control[a][b];
    Complex alpha = basis.col(a).adjoint() * sys.controls[l] * basis.col(b);
    BracketExpr sym = comm(gen("F" + std::to_string(b + 1)),
                           comm(gen("H" + std::to_string(l + 1)),
                                gen("F" + std::to_string(a + 1))));
    BracketExpr antisym = comm(gen("F" + std::to_string(a + 1)), sym);
    Complex w = 1.0 / (2.0 * alpha);
    return combo({w, w}, {std::move(sym), std::move(antisym)});
  };

  std::vector<BracketCertificate> certs;
  certs.reserve(static_cast<size_t>(n) * n);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      BracketCertificate c;
      c.v = v;
      c.w = w;
      c.target = basis.col(v) * basis.col(w).adjoint();
      if (v == w) {
        c.word = gen("F" + std::to_string(v + 1));
      } else {
        auto path = shortest_path(graph, v, w);
        if (!path)
          throw NumericalError("thm2_certificate: no path in connected graph");
        // Right-nested composition via [|a><b|, |b><c|] = |a><c|.
        const auto& p = *path;
        BracketExpr word = unit_expr(p[p.size() - 2], p.back());
        for (int i = static_cast<int>(p.size()) - 3; i >= 0; --i)
          word = comm(unit_expr(p[i], p[i + 1]), std::move(word));
        c.word = std::move(word);
      }
      c.produced = c.word.evaluate(lookup);
      c.error = hs_norm(c.produced - c.target);
      if (c.error > 1e-9)
        throw NumericalError("thm2_certificate: certificate failed re-evaluation");
      certs.push_back(std::move(c));
    }
  return certs;
}

}  // namespace larckit
