#include "core/matrix_ops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace larckit {

namespace {

void require_square(const ComplexMatrix& a, const char* op) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(op) + ": matrix must be square");
  if (a.rows() < 1 || a.rows() > kMaxDenseDim)
    throw std::invalid_argument(std::string(op) + ": dimension out of range");
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

double scale_of(const ComplexMatrix& a) { return std::max(1.0, max_abs(a)); }

}  // namespace

double max_abs(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol * scale_of(a);
}

bool is_anti_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a + a.adjoint()) <= tol * scale_of(a);
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  ComplexMatrix g = a.adjoint() * a;
  g.diagonal().array() -= 1.0;
  return max_abs(g) <= tol * std::max(1.0, max_abs(a) * max_abs(a));
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator");
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  return (a.adjoint() * b).trace();
}

double hs_norm(const ComplexMatrix& a) { return a.norm(); }

ComplexMatrix herm_exp(const ComplexMatrix& h, double t, double tol) {
  require_square(h, "herm_exp");
  if (!is_hermitian(h, tol))
    throw std::invalid_argument("herm_exp: input is not Hermitian within tol");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError("herm_exp: eigendecomposition failed");
  const auto& vals = es.eigenvalues();
  ComplexVector phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    phases(k) = std::exp(Complex(0.0, t * vals(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix antiherm_exp(const ComplexMatrix& x, double tol) {
  require_square(x, "antiherm_exp");
  if (!is_anti_hermitian(x, tol))
    throw std::invalid_argument(
        "antiherm_exp: input is not anti-Hermitian within tol");
  ComplexMatrix h = Complex(0.0, -1.0) * x;
  h = (h + h.adjoint().eval()) / 2.0;
  return herm_exp(h, 1.0, tol);
}

ComplexMatrix matrix_power(const ComplexMatrix& a, long long n) {
  require_square(a, "matrix_power");
  if (n < 0) throw std::invalid_argument("matrix_power: negative exponent");
  ComplexMatrix result = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

ComplexMatrix trotter_product(const ComplexMatrix& a, const ComplexMatrix& b,
                              long long n, double tol) {
  if (n < 1) throw std::invalid_argument("trotter_product: n must be >= 1");
  require_same_shape(a, b, "trotter_product");
  ComplexMatrix step = herm_exp(a, 1.0 / double(n), tol) *
                       herm_exp(b, 1.0 / double(n), tol);
  return matrix_power(step, n);
}

ComplexMatrix commutator_product(const ComplexMatrix& a, const ComplexMatrix& b,
                                 long long n, double tol) {
  if (n < 1) throw std::invalid_argument("commutator_product: n must be >= 1");
  require_same_shape(a, b, "commutator_product");
  double inv = 1.0 / double(n);
  ComplexMatrix ea = antiherm_exp(a * inv, tol);
  ComplexMatrix eb = antiherm_exp(b * inv, tol);
  ComplexMatrix ea_inv = ea.adjoint();
  ComplexMatrix eb_inv = eb.adjoint();
  ComplexMatrix step = ea * eb * ea_inv * eb_inv;
  return matrix_power(step, n * n);
}

ComplexMatrix traceless_part(const ComplexMatrix& a) {
  require_square(a, "traceless_part");
  ComplexMatrix out = a;
  out.diagonal().array() -= a.trace() / double(a.rows());
  return out;
}

}  // namespace larckit
