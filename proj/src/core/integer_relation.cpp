#include "core/integer_relation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace larckit {

namespace {

using i128 = __int128;

long double to_ld(i128 v) { return static_cast<long double>(v); }

long double dot_ld(const std::vector<i128>& a, const std::vector<i128>& b) {
  long double s = 0.0L;
  for (size_t i = 0; i < a.size(); ++i) s += to_ld(a[i]) * to_ld(b[i]);
  return s;
}

// Textbook LLL (delta = 0.99) with exact integer basis vectors and a floating
// Gram-Schmidt recomputed from scratch after structural changes. Dimensions
// here are tiny, so the O(m^3) recomputation is irrelevant.
class LLL {
 public:
  explicit LLL(std::vector<std::vector<i128>> basis) : b_(std::move(basis)) {}

  void reduce() {
    size_t m = b_.size();
    if (m < 2) return;
    compute_gso();
    size_t k = 1;
    size_t guard = 0;
    const size_t guard_max = 100000;
    while (k < m && guard++ < guard_max) {
      size_reduce(k);
      long double lhs = bstar_norm2_[k];
      long double mu = mu_[k][k - 1];
      if (lhs >= (0.99L - mu * mu) * bstar_norm2_[k - 1]) {
        ++k;
      } else {
        std::swap(b_[k], b_[k - 1]);
        compute_gso();
        k = (k > 1) ? k - 1 : 1;
      }
    }
  }

  const std::vector<std::vector<i128>>& rows() const { return b_; }

 private:
  void compute_gso() {
    size_t m = b_.size();
    size_t n = b_[0].size();
    bstar_.assign(m, std::vector<long double>(n, 0.0L));
    bstar_norm2_.assign(m, 0.0L);
    mu_.assign(m, std::vector<long double>(m, 0.0L));
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < n; ++j) bstar_[i][j] = to_ld(b_[i][j]);
      for (size_t j = 0; j < i; ++j) {
        if (bstar_norm2_[j] <= 0.0L) continue;
        long double proj = 0.0L;
        for (size_t t = 0; t < n; ++t) proj += to_ld(b_[i][t]) * bstar_[j][t];
        mu_[i][j] = proj / bstar_norm2_[j];
        for (size_t t = 0; t < n; ++t) bstar_[i][t] -= mu_[i][j] * bstar_[j][t];
      }
      long double s = 0.0L;
      for (size_t t = 0; t < n; ++t) s += bstar_[i][t] * bstar_[i][t];
      bstar_norm2_[i] = s;
    }
  }

  void size_reduce(size_t k) {
    bool changed = false;
    for (size_t j = k; j-- > 0;) {
      long double mu = mu_[k][j];
      if (std::fabs(mu) > 0.5L) {
        long long q = static_cast<long long>(std::llroundl(mu));
        for (size_t t = 0; t < b_[k].size(); ++t)
          b_[k][t] -= static_cast<i128>(q) * b_[j][t];
        changed = true;
      }
    }
    if (changed) compute_gso();
  }

  std::vector<std::vector<i128>> b_;
  std::vector<std::vector<long double>> bstar_;
  std::vector<long double> bstar_norm2_;
  std::vector<std::vector<long double>> mu_;
};

}  // namespace

long double relation_residual(const std::vector<double>& x,
                              const std::vector<long long>& c) {
  if (x.size() != c.size())
    throw std::invalid_argument("relation_residual: size mismatch");
  long double s = 0.0L;
  for (size_t i = 0; i < x.size(); ++i)
    s += static_cast<long double>(c[i]) * static_cast<long double>(x[i]);
  return std::fabs(s);
}

long double relation_uncertainty(const std::vector<double>& x,
                                 const std::vector<long long>& c) {
  long double mag = 0.0L;
  for (size_t i = 0; i < x.size(); ++i)
    mag += std::fabs(static_cast<long double>(c[i]) *
                      static_cast<long double>(x[i]));
  const long double eps = std::numeric_limits<long double>::epsilon();
  return 8.0L * static_cast<long double>(x.size() + 1) * eps * mag;
}

std::optional<IntegerRelation> find_relation_exhaustive(
    const std::vector<double>& x, long long bound, double tau) {
  size_t k = x.size();
  if (k == 0) throw std::invalid_argument("find_relation_exhaustive: empty");
  if (k > 5)
    throw std::invalid_argument(
        "find_relation_exhaustive: limited to 5 values");
  if (bound < 1) throw std::invalid_argument("bound must be >= 1");

  std::vector<long long> c(k, 0);
  std::optional<IntegerRelation> best;
  // Increasing radius; within a radius, odometer order. Negations skipped by
  // requiring the first nonzero coefficient positive.
  for (long long r = 1; r <= bound; ++r) {
    std::fill(c.begin(), c.end(), -r);
    bool done = false;
    while (!done) {
      long long m = 0;
      for (auto v : c) m = std::max(m, std::llabs(v));
      if (m == r) {
        bool lead_ok = false;
        for (auto v : c) {
          if (v != 0) {
            lead_ok = v > 0;
            break;
          }
        }
        if (lead_ok) {
          long double res = relation_residual(x, c);
          if (!best || res < best->residual)
            best = IntegerRelation{c, static_cast<double>(res)};
        }
      }
      // odometer
      size_t i = 0;
      for (; i < k; ++i) {
        if (c[i] < r) {
          ++c[i];
          for (size_t j = 0; j < i; ++j) c[j] = -r;
          break;
        }
      }
      done = (i == k);
    }
    if (best && best->residual < tau) return best;
  }
  if (best && best->residual < tau) return best;
  return std::nullopt;
}

std::optional<IntegerRelation> find_relation_lll(const std::vector<double>& x,
                                                 long long bound, double tau) {
  size_t k = x.size();
  if (k == 0) throw std::invalid_argument("find_relation_lll: empty");
  if (bound < 1) throw std::invalid_argument("bound must be >= 1");
  if (k == 1) {
    // Single value: relation exists iff |x_0| itself is below tau / bound.
    for (long long c = 1; c <= bound; ++c) {
      std::vector<long long> cv{c};
      long double res = relation_residual(x, cv);
      if (res < tau) return IntegerRelation{cv, static_cast<double>(res)};
    }
    return std::nullopt;
  }

  double xmax = 0.0;
  for (double v : x) xmax = std::max(xmax, std::fabs(v));
  double scale_req = 10.0 * double(k) * double(bound) / std::max(tau, 1e-300);
  double scale_cap = 1e15 / std::max(1.0, xmax);
  long double scale = std::min({scale_req, scale_cap, 9e14});
  scale = std::max(scale, 1e6L);

  std::vector<std::vector<i128>> basis(k, std::vector<i128>(k + 1, 0));
  for (size_t i = 0; i < k; ++i) {
    basis[i][i] = 1;
    long double scaled = scale * static_cast<long double>(x[i]);
    basis[i][k] = static_cast<i128>(std::llroundl(scaled));
  }

  LLL lll(std::move(basis));
  lll.reduce();

  std::optional<IntegerRelation> best;
  for (const auto& row : lll.rows()) {
    std::vector<long long> c(k);
    bool in_range = true;
    bool nonzero = false;
    for (size_t i = 0; i < k; ++i) {
      i128 v = row[i];
      if (v > bound || v < -bound) {
        in_range = false;
        break;
      }
      c[i] = static_cast<long long>(v);
      nonzero = nonzero || c[i] != 0;
    }
    if (!in_range || !nonzero) continue;
    // Canonical sign: first nonzero coefficient positive.
    for (auto v : c) {
      if (v != 0) {
        if (v < 0)
          for (auto& w : c) w = -w;
        break;
      }
    }
    long double res = relation_residual(x, c);
    if (res < tau && (!best || res < best->residual))
      best = IntegerRelation{c, static_cast<double>(res)};
  }
  return best;
}

}  // namespace larckit
