#include "core/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "core/matrix_ops.hpp"

namespace larckit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distance of a to the nearest integer.
double frac_dist(double a) { return std::fabs(a - std::nearbyint(a)); }

class Scanner {
 public:
  Scanner(const std::vector<double>& xhat, const std::vector<double>& lambda,
          double delta, const KroneckerOptions& opts)
      : x_(xhat), l_(lambda), delta_(delta), opts_(opts) {
    horizon_ = opts.horizon > 0 ? opts.horizon : default_horizon(xhat);
  }

  // max_k dist(t x_k - l_k, Z). Counts against the step budget unless a
  // qualifying point is already in hand (refinement must not abort).
  double eval(double t) {
    if (!refining_ && evals_ >= opts_.max_total_steps) throw_exhausted("step budget exhausted");
    ++evals_;
    double m = 0.0;
    for (size_t k = 0; k < x_.size(); ++k)
      m = std::max(m, frac_dist(t * x_[k] - l_[k]));
    if (m < best_f_) {
      best_f_ = m;
      best_t_ = t;
    }
    return m;
  }

  void ensure_in_horizon(double t) {
    while (t > horizon_) {
      if (!opts_.auto_extend) throw_exhausted("horizon exhausted");
      if (evals_ >= opts_.max_total_steps) throw_exhausted("step budget exhausted");
      horizon_ *= 2.0;
    }
  }

  [[noreturn]] void throw_exhausted(const char* why) {
    throw HorizonExhausted(std::string("kronecker_solve: ") + why, certificate(best_t_));
  }

  KroneckerCertificate certificate(double t) const {
    KroneckerCertificate c;
    c.t = t;
    c.search_horizon = horizon_;
    c.evaluations = evals_;
    c.y.resize(x_.size());
    c.residuals.resize(x_.size());
    for (size_t k = 0; k < x_.size(); ++k) {
      double a = t * x_[k] - l_[k];
      if (std::fabs(a) > 9.0e15)
        throw NumericalError("kronecker_solve: phase too large for integer recovery");
      c.y[k] = std::llround(a);
      c.residuals[k] = std::fabs(a - double(c.y[k]));
      c.max_residual = std::max(c.max_residual, c.residuals[k]);
    }
    return c;
  }

  // Earliest point of the dip: bisect the delta-crossing in (lo, hi] given
  // eval(lo) >= delta > eval(hi).
  double bisect_entry(double lo, double hi) {
    refining_ = true;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++i) {
      double mid = 0.5 * (lo + hi);
      if (eval(mid) < delta_) hi = mid;
      else lo = mid;
    }
    return hi;
  }

  // Bottom of the dip containing t0 (eval(t0) < delta): bracket the local
  // minimum by downhill expansion, then golden-section. Returns the best
  // point actually evaluated, so the result always qualifies.
  double golden_min(double t0, double probe) {
    refining_ = true;
    double best_t = t0;
    double best_f = eval(t0);
    auto e = [&](double t) {
      double v = eval(t);
      if (v < best_f) {
        best_f = v;
        best_t = t;
      }
      return v;
    };
    double h = probe;
    double a = std::max(t0 - h, 0.0), b = t0, c = t0 + h;
    double fa = e(a), fb = e(b), fc = e(c);
    for (int i = 0; i < 200 && fa < fb && a > 0.0; ++i) {
      c = b; fc = fb;
      b = a; fb = fa;
      h *= 1.618;
      a = std::max(b - h, 0.0);
      fa = e(a);
    }
    for (int i = 0; i < 200 && fc < fb; ++i) {
      a = b; fa = fb;
      b = c; fb = fc;
      h *= 1.618;
      c = b + h;
      fc = e(c);
    }
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = c - kInvPhi * (c - a);
    double x2 = a + kInvPhi * (c - a);
    double f1 = e(x1), f2 = e(x2);
    for (int i = 0; i < 160 && c - a > 1e-15 * std::max(1.0, std::fabs(c)); ++i) {
      if (f1 < f2) {
        c = x2;
        x2 = x1; f2 = f1;
        x1 = c - kInvPhi * (c - a);
        f1 = e(x1);
      } else {
        a = x1;
        x1 = x2; f1 = f2;
        x2 = a + kInvPhi * (c - a);
        f2 = e(x2);
      }
    }
    return best_t;
  }

  double horizon() const { return horizon_; }
  long long evals() const { return evals_; }

 private:
  const std::vector<double>& x_;
  const std::vector<double>& l_;
  double delta_;
  KroneckerOptions opts_;
  double horizon_ = 0.0;
  long long evals_ = 0;
  double best_f_ = std::numeric_limits<double>::infinity();
  double best_t_ = 0.0;
  bool refining_ = false;
};

}  // namespace

double default_horizon(const std::vector<double>& xhat) {
  if (xhat.empty()) throw std::invalid_argument("default_horizon: empty input");
  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < xhat.size(); ++i)
    for (size_t j = i + 1; j < xhat.size(); ++j) {
      double g = std::fabs(xhat[i] - xhat[j]);
      if (g > 0) min_gap = std::min(min_gap, g);
    }
  if (!std::isfinite(min_gap)) {
    double m = 0.0;
    for (double v : xhat) m = std::max(m, std::fabs(v));
    min_gap = m > 0 ? m : 1.0;
  }
  return std::clamp(1e3 / min_gap, 1.0, 1e15);
}

KroneckerCertificate kronecker_solve(const std::vector<double>& xhat,
                                     const std::vector<double>& lambda,
                                     double delta,
                                     const KroneckerOptions& opts) {
  if (xhat.empty()) throw std::invalid_argument("kronecker_solve: empty input");
  if (lambda.size() != xhat.size())
    throw std::invalid_argument("kronecker_solve: phase count mismatch");
  if (!(delta > 0) || !std::isfinite(delta))
    throw std::invalid_argument("kronecker_solve: delta must be positive");
  for (double v : xhat)
    if (!std::isfinite(v)) throw std::invalid_argument("kronecker_solve: non-finite frequency");
  for (double v : lambda)
    if (!std::isfinite(v)) throw std::invalid_argument("kronecker_solve: non-finite phase");

  Scanner sc(xhat, lambda, delta, opts);

  double max_x = 0.0;
  for (double v : xhat) max_x = std::max(max_x, std::fabs(v));

  double f0 = sc.eval(0.0);
  if (f0 < delta && !opts.skip_initial_plateau) return sc.certificate(0.0);
  if (max_x == 0.0) sc.throw_exhausted("all frequencies vanish");
  // A vanishing frequency pins its residual for all t.
  for (size_t k = 0; k < xhat.size(); ++k)
    if (xhat[k] == 0.0 && frac_dist(lambda[k]) >= delta)
      sc.throw_exhausted("static mode residual exceeds delta for every t");

  const double step = delta / (2.0 * max_x);
  double prev_t = 0.0, prev_f = f0;
  double scan_floor = 0.0;

  if (f0 < delta) {
    // Walk out of the dip containing t = 0 before searching.
    double t = 0.0, v = f0;
    do {
      t += step;
      sc.ensure_in_horizon(t);
      v = sc.eval(t);
    } while (v < delta);
    prev_t = t;
    prev_f = v;
    scan_floor = t;
  }

  // Pivot-mode alignment windows: outside them the pivot residual alone
  // already exceeds delta, so only windows need scanning.
  size_t pivot = 0;
  for (size_t k = 0; k < xhat.size(); ++k)
    if (std::fabs(xhat[k]) > std::fabs(xhat[pivot])) pivot = k;
  const double a = std::fabs(xhat[pivot]);
  const double lp = xhat[pivot] < 0 ? -lambda[pivot] : lambda[pivot];
  const double w = delta / a;

  auto finish = [&](double t_hit) {
    double t = opts.refine == RefineMode::Entry
                   ? sc.bisect_entry(prev_t, t_hit)
                   : sc.golden_min(t_hit, std::max(opts.fine_step, step / 16.0));
    return sc.certificate(t);
  };

  double fine_until = scan_floor;
  long long m = static_cast<long long>(std::ceil((scan_floor - w) * a - lp));
  while (true) {
    double center = (lp + double(m)) / a;
    double lo = std::max(center - w, scan_floor);
    double hi = center + w;
    for (double t = lo; t <= hi + 0.25 * step; t += step) {
      sc.ensure_in_horizon(t);
      double v = sc.eval(t);
      if (v < delta) return finish(t);
      if (v < opts.near_miss_factor * delta && opts.fine_step < step) {
        // A dip too shallow for the coarse certificate may hide within one
        // coarse step of a near miss.
        double flo = std::max({t - step, fine_until, scan_floor});
        double fhi = t + step;
        double fprev = flo;
        for (double tf = flo + opts.fine_step; tf <= fhi; tf += opts.fine_step) {
          sc.ensure_in_horizon(tf);
          double vf = sc.eval(tf);
          if (vf < delta) {
            prev_t = fprev;
            return finish(tf);
          }
          fprev = tf;
        }
        fine_until = fprev;
      }
      prev_t = t;
      prev_f = v;
    }
    ++m;
  }
}

KroneckerCertificate kronecker_solve(const std::vector<double>& xhat,
                                     const std::vector<double>& lambda,
                                     double delta, double horizon) {
  if (!(horizon > 0)) throw std::invalid_argument("kronecker_solve: horizon must be positive");
  KroneckerOptions opts;
  opts.horizon = horizon;
  opts.auto_extend = false;
  return kronecker_solve(xhat, lambda, delta, opts);
}

ComplexMatrix TorusElement::materialize(const DriftSpectrum& s) const {
  if (static_cast<int>(phases.size()) != s.modes())
    throw std::invalid_argument("TorusElement: one phase per eigenprojection required");
  ComplexMatrix v = ComplexMatrix::Zero(s.dim, s.dim);
  for (size_t k = 0; k < phases.size(); ++k)
    v += std::exp(Complex(0.0, kTwoPi * phases[k])) * s.projections[k];
  return v;
}

ComplexMatrix TorusGenerator::materialize(const DriftSpectrum& s) const {
  if (static_cast<int>(phases.size()) != s.modes())
    throw std::invalid_argument("TorusGenerator: one phase per eigenprojection required");
  ComplexMatrix x = ComplexMatrix::Zero(s.dim, s.dim);
  for (size_t k = 0; k < phases.size(); ++k) x += phases[k] * s.projections[k];
  return x;
}

double NeighborhoodSpec::max_deviation(const ComplexMatrix& w) const {
  double worst = 0.0;
  for (const auto& psi : test_vectors)
    worst = std::max(worst, ((w - reference) * psi).norm());
  return worst;
}

bool NeighborhoodSpec::contains(const ComplexMatrix& w) const {
  return max_deviation(w) < eps;
}

TorusApproxResult torus_approx(const DriftSpectrum& s,
                               const TorusElement& target, double eps,
                               int n_modes) {
  s.validate();
  if (!(eps > 0)) throw std::invalid_argument("torus_approx: eps must be positive");
  if (n_modes < 1 || n_modes > s.modes())
    throw std::invalid_argument("torus_approx: n_modes out of range");
  if (static_cast<int>(target.phases.size()) != s.modes())
    throw std::invalid_argument("torus_approx: one phase per eigenprojection required");

  TorusApproxResult r;
  r.n_modes = n_modes;
  r.delta = eps / (4.0 * std::numbers::pi * n_modes);

  std::vector<double> xh = s.xhat();
  xh.resize(n_modes);
  std::vector<double> lam(target.phases.begin(), target.phases.begin() + n_modes);

  KroneckerOptions opts;
  opts.auto_extend = true;
  // delta shrinks as eps / (4 pi n); the per-mode budget must grow to match.
  opts.max_total_steps = 100'000'000;
  r.certificate = kronecker_solve(xh, lam, r.delta, opts);
  r.t = r.certificate.t;

  ComplexMatrix u = herm_exp(s.drift_matrix(), r.t);
  ComplexMatrix v = target.materialize(s);
  r.achieved = operator_norm((u - v) * s.prefix_projector(n_modes));
  return r;
}

RecurrenceResult recurrence_time(const DriftSpectrum& s, double t_minus,
                                 const NeighborhoodSpec& nbhd,
                                 const RecurrenceOptions& opts) {
  s.validate();
  if (t_minus > 0) throw std::invalid_argument("recurrence_time: t_minus must be <= 0");
  if (!(nbhd.eps > 0)) throw std::invalid_argument("recurrence_time: eps must be positive");
  if (nbhd.test_vectors.empty())
    throw std::invalid_argument("recurrence_time: at least one test vector required");
  for (const auto& psi : nbhd.test_vectors) {
    if (psi.size() != s.dim)
      throw std::invalid_argument("recurrence_time: test vector dimension mismatch");
    if (std::fabs(psi.norm() - 1.0) > 1e-8)
      throw std::invalid_argument("recurrence_time: test vectors must be unit");
  }
  ComplexMatrix h0 = s.drift_matrix();
  if (max_abs(nbhd.reference - herm_exp(h0, t_minus)) > 1e-8)
    throw std::invalid_argument(
        "recurrence_time: reference must be exp(i t_minus H0)");

  const double eps = nbhd.eps;
  RecurrenceResult r;
  r.delta = eps / (6.0 * std::numbers::pi);

  if (opts.allow_exact_period && s.has_exact_tags()) {
    if (auto period = exact_flow_period(s)) {
      double m = std::max(1.0, std::floor(-t_minus / *period) + 1.0);
      double tp = t_minus + m * *period;
      while (tp <= 0) tp = t_minus + (m += 1.0) * *period;
      double ach = nbhd.max_deviation(herm_exp(h0, tp));
      if (ach < eps) {
        r.t_plus = tp;
        r.achieved = ach;
        r.n_modes_used = s.modes();
        r.exact_period = true;
        return r;
      }
    }
  }

  // Per-vector squared weight on each eigenprojection, for the greedy tail cut.
  size_t modes = s.projections.size();
  std::vector<std::vector<double>> weight(nbhd.test_vectors.size(),
                                          std::vector<double>(modes));
  for (size_t j = 0; j < nbhd.test_vectors.size(); ++j)
    for (size_t k = 0; k < modes; ++k)
      weight[j][k] = (s.projections[k] * nbhd.test_vectors[j]).squaredNorm();
  int n_greedy = static_cast<int>(modes);
  for (int n = 1; n <= static_cast<int>(modes); ++n) {
    double worst = 0.0;
    for (const auto& wj : weight) {
      double tail = 0.0;
      for (size_t k = n; k < modes; ++k) tail += wj[k];
      worst = std::max(worst, std::sqrt(std::max(0.0, tail)));
    }
    if (worst <= eps / 3.0) {
      n_greedy = n;
      break;
    }
  }

  std::vector<double> xh_full = s.xhat();
  for (int n : {n_greedy, static_cast<int>(modes)}) {
    std::vector<double> xh(xh_full.begin(), xh_full.begin() + n);
    std::vector<double> lam(n);
    for (int k = 0; k < n; ++k) lam[k] = t_minus * xh[k];

    KroneckerOptions kopts;
    kopts.auto_extend = true;
    kopts.skip_initial_plateau = true;
    kopts.refine = RefineMode::LocalMin;
    kopts.max_total_steps = opts.max_total_steps;
    KroneckerCertificate cert = kronecker_solve(xh, lam, r.delta, kopts);
    if (!(cert.t > 0))
      throw NumericalError("recurrence_time: search returned non-positive time");

    double ach = nbhd.max_deviation(herm_exp(h0, cert.t));
    if (ach < eps) {
      r.t_plus = cert.t;
      r.achieved = ach;
      r.n_modes_used = n;
      r.certificate = std::move(cert);
      return r;
    }
    if (n == static_cast<int>(modes)) break;
  }
  throw NumericalError("recurrence_time: re-verification failed at returned time");
}

}  // namespace larckit
