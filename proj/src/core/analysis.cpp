#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "core/block_structure.hpp"
#include "core/coupling_graph.hpp"
#include "core/kronecker.hpp"
#include "core/lie_closure.hpp"
#include "core/matrix_ops.hpp"
#include "core/spectrum.hpp"

namespace larckit {

using nlohmann::ordered_json;

const char* to_string(AnalysisVerdict v) {
  switch (v) {
    case AnalysisVerdict::ControllableByThm2:
      return "CONTROLLABLE-BY-THM2";
    case AnalysisVerdict::HypothesesUnmet:
      return "HYPOTHESES-UNMET";
  }
  return "?";
}

namespace {

ordered_json report_header(const char* command, const SystemConfig& cfg) {
  ordered_json j = ordered_json::object();
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  if (!cfg.name.empty()) j["name"] = cfg.name;
  j["seed"] = cfg.options.seed;
  j["dim"] = cfg.system.dim();
  j["n_controls"] = cfg.system.n_controls();
  return j;
}

double resolved_gap_tol(const SystemConfig& cfg) {
  if (cfg.options.gap_tol >= 0) return cfg.options.gap_tol;
  double m = 0.0;
  for (double x : cfg.system.spectrum.eigenvalues) m = std::max(m, std::fabs(x));
  return 1e-9 * m;  // matches the constructors' default
}

ordered_json independence_json(const IndependenceVerdict& v) {
  ordered_json j = ordered_json::object();
  j["status"] = to_string(v.status);
  j["exact"] = v.exact;
  j["coeff_bound"] = v.coeff_bound;
  j["tolerance"] = v.tolerance;
  j["method"] = v.method;
  if (!v.witness.empty()) {
    j["witness"] = v.witness;
    j["witness_residual"] = v.witness_residual;
  }
  return j;
}

ordered_json spectrum_section(const DriftSpectrum& s, double gap_tol,
                              const IndependenceVerdict& indep) {
  ordered_json j = ordered_json::object();
  j["modes"] = s.modes();
  j["eigenvalues"] = s.eigenvalues;
  j["multiplicities"] = s.multiplicities;
  j["gap_tol"] = gap_tol;
  j["non_degenerate"] = s.non_degenerate();
  j["has_exact_tags"] = s.has_exact_tags();
  j["independence"] = independence_json(indep);
  return j;
}

ordered_json graph_section(const CouplingGraph& g,
                           const ConnectivityReport& conn) {
  ordered_json j = ordered_json::object();
  j["vertices"] = g.n_vertices;
  j["degenerate"] = g.degenerate;
  j["edge_tol"] = g.edge_tol;
  j["n_edges"] = static_cast<int>(g.edges.size());
  ordered_json edges = ordered_json::array();
  for (const CouplingEdge& e : g.edges) {
    ordered_json ej = ordered_json::object();
    ej["v"] = e.v + 1;
    ej["w"] = e.w + 1;
    ej["control"] = e.control + 1;
    ej["alpha"] = complex_to_json(e.alpha);
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  j["connected"] = conn.connected;
  ordered_json comps = ordered_json::array();
  for (const auto& comp : conn.components) {
    ordered_json c = ordered_json::array();
    for (int v : comp) c.push_back(v + 1);
    comps.push_back(std::move(c));
  }
  j["components"] = std::move(comps);
  return j;
}

ordered_json closure_section(const SystemConfig& cfg,
                             const std::vector<int>& truncations) {
  const AnalysisOptions& o = cfg.options;
  ordered_json j = ordered_json::object();
  j["rank_tol"] = o.rank_tol;
  j["max_passes"] = o.max_passes;
  j["truncations"] = truncations;
  if (cfg.system.controls.empty()) {
    j["skipped"] = "no controls";
    return j;
  }
  LarcReport larc = larc_check(cfg.system, truncations, o.rank_tol,
                               static_cast<int>(o.max_passes));
  ordered_json hist = ordered_json::array();
  for (const LarcEntry& e : larc.history) {
    ordered_json h = ordered_json::object();
    h["truncation"] = e.truncation;
    h["closure_dim"] = e.closure_dim;
    h["ambient_dim"] = e.ambient_dim;
    h["verdict"] = to_string(e.verdict);
    h["passes"] = e.passes;
    hist.push_back(std::move(h));
  }
  j["history"] = std::move(hist);
  j["closure_dim"] = larc.closure_dim;
  j["ambient_dim"] = larc.ambient_dim;
  j["verdict"] = to_string(larc.verdict);
  j["iterations"] = larc.iterations;
  return j;
}

ordered_json certificate_json(const KroneckerCertificate& c) {
  ordered_json j = ordered_json::object();
  j["t"] = c.t;
  j["y"] = c.y;
  j["residuals"] = c.residuals;
  j["max_residual"] = c.max_residual;
  j["search_horizon"] = c.search_horizon;
  j["evaluations"] = c.evaluations;
  return j;
}

ordered_json blocks_body(const SystemConfig& cfg, std::vector<int> idx) {
  const AnalysisOptions& o = cfg.options;
  if (idx.empty()) {
    idx.push_back(0);
    for (int l = 1; l <= cfg.system.n_controls(); ++l) idx.push_back(l);
  }
  BlockClosureReport r =
      block_lie_closure(cfg.system, idx, o.rank_tol,
                        static_cast<int>(o.max_passes), o.seed, o.block_tol);
  ordered_json j = ordered_json::object();
  j["generators"] = idx;  // 0 = drift, j >= 1 = control j
  j["seed"] = o.seed;
  j["commutant_tol"] = o.block_tol;
  j["rank_tol"] = o.rank_tol;
  j["commutant_dim"] = r.decomposition.commutant_dim;
  j["center_dim"] = r.decomposition.center_dim;
  j["n_blocks"] = static_cast<int>(r.decomposition.blocks.size());
  ordered_json dims = ordered_json::array();
  for (const Block& b : r.decomposition.blocks) dims.push_back(b.block_dim);
  j["block_dims"] = std::move(dims);
  ordered_json blocks = ordered_json::array();
  for (const BlockClosureEntry& e : r.per_block) {
    ordered_json b = ordered_json::object();
    b["index"] = e.block_index + 1;
    b["subspace_dim"] = e.subspace_dim;
    b["block_dim"] = e.block_dim;
    b["multiplicity"] = e.multiplicity;
    b["closure_dim"] = e.closure_dim;
    b["su_dim"] = e.su_dim;
    b["u_dim"] = e.u_dim;
    blocks.push_back(std::move(b));
  }
  j["blocks"] = std::move(blocks);
  j["full_closure_dim"] = r.full_closure_dim;
  j["full_ambient_dim"] = r.full_ambient_dim;
  j["has_remaining_controls"] = r.has_remaining_controls;
  return j;
}

std::vector<int> default_truncations(const SystemConfig& cfg) {
  if (!cfg.options.truncations.empty()) return cfg.options.truncations;
  return {cfg.system.dim()};
}

}  // namespace

AnalysisOutcome analyze(const SystemConfig& cfg) {
  const ControlSystem& sys = cfg.system;
  const DriftSpectrum& s = sys.spectrum;
  const AnalysisOptions& o = cfg.options;

  ordered_json rep = report_header("analyze", cfg);
  rep["control_bound"] = sys.control_bound;

  IndependenceVerdict indep =
      check_rational_independence(s, o.independence_bound, o.independence_tau);
  rep["spectrum"] = spectrum_section(s, resolved_gap_tol(cfg), indep);

  CouplingGraph g;
  if (sys.controls.empty()) {
    g.n_vertices = s.modes();
    g.edge_tol = 0.0;
    g.degenerate = !s.non_degenerate();
  } else {
    g = build_graph(sys, o.edge_tol);
  }
  ConnectivityReport conn = is_connected(g);
  rep["graph"] = graph_section(g, conn);

  rep["closure"] = closure_section(cfg, default_truncations(cfg));

  const bool non_degenerate = s.non_degenerate();
  const bool independent = indep.status == IndependenceStatus::Independent;
  const bool all_met = non_degenerate && independent && conn.connected;
  ordered_json hyp = ordered_json::object();
  hyp["non_degenerate_spectrum"] = non_degenerate;
  hyp["rationally_independent"] = independent;
  hyp["independence_certified_exactly"] = indep.exact;
  hyp["connected_coupling_graph"] = conn.connected;
  hyp["all_met"] = all_met;
  if (g.degenerate)
    hyp["note"] =
        "degenerate drift: the coupling graph is a necessary-structure check "
        "only";
  rep["hypotheses"] = std::move(hyp);

  rep["verdict"] = all_met ? "CONTROLLABLE-BY-THM2" : "HYPOTHESES-UNMET";
  rep["verdict_detail"] =
      all_met ? "hypotheses verified: approximate strong operator "
                "controllability certified; the numerical closure history is "
                "reported independently"
              : "hypotheses unmet: controllability not certified by this "
                "criterion; the numerical closure history is still reported";

  if (o.certificates && all_met) {
    std::vector<BracketCertificate> certs = thm2_certificate(
        sys, o.edge_tol, o.independence_bound, o.independence_tau);
    ordered_json cj = ordered_json::array();
    for (const BracketCertificate& c : certs) {
      ordered_json e = ordered_json::object();
      e["v"] = c.v + 1;
      e["w"] = c.w + 1;
      e["word"] = c.word.to_string();
      e["error"] = c.error;
      cj.push_back(std::move(e));
    }
    rep["certificates"] = std::move(cj);
  }

  if (sys.controls.empty()) {
    rep["blocks"] = ordered_json{{"skipped", "no controls"}};
  } else if (sys.dim() > kMaxBlockDim) {
    rep["blocks"] = ordered_json{
        {"skipped", "dimension exceeds the block-decomposition limit"}};
  } else {
    rep["blocks"] = blocks_body(cfg, {});
  }

  AnalysisOutcome out;
  out.verdict = all_met ? AnalysisVerdict::ControllableByThm2
                        : AnalysisVerdict::HypothesesUnmet;
  out.report = std::move(rep);
  return out;
}

nlohmann::ordered_json closure_report(const SystemConfig& cfg) {
  ordered_json rep = report_header("closure", cfg);
  rep["closure"] = closure_section(cfg, default_truncations(cfg));
  return rep;
}

std::string closure_csv(const SystemConfig& cfg) {
  const AnalysisOptions& o = cfg.options;
  LarcReport larc = larc_check(cfg.system, default_truncations(cfg), o.rank_tol,
                               static_cast<int>(o.max_passes));
  std::string out = "truncation,closure_dim,ambient_dim,verdict,passes\n";
  for (const LarcEntry& e : larc.history) {
    out += std::to_string(e.truncation) + "," + std::to_string(e.closure_dim) +
           "," + std::to_string(e.ambient_dim) + "," + to_string(e.verdict) +
           "," + std::to_string(e.passes) + "\n";
  }
  return out;
}

nlohmann::ordered_json kronecker_report(const SystemConfig& cfg,
                                        const std::vector<double>& target,
                                        double delta, double horizon,
                                        int n_modes) {
  const DriftSpectrum& s = cfg.system.spectrum;
  if (n_modes <= 0) n_modes = s.modes();
  if (n_modes > s.modes())
    throw ParseError("kronecker: requested more modes than the spectrum has");
  if (static_cast<int>(target.size()) != n_modes)
    throw ParseError("kronecker: need exactly one target phase per mode (" +
                     std::to_string(n_modes) + ")");
  if (!(delta > 0)) throw ParseError("kronecker: delta must be positive");

  std::vector<double> xh = s.xhat();
  xh.resize(static_cast<size_t>(n_modes));
  KroneckerOptions opts;
  opts.horizon = horizon;
  opts.auto_extend = horizon <= 0;
  opts.max_total_steps = 100'000'000;
  KroneckerCertificate cert = kronecker_solve(xh, target, delta, opts);

  // Independent re-verification of the returned (t, y).
  std::vector<double> residuals(static_cast<size_t>(n_modes));
  double max_residual = 0.0;
  for (int k = 0; k < n_modes; ++k) {
    residuals[static_cast<size_t>(k)] =
        std::fabs(cert.t * xh[static_cast<size_t>(k)] -
                  static_cast<double>(cert.y[static_cast<size_t>(k)]) -
                  target[static_cast<size_t>(k)]);
    max_residual = std::max(max_residual, residuals[static_cast<size_t>(k)]);
  }
  if (!(max_residual < delta))
    throw NumericalError("kronecker: certificate failed re-verification");

  ordered_json rep = report_header("kronecker", cfg);
  rep["modes_used"] = n_modes;
  rep["xhat"] = xh;
  rep["target"] = target;
  rep["delta"] = delta;
  rep["certificate"] = certificate_json(cert);
  ordered_json rev = ordered_json::object();
  rev["residuals"] = residuals;
  rev["max_residual"] = max_residual;
  rev["ok"] = true;
  rep["reverified"] = std::move(rev);
  return rep;
}

nlohmann::ordered_json recurrence_report(const SystemConfig& cfg,
                                         double t_minus, double eps,
                                         int n_vectors) {
  const DriftSpectrum& s = cfg.system.spectrum;
  if (t_minus > 0) throw ParseError("recurrence: t_minus must be <= 0");
  if (!(eps > 0)) throw ParseError("recurrence: eps must be positive");
  if (n_vectors < 1) throw ParseError("recurrence: need at least one vector");

  ComplexMatrix h0 = s.drift_matrix();
  NeighborhoodSpec nbhd;
  nbhd.reference = herm_exp(h0, t_minus);
  nbhd.eps = eps;
  std::mt19937_64 rng(cfg.options.seed);
  std::normal_distribution<double> gauss;
  for (int j = 0; j < n_vectors; ++j) {
    ComplexVector psi(s.dim);
    for (int i = 0; i < s.dim; ++i) psi[i] = Complex(gauss(rng), gauss(rng));
    nbhd.test_vectors.push_back(psi / psi.norm());
  }

  RecurrenceResult r = recurrence_time(s, t_minus, nbhd);

  // Direct re-evaluation on the full space.
  double deviation = nbhd.max_deviation(herm_exp(h0, r.t_plus));
  if (!(deviation < eps))
    throw NumericalError("recurrence: result failed re-verification");

  ordered_json rep = report_header("recurrence", cfg);
  rep["t_minus"] = t_minus;
  rep["eps"] = eps;
  rep["n_vectors"] = n_vectors;
  rep["t_plus"] = r.t_plus;
  rep["achieved"] = r.achieved;
  rep["reverified_deviation"] = deviation;
  rep["delta"] = r.delta;
  rep["n_modes_used"] = r.n_modes_used;
  rep["exact_period"] = r.exact_period;
  if (r.certificate) rep["certificate"] = certificate_json(*r.certificate);
  return rep;
}

nlohmann::ordered_json blocks_report(const SystemConfig& cfg,
                                     std::vector<int> generator_indices) {
  ordered_json rep = report_header("blocks", cfg);
  for (int idx : generator_indices)
    if (idx < 0 || idx > cfg.system.n_controls())
      throw ParseError("blocks: generator index out of range (0 = drift, j >= "
                       "1 = control j)");
  rep["blocks"] = blocks_body(cfg, std::move(generator_indices));
  return rep;
}

nlohmann::ordered_json simulate_report(const SystemConfig& cfg,
                                       const ScheduleInput& input) {
  const ControlSystem& sys = cfg.system;
  for (size_t i = 0; i < input.initial.size(); ++i)
    if (input.initial[i].size() != sys.dim())
      throw ParseError("simulate: initial vector " + std::to_string(i + 1) +
                       " has size " + std::to_string(input.initial[i].size()) +
                       ", expected " + std::to_string(sys.dim()));

  ComplexMatrix u = propagate(sys, input.schedule);
  double total = 0.0;
  for (const Segment& seg : input.schedule) total += seg.duration;

  ordered_json rep = report_header("simulate", cfg);
  rep["n_segments"] = static_cast<int>(input.schedule.size());
  rep["total_duration"] = total;
  rep["unitary_defect"] =
      max_abs(ComplexMatrix(u.adjoint() * u -
                            ComplexMatrix::Identity(sys.dim(), sys.dim())));
  rep["propagator"] = matrix_to_json(u);
  if (!input.initial.empty()) {
    ordered_json states = ordered_json::array();
    for (size_t i = 0; i < input.initial.size(); ++i) {
      ordered_json e = ordered_json::object();
      e["index"] = static_cast<int>(i) + 1;
      e["input"] = vector_to_json(input.initial[i]);
      e["output"] = vector_to_json(u * input.initial[i]);
      states.push_back(std::move(e));
    }
    rep["states"] = std::move(states);
  }
  return rep;
}

std::string product_formula_csv(const SystemConfig& cfg,
                                const ScheduleInput& input) {
  const ControlSystem& sys = cfg.system;
  double tau = 1.0;
  std::vector<double> y(static_cast<size_t>(sys.n_controls()),
                        std::min(1.0, sys.control_bound));
  if (!input.schedule.empty()) {
    validate_schedule(sys, input.schedule);
    tau = input.schedule.front().duration;
    y = input.schedule.front().amplitudes;
  }
  ComplexMatrix h0 = sys.spectrum.drift_matrix();
  ComplexMatrix a = tau * h0;
  ComplexMatrix b = tau * (hamiltonian(sys, y) - h0);
  ComplexMatrix trotter_target = herm_exp(a + b);
  ComplexMatrix a_ah = Complex(0, 1) * a;
  ComplexMatrix b_ah = Complex(0, 1) * b;
  ComplexMatrix comm = commutator(a_ah, b_ah);
  ComplexMatrix comm_target = herm_exp(Complex(0, -1) * comm);

  std::string out = "n,trotter_error,commutator_error\n";
  for (int k = 0; k <= 10; ++k) {
    int n = 1 << k;
    double te = operator_norm(trotter_product(a, b, n) - trotter_target);
    double ce = operator_norm(commutator_product(a_ah, b_ah, n) - comm_target);
    out += std::to_string(n) + "," + format_double(te) + "," +
           format_double(ce) + "\n";
  }
  return out;
}

}  // namespace larckit
