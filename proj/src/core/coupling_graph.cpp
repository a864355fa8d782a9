#include "core/coupling_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "core/matrix_ops.hpp"

namespace larckit {

std::vector<std::vector<int>> CouplingGraph::adjacency() const {
  std::vector<std::vector<int>> adj(n_vertices);
  for (const auto& e : edges) {
    adj[e.v].push_back(e.w);
    adj[e.w].push_back(e.v);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::string CouplingGraph::edge_list_text() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& e : edges)
    os << e.v + 1 << ' ' << e.w + 1 << ' ' << e.control + 1 << ' '
       << e.alpha.real() << ' ' << e.alpha.imag() << '\n';
  return os.str();
}

double default_edge_tol(const ControlSystem& sys) {
  double m = 0.0;
  for (const auto& h : sys.controls) m = std::max(m, max_abs(h));
  return 1e-12 * std::max(1.0, m);
}

CouplingGraph build_graph(const ControlSystem& sys, double edge_tol) {
  sys.validate();
  if (edge_tol < 0) edge_tol = default_edge_tol(sys);

  const DriftSpectrum& s = sys.spectrum;
  CouplingGraph g;
  g.n_vertices = s.modes();
  g.edge_tol = edge_tol;
  g.degenerate = !s.non_degenerate();

  ComplexMatrix basis = eigenbasis_matrix(s);
  std::vector<int> offset(s.modes() + 1, 0);
  for (int k = 0; k < s.modes(); ++k)
    offset[k + 1] = offset[k] + s.multiplicities[k];

  for (int v = 0; v < g.n_vertices; ++v)
    for (int w = v + 1; w < g.n_vertices; ++w) {
      int best_l = -1;
      Complex best_alpha = 0.0;
      for (int l = 0; l < sys.n_controls(); ++l) {
        ComplexMatrix cross =
            basis.middleCols(offset[v], s.multiplicities[v]).adjoint() *
            sys.controls[l] *
            basis.middleCols(offset[w], s.multiplicities[w]);
        for (int i = 0; i < cross.rows(); ++i)
          for (int j = 0; j < cross.cols(); ++j)
            if (std::abs(cross(i, j)) > std::abs(best_alpha)) {
              best_alpha = cross(i, j);
              best_l = l;
            }
      }
      if (best_l >= 0 && std::abs(best_alpha) > edge_tol)
        g.edges.push_back({v, w, best_l, best_alpha});
    }
  return g;
}

ConnectivityReport is_connected(const CouplingGraph& g) {
  std::vector<int> parent(g.n_vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& e : g.edges) parent[find(e.v)] = find(e.w);

  std::vector<std::vector<int>> by_root(g.n_vertices);
  for (int v = 0; v < g.n_vertices; ++v) by_root[find(v)].push_back(v);

  ConnectivityReport r;
  for (auto& c : by_root)
    if (!c.empty()) r.components.push_back(std::move(c));
  std::sort(r.components.begin(), r.components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  r.connected = r.components.size() == 1 && g.n_vertices > 0;
  return r;
}

std::optional<std::vector<int>> shortest_path(const CouplingGraph& g, int v,
                                              int w) {
  if (v < 0 || w < 0 || v >= g.n_vertices || w >= g.n_vertices)
    throw std::invalid_argument("shortest_path: vertex out of range");
  if (v == w) return std::vector<int>{v};
  auto adj = g.adjacency();
  std::vector<int> back(g.n_vertices, -1);
  std::deque<int> queue{v};
  back[v] = v;
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (int next : adj[cur]) {
      if (back[next] >= 0) continue;
      back[next] = cur;
      if (next == w) {
        std::vector<int> path{w};
        for (int at = w; at != v; at = back[at]) path.push_back(back[at]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

}  // namespace larckit
