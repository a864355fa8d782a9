#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/control_system.hpp"
#include "core/types.hpp"

namespace larckit {

// Indices are 0-based in memory; exports and reports print them 1-based.
struct CouplingEdge {
  int v = 0, w = 0;  // v < w
  int control = 0;   // witnessing control index
  Complex alpha;     // largest cross matrix element for that control
};

struct CouplingGraph {
  int n_vertices = 0;
  std::vector<CouplingEdge> edges;
  double edge_tol = 0.0;
  // Vertices are eigenspace blocks instead of eigenvectors when the drift is
  // degenerate (the strict theorem setting needs multiplicities all 1).
  bool degenerate = false;

  std::vector<std::vector<int>> adjacency() const;
  // One "v w l re(alpha) im(alpha)" line per edge, 1-based.
  std::string edge_list_text() const;
};

// 1e-12 times the largest control matrix element.
double default_edge_tol(const ControlSystem& sys);

// Edge (v,w) iff some control has a cross matrix element between the v-th and
// w-th drift eigenspaces exceeding edge_tol in magnitude. edge_tol < 0 picks
// the default.
CouplingGraph build_graph(const ControlSystem& sys, double edge_tol = -1.0);

struct ConnectivityReport {
  bool connected = false;
  // Ascending within each component; components ordered by least vertex.
  std::vector<std::vector<int>> components;
};

ConnectivityReport is_connected(const CouplingGraph& g);

// Breadth-first shortest path from v to w (inclusive endpoints); nullopt when
// disconnected. path = {v} when v == w.
std::optional<std::vector<int>> shortest_path(const CouplingGraph& g, int v,
                                              int w);

}  // namespace larckit
