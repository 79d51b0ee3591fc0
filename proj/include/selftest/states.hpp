// states.hpp
// Constructors for the reference states: partially entangled GHZ, qudit
// Schmidt states, Dicke/W states and their bit-flipped variants, graph states.

#pragma once

#include "selftest/linalg.hpp"

#include <json.hpp>

#include <utility>
#include <vector>

namespace selftest {

// Simple undirected graph; no self-loops, no duplicate edges.
struct Graph {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // stored with first < second

  Graph() = default;
  Graph(int n, std::vector<std::pair<int, int>> e);

  bool adjacent(int i, int j) const;
  int degree(int i) const;
};

std::vector<int> neighbors(const Graph& g, int i);
// (nu_i ∪ nu_j) \ {i, j}
std::vector<int> pair_neighbors(const Graph& g, int i, int j);

// Relabels vertices so that n-2 and n-1 are connected and n-1 has minimal
// degree (the labeling the graph self-test assumes). Deterministic; callers
// apply it explicitly, the constructors never relabel.
Graph relabel_for_selftest(const Graph& g);

Graph path_graph(int n);
Graph ring_graph(int n);
// Star with center 0; relabel_for_selftest before running the self-test.
Graph star_graph(int n);

// Graph file format: {"n": int, "edges": [[a,b], ...]}.
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);

// Schmidt coefficients c_0..c_{d-1}: all in (0,1), sum of squares 1.
struct SchmidtCoefficients {
  std::vector<double> c;

  explicit SchmidtCoefficients(std::vector<double> coeffs);
  int d() const { return static_cast<int>(c.size()); }
};

// cos(theta)|0...0> + sin(theta)|1...1>, theta in (0, pi/4].
StateVector ghz_state(int n, double theta);

// sum_j c_j |j>^{⊗n}
StateVector schmidt_state(const SchmidtCoefficients& c, int n);

// Uniform superposition of all weight-k computational kets.
StateVector dicke_state(int n, int k);

StateVector w_state(int n);  // dicke_state(n, 1)

// sigma_x on party n-1 applied to the Dicke / W state.
StateVector x_dicke_state(int n, int k);
StateVector x_w_state(int n);

// Amplitudes (-1)^{mu(i)} / sqrt(2^n), mu(i) = number of edges whose both
// endpoints carry bit 1; equals the CZ-circuit construction on |+>^{⊗n}.
StateVector graph_state(const Graph& g);

namespace detail {
// GHZ state without the theta-range guard; the block-structure reference
// tables need theta in (0, pi/2).
StateVector ghz_state_unchecked(int n, double theta);
}  // namespace detail

}  // namespace selftest
