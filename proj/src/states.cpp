#include "selftest/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace selftest {

Graph::Graph(int n, std::vector<std::pair<int, int>> e) : n_vertices(n), edges(std::move(e)) {
  if (n <= 0) throw std::invalid_argument("graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("graph has a self-loop");
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= n) throw std::invalid_argument("edge endpoint out of range");
    if (!seen.insert({a, b}).second) throw std::invalid_argument("duplicate edge");
  }
  std::sort(edges.begin(), edges.end());
}

bool Graph::adjacent(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

int Graph::degree(int i) const {
  int d = 0;
  for (const auto& [a, b] : edges) d += (a == i || b == i);
  return d;
}

std::vector<int> neighbors(const Graph& g, int i) {
  if (i < 0 || i >= g.n_vertices) throw std::invalid_argument("vertex out of range");
  std::vector<int> out;
  for (const auto& [a, b] : g.edges) {
    if (a == i) out.push_back(b);
    if (b == i) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> pair_neighbors(const Graph& g, int i, int j) {
  if (j < 0 || j >= g.n_vertices) throw std::invalid_argument("vertex out of range");
  std::set<int> s;
  for (int v : neighbors(g, i)) s.insert(v);
  for (int v : neighbors(g, j)) s.insert(v);
  s.erase(i);
  s.erase(j);
  return {s.begin(), s.end()};
}

Graph relabel_for_selftest(const Graph& g) {
  if (g.edges.empty()) throw std::invalid_argument("relabel_for_selftest: graph has no edges");
  const int n = g.n_vertices;
  int last = -1, best_deg = n + 1;
  for (int v = 0; v < n; ++v) {
    const int d = g.degree(v);
    if (d >= 1 && d < best_deg) {
      best_deg = d;
      last = v;
    }
  }
  const int second = neighbors(g, last).front();
  std::vector<int> perm(n, -1);  // old label -> new label
  perm[last] = n - 1;
  perm[second] = n - 2;
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (perm[v] < 0) perm[v] = next++;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges.size());
  for (const auto& [a, b] : g.edges) edges.emplace_back(perm[a], perm[b]);
  return Graph(n, std::move(edges));
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

Graph ring_graph(int n) {
  if (n < 3) throw std::invalid_argument("ring needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  e.emplace_back(0, n - 1);
  return Graph(n, std::move(e));
}

Graph star_graph(int n) {
  if (n < 2) throw std::invalid_argument("star needs at least 2 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  return Graph(n, std::move(e));
}

Graph graph_from_json(const nlohmann::json& j) {
  if (!j.contains("n")) throw std::invalid_argument("graph json: missing field \"n\"");
  if (!j.contains("edges")) throw std::invalid_argument("graph json: missing field \"edges\"");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("graph json: edge must be a pair");
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  return Graph(j.at("n").get<int>(), std::move(edges));
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.n_vertices;
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : g.edges) j["edges"].push_back({a, b});
  return j;
}

SchmidtCoefficients::SchmidtCoefficients(std::vector<double> coeffs) : c(std::move(coeffs)) {
  if (c.size() < 2) throw std::invalid_argument("Schmidt coefficients need d >= 2");
  double s = 0.0;
  for (double x : c) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("Schmidt coefficients must lie in (0,1)");
    s += x * x;
  }
  if (std::abs(s - 1.0) > kNormTol)
    throw std::invalid_argument("Schmidt coefficients must have unit square sum");
}

namespace detail {

StateVector ghz_state_unchecked(int n, double theta) {
  if (n < 2) throw std::invalid_argument("ghz_state needs at least 2 parties");
  const long dim = 1L << n;
  Vector amps = Vector::Zero(dim);
  amps[0] = std::cos(theta);
  amps[dim - 1] = std::sin(theta);
  return StateVector(Dims(n, 2), std::move(amps));
}

}  // namespace detail

StateVector ghz_state(int n, double theta) {
  constexpr double pi = 3.14159265358979323846;
  if (!(theta > 0.0 && theta <= pi / 4.0 + 1e-15))
    throw std::invalid_argument("ghz_state: theta must lie in (0, pi/4]");
  return detail::ghz_state_unchecked(n, theta);
}

StateVector schmidt_state(const SchmidtCoefficients& c, int n) {
  if (n < 2) throw std::invalid_argument("schmidt_state needs at least 2 parties");
  const int d = c.d();
  long dim = 1;
  for (int p = 0; p < n; ++p) dim *= d;
  // |j>^{⊗n} sits at index j * (d^{n-1} + ... + d + 1).
  const long diag_stride = (dim - 1) / (d - 1);
  Vector amps = Vector::Zero(dim);
  for (int j = 0; j < d; ++j) amps[j * diag_stride] = c.c[j];
  return StateVector(Dims(n, d), std::move(amps));
}

StateVector dicke_state(int n, int k) {
  if (n < 1) throw std::invalid_argument("dicke_state needs at least 1 party");
  if (k < 0 || k > n) throw std::invalid_argument("dicke_state: excitation count out of range");
  const long dim = 1L << n;
  Vector amps = Vector::Zero(dim);
  long count = 0;
  for (long i = 0; i < dim; ++i)
    if (__builtin_popcountl(i) == k) ++count;
  const double a = 1.0 / std::sqrt(static_cast<double>(count));
  for (long i = 0; i < dim; ++i)
    if (__builtin_popcountl(i) == k) amps[i] = a;
  return StateVector(Dims(n, 2), std::move(amps));
}

StateVector w_state(int n) { return dicke_state(n, 1); }

StateVector x_dicke_state(int n, int k) {
  StateVector d = dicke_state(n, k);
  return StateVector(d.dims, apply_local(pauli_x(), n - 1, d.dims, d.amps));
}

StateVector x_w_state(int n) { return x_dicke_state(n, 1); }

StateVector graph_state(const Graph& g) {
  const int n = g.n_vertices;
  const long dim = 1L << n;
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  Vector amps(dim);
  for (long i = 0; i < dim; ++i) {
    int mu = 0;
    for (const auto& [u, v] : g.edges) {
      const int bu = (i >> (n - 1 - u)) & 1;
      const int bv = (i >> (n - 1 - v)) & 1;
      mu += bu & bv;
    }
    amps[i] = (mu % 2 == 0) ? a : -a;
  }
  return StateVector(Dims(n, 2), std::move(amps));
}

}  // namespace selftest
