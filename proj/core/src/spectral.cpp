#include "rangebandit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rangebandit/errors.hpp"

namespace rangebandit {

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

void sym_eigen(const Eigen::MatrixXd& m, std::vector<double>& values,
               Eigen::MatrixXd& vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolve did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  values.assign(ev.data(), ev.data() + ev.size());
  vectors = solver.eigenvectors();
}

}  // namespace

GraphSpec::GraphSpec(std::size_t num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  if (num_nodes_ == 0) throw InvalidInput("GraphSpec: no nodes");
  if (num_nodes_ > kMaxGraphNodes) {
    throw InvalidInput("GraphSpec: more than " +
                       std::to_string(kMaxGraphNodes) + " nodes");
  }
  for (Edge& e : edges_) {
    if (e.first >= num_nodes_ || e.second >= num_nodes_) {
      throw InvalidInput("GraphSpec: edge endpoint out of range");
    }
    if (e.first == e.second) throw InvalidInput("GraphSpec: self-loop");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw InvalidInput("GraphSpec: duplicate edge");
  }
}

GraphSpec GraphSpec::complete(std::size_t num_nodes) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < num_nodes; ++i) {
    for (std::size_t j = i + 1; j < num_nodes; ++j) edges.emplace_back(i, j);
  }
  return GraphSpec(num_nodes, std::move(edges));
}

GraphSpec GraphSpec::path(std::size_t num_nodes) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < num_nodes; ++i) edges.emplace_back(i, i + 1);
  return GraphSpec(num_nodes, std::move(edges));
}

GraphSpec GraphSpec::empty(std::size_t num_nodes) {
  return GraphSpec(num_nodes, {});
}

std::vector<std::size_t> GraphSpec::degrees() const {
  std::vector<std::size_t> deg(num_nodes_, 0);
  for (const Edge& e : edges_) {
    ++deg[e.first];
    ++deg[e.second];
  }
  return deg;
}

std::vector<std::size_t> connected_components(const GraphSpec& g) {
  UnionFind uf(g.num_nodes());
  for (const Edge& e : g.edges()) uf.unite(e.first, e.second);
  std::vector<std::size_t> label(g.num_nodes());
  std::vector<std::size_t> root_label(g.num_nodes(), g.num_nodes());
  std::size_t next = 0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const std::size_t r = uf.find(i);
    if (root_label[r] == g.num_nodes()) root_label[r] = next++;
    label[i] = root_label[r];
  }
  return label;
}

GraphSpec induced_subgraph(const GraphSpec& g,
                           std::span<const std::size_t> nodes) {
  std::vector<std::size_t> local(g.num_nodes(), g.num_nodes());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= g.num_nodes()) {
      throw InvalidInput("induced_subgraph: node out of range");
    }
    if (local[nodes[i]] != g.num_nodes()) {
      throw InvalidInput("induced_subgraph: repeated node");
    }
    local[nodes[i]] = i;
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    const std::size_t a = local[e.first];
    const std::size_t b = local[e.second];
    if (a != g.num_nodes() && b != g.num_nodes()) edges.emplace_back(a, b);
  }
  return GraphSpec(nodes.size(), std::move(edges));
}

LaplacianView::LaplacianView(GraphSpec g) : graph_(std::move(g)) {
  const auto n = static_cast<Eigen::Index>(graph_.num_nodes());
  matrix_ = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : graph_.edges()) {
    const auto a = static_cast<Eigen::Index>(e.first);
    const auto b = static_cast<Eigen::Index>(e.second);
    matrix_(a, a) += 1.0;
    matrix_(b, b) += 1.0;
    matrix_(a, b) = -1.0;
    matrix_(b, a) = -1.0;
  }
  const double norm_inf = matrix_.cwiseAbs().rowwise().sum().maxCoeff();
  zero_threshold_ = 1e-9 * std::max(norm_inf, 1.0);

  sym_eigen(matrix_, eigenvalues_, eigenvectors_);
  for (double& v : eigenvalues_) {
    if (std::abs(v) <= zero_threshold_) v = 0.0;
  }

  components_ = connected_components(graph_);
  num_components_ =
      *std::max_element(components_.begin(), components_.end()) + 1;
}

LaplacianView laplacian(const GraphSpec& g) { return LaplacianView(g); }

double algebraic_connectivity(const LaplacianView& lap) {
  if (lap.size() < 2) {
    throw InvalidInput("algebraic_connectivity: needs at least two nodes");
  }
  if (!lap.connected()) return 0.0;
  return lap.eigenvalues()[1];
}

GroundedMinor grounded_minor(const LaplacianView& lap, std::size_t node) {
  const std::size_t n = lap.size();
  if (n < 2) throw InvalidInput("grounded_minor: needs at least two nodes");
  if (node >= n) throw InvalidInput("grounded_minor: node out of range");
  if (!lap.connected()) {
    throw RankDeficient("grounded_minor: graph is disconnected");
  }
  const auto m = static_cast<Eigen::Index>(n - 1);
  const auto skip = static_cast<Eigen::Index>(node);
  GroundedMinor out;
  out.matrix.resize(m, m);
  for (Eigen::Index r = 0, rr = 0; r < m + 1; ++r) {
    if (r == skip) continue;
    for (Eigen::Index c = 0, cc = 0; c < m + 1; ++c) {
      if (c == skip) continue;
      out.matrix(rr, cc) = lap.matrix()(r, c);
      ++cc;
    }
    ++rr;
  }
  sym_eigen(out.matrix, out.eigenvalues, out.eigenvectors);
  if (!(out.eigenvalues.front() > 1e-9)) {
    throw RankDeficient("grounded_minor: minor is not full rank");
  }
  return out;
}

ExtremalRange extremal_range(const LaplacianView& lap, double budget,
                             std::size_t anchor, double /*anchor_value*/) {
  if (!(budget >= 0.0)) throw InvalidInput("extremal_range: negative budget");
  if (!lap.connected()) {
    throw RankDeficient("extremal_range: graph is disconnected");
  }
  const GroundedMinor minor = grounded_minor(lap, anchor);
  return ExtremalRange{budget / std::sqrt(minor.smallest()),
                       budget / std::sqrt(algebraic_connectivity(lap))};
}

double fiedler_program_value(const LaplacianView& lap, double budget,
                             std::size_t anchor) {
  const double r = extremal_range(lap, budget, anchor, 1.0).exact;
  return 1.0 + r * r;
}

double anchored_norm_program(const LaplacianView& lap, double budget,
                             std::size_t anchor) {
  if (!(budget >= 0.0)) {
    throw InvalidInput("anchored_norm_program: negative budget");
  }
  const GroundedMinor minor = grounded_minor(lap, anchor);
  const std::size_t m = minor.eigenvalues.size();

  // In the minor's eigenbasis with x = C * Q diag(mu)^{-1/2} w, ||w|| <= 1,
  // the objective is 1 + sum_j (b_j + c_j w_j)^2, b = Q' 1, c_j = C/sqrt(mu_j).
  const Eigen::VectorXd b =
      minor.eigenvectors.transpose() * Eigen::VectorXd::Ones(
                                           static_cast<Eigen::Index>(m));
  std::vector<double> c2(m);
  for (std::size_t j = 0; j < m; ++j) {
    c2[j] = budget * budget / minor.eigenvalues[j];
  }
  if (budget == 0.0) return 1.0 + b.squaredNorm();

  const double c2_max = *std::max_element(c2.begin(), c2.end());
  const double b_scale = std::max(b.norm(), 1.0);
  double top_mass = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (c2[j] >= c2_max * (1.0 - 1e-12)) {
      top_mass += b[static_cast<Eigen::Index>(j)] *
                  b[static_cast<Eigen::Index>(j)];
    }
  }

  // Secular function phi(lambda) = sum c_j^2 b_j^2 / (lambda - c_j^2)^2 = ||w||^2.
  auto phi = [&](double lambda) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double bj = b[static_cast<Eigen::Index>(j)];
      if (bj == 0.0) continue;
      const double gap = lambda - c2[j];
      acc += c2[j] * bj * bj / (gap * gap);
    }
    return acc;
  };
  auto value_at = [&](double lambda) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double bj = b[static_cast<Eigen::Index>(j)];
      const double ratio = lambda / (lambda - c2[j]);
      acc += bj * bj * ratio * ratio;
    }
    return 1.0 + acc;
  };

  if (top_mass <= 1e-24 * b_scale * b_scale) {
    // Hard case: the top direction is orthogonal to 1. If the remaining
    // terms cannot reach the boundary at lambda = c_max^2, the leftover norm
    // goes into the top eigenspace.
    double used = 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (c2[j] >= c2_max * (1.0 - 1e-12)) continue;
      const double bj = b[static_cast<Eigen::Index>(j)];
      const double wj = std::sqrt(c2[j]) * bj / (c2_max - c2[j]);
      used += wj * wj;
      const double term = bj + std::sqrt(c2[j]) * wj;
      acc += term * term;
    }
    if (used <= 1.0) return 1.0 + acc + c2_max * (1.0 - used);
  }

  double lo = c2_max;
  double hi = c2_max + std::sqrt(c2_max) * b.norm() + 1e-300;
  while (phi(hi) > 1.0) hi = c2_max + 2.0 * (hi - c2_max);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (phi(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return value_at(hi);
}

double smoothness(std::span<const double> losses, const LaplacianView& lap) {
  if (losses.size() != lap.size()) {
    throw InvalidInput("smoothness: dimension mismatch");
  }
  const Eigen::Map<const Eigen::VectorXd> l(
      losses.data(), static_cast<Eigen::Index>(losses.size()));
  return l.dot(lap.matrix() * l);
}

double edge_smoothness(std::span<const double> losses, const GraphSpec& g) {
  if (losses.size() != g.num_nodes()) {
    throw InvalidInput("edge_smoothness: dimension mismatch");
  }
  double acc = 0.0;
  for (const Edge& e : g.edges()) {
    const double diff = losses[e.first] - losses[e.second];
    acc += diff * diff;
  }
  return acc;
}

GraphSpec octopus(std::size_t k, std::size_t d) {
  if (d < 1) throw InvalidInput("octopus: tentacle length must be >= 1");
  if (k < d + 1) throw InvalidInput("octopus: need k >= d + 1");
  if ((k - 1) % d != 0) {
    throw InvalidInput("octopus: tentacle length must divide k - 1");
  }
  // 1-based rule: (i, j), i < j, is an edge iff (j = k and i = 1 mod d) or
  // (j != k and j = i + 1 and i != 0 mod d).
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < k; ++i) {
    if (i % d == 1 % d) edges.emplace_back(i - 1, k - 1);
    if (i + 1 != k && i % d != 0) edges.emplace_back(i - 1, i);
  }
  return GraphSpec(k, std::move(edges));
}

OctopusNode octopus_node(std::size_t k, std::size_t d, std::size_t node) {
  if (node >= k) throw InvalidInput("octopus_node: node out of range");
  if (node == k - 1) return OctopusNode{true, 0, 0};
  return OctopusNode{false, node / d, node % d + 1};
}

GraphSpec random_connected_graph(std::size_t num_nodes, double extra_edge_prob,
                                 Rng& rng) {
  std::vector<std::size_t> order(num_nodes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::vector<std::vector<bool>> adj(num_nodes,
                                     std::vector<bool>(num_nodes, false));
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < num_nodes; ++i) {
    const std::size_t a = order[i];
    const std::size_t b = order[rng.index(i)];
    adj[a][b] = adj[b][a] = true;
    edges.emplace_back(a, b);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    for (std::size_t j = i + 1; j < num_nodes; ++j) {
      if (!adj[i][j] && rng.bernoulli(extra_edge_prob)) edges.emplace_back(i, j);
    }
  }
  return GraphSpec(num_nodes, std::move(edges));
}

GraphSpec random_graph(std::size_t num_nodes, double edge_prob, Rng& rng) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < num_nodes; ++i) {
    for (std::size_t j = i + 1; j < num_nodes; ++j) {
      if (rng.bernoulli(edge_prob)) edges.emplace_back(i, j);
    }
  }
  return GraphSpec(num_nodes, std::move(edges));
}

}  // namespace rangebandit
