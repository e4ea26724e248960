#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rangebandit/rng.hpp"

namespace rangebandit {

/// Largest graph the dense eigensolver is asked to handle.
inline constexpr std::size_t kMaxGraphNodes = 4096;

using Edge = std::pair<std::size_t, std::size_t>;

/// Simple undirected graph. Edges are stored with first < second, sorted.
class GraphSpec {
 public:
  GraphSpec(std::size_t num_nodes, std::vector<Edge> edges);

  static GraphSpec complete(std::size_t num_nodes);
  static GraphSpec path(std::size_t num_nodes);
  static GraphSpec empty(std::size_t num_nodes);

  std::size_t num_nodes() const { return num_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<std::size_t> degrees() const;

  bool operator==(const GraphSpec&) const = default;

 private:
  std::size_t num_nodes_;
  std::vector<Edge> edges_;
};

/// Component label per node; labels are 0, 1, ... in order of the lowest
/// node of each component.
std::vector<std::size_t> connected_components(const GraphSpec& g);

/// Subgraph on `nodes`, relabelled 0..n-1 in the given order.
GraphSpec induced_subgraph(const GraphSpec& g, std::span<const std::size_t> nodes);

/// Dense Laplacian with its ascending spectrum. Eigenvalues within the zero
/// threshold (1e-9 * ||L||_inf) are stored as exact zeros.
class LaplacianView {
 public:
  explicit LaplacianView(GraphSpec g);

  const GraphSpec& graph() const { return graph_; }
  std::size_t size() const { return graph_.num_nodes(); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  std::span<const double> eigenvalues() const { return eigenvalues_; }
  /// Column j pairs with eigenvalues()[j].
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  const std::vector<std::size_t>& components() const { return components_; }
  std::size_t num_components() const { return num_components_; }
  bool connected() const { return num_components_ == 1; }
  double zero_threshold() const { return zero_threshold_; }

 private:
  GraphSpec graph_;
  Eigen::MatrixXd matrix_;
  std::vector<double> eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  std::vector<std::size_t> components_;
  std::size_t num_components_ = 0;
  double zero_threshold_ = 0.0;
};

LaplacianView laplacian(const GraphSpec& g);

/// Second-smallest Laplacian eigenvalue; exactly 0 for disconnected graphs.
double algebraic_connectivity(const LaplacianView& lap);

struct GroundedMinor {
  Eigen::MatrixXd matrix;
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;

  double smallest() const { return eigenvalues.front(); }
};

/// L with row and column `node` removed. Throws RankDeficient when the
/// graph is disconnected.
GroundedMinor grounded_minor(const LaplacianView& lap, std::size_t node);

struct ExtremalRange {
  double exact;    // budget / sqrt(mu_1 of the grounded minor at the anchor)
  double nominal;  // budget / sqrt(lambda_2)
};

/// Largest deviation ||l - v 1||_2 over l with l' L l <= budget^2 and
/// l(anchor) = v, together with the lambda_2 form of the same bound. The
/// exact value is never below the nominal one (Cauchy interlacing).
ExtremalRange extremal_range(const LaplacianView& lap, double budget,
                             std::size_t anchor, double anchor_value);

/// 1 + budget^2 / mu_1: max of 1 + ||x||^2 over x with x(anchor) = 0 and
/// x' L x <= budget^2.
double fiedler_program_value(const LaplacianView& lap, double budget,
                             std::size_t anchor);

/// Exact max of ||l||^2 over l with l(anchor) = 1 and l' L l <= budget^2,
/// i.e. the worst squared norm of a loss vector shifted so that the
/// anchored arm sits at 1. Solved as a trust-region problem through its
/// secular equation.
double anchored_norm_program(const LaplacianView& lap, double budget,
                             std::size_t anchor);

/// l' L l.
double smoothness(std::span<const double> losses, const LaplacianView& lap);
/// sum over edges of (l(i) - l(j))^2.
double edge_smoothness(std::span<const double> losses, const GraphSpec& g);

/// Octopus graph: (k-1)/d paths of length d hanging off center node k-1.
/// Tentacle t holds nodes t*d .. t*d+d-1, the first one touching the center.
GraphSpec octopus(std::size_t k, std::size_t d);

struct OctopusNode {
  bool center = false;
  std::size_t tentacle = 0;
  std::size_t position = 0;  // 1..d, distance from the center
};
OctopusNode octopus_node(std::size_t k, std::size_t d, std::size_t node);

/// Random spanning tree plus each remaining pair with probability
/// extra_edge_prob.
GraphSpec random_connected_graph(std::size_t num_nodes, double extra_edge_prob,
                                 Rng& rng);
/// Erdos-Renyi G(n, p).
GraphSpec random_graph(std::size_t num_nodes, double edge_prob, Rng& rng);

}  // namespace rangebandit
