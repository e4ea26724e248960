#pragma once

// Reference computations written independently of the library code paths
// they check: raw-weight exponential weights, literal graph rules, a Jacobi
// eigensolver and a projected tangent-ascent maximizer.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;
using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

/// Dense Laplacian assembled edge by edge.
Matrix laplacian(std::size_t n, const EdgeList& edges);

/// Drops row and column `node`.
Matrix remove_index(const Matrix& m, std::size_t node);

/// Cyclic Jacobi rotations; ascending eigenvalues.
std::vector<double> jacobi_eigenvalues(Matrix m);

/// Octopus edges by testing every pair (i, j), 1 <= i < j <= k, against the
/// defining rule; returned 0-based.
EdgeList octopus_edges_by_rule(std::size_t k, std::size_t d);

/// Exponential weights with raw (not log-domain) weights.
class RawExpWeights {
 public:
  RawExpWeights(std::size_t k, double eta) : w_(k, 1.0), eta_(eta) {}
  std::vector<double> probs() const;
  void update(const std::vector<double>& losses);

 private:
  std::vector<double> w_;
  double eta_;
};

enum class Objective {
  deviation,      // ||x||^2
  anchored_norm,  // ||1 + x||^2
};

/// Maximizes the objective over x with x(anchor) = 0 and x' L x <= C^2 by
/// gradient steps projected on the tangent space of the constraint surface,
/// rescaling back onto it after every step. Best of `starts` random starts.
double projected_ascent(const Matrix& lap, double budget, std::size_t anchor,
                        Objective objective, std::size_t starts,
                        std::uint64_t seed);

}  // namespace oracle
