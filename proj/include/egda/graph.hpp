#pragma once

#include <Eigen/Core>

namespace egda {

/// Row-stochastic nonnegative similarity matrix plus the regularization
/// strength it was learned with.
struct SimilarityGraph {
    Eigen::MatrixXd s;   // n x n, rows on the probability simplex
    double gamma = 1.0;  // > 0
};

struct GraphOptions {
    /// Force s_ii = 0 before projecting each row (k-NN-like graphs).
    /// Default keeps self-similarity: d_ii = 0 contributes nothing to the
    /// Laplacian quadratic form.
    bool zero_diagonal = false;
    /// Row subproblems are independent; > 1 solves them on that many
    /// threads. The result is identical regardless.
    int threads = 1;
};

/// Exact Euclidean projection of v onto {u : u >= 0, sum(u) = 1} via the
/// sort-and-threshold method. Matches the active-set QP optimum.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Learns the similarity graph over the columns of z (projected features,
/// d_f x n): row i is the simplex projection of -d^i / (2 gamma) where
/// d_ij = ||z_i - z_j||^2. Larger gamma spreads each row toward uniform.
SimilarityGraph update_similarity(const Eigen::MatrixXd& z, double gamma,
                                  const GraphOptions& options = {});

/// L = D - W with W = (S + S^T)/2 and D the diagonal of W's row sums, so
/// L is symmetric positive semidefinite with exactly zero row sums.
Eigen::MatrixXd build_laplacian(const SimilarityGraph& graph);

/// trace(A^T X L X^T A); equals half the similarity-weighted sum of
/// squared pairwise distances of the projected samples.
double graph_trace(const Eigen::MatrixXd& a,
                   const Eigen::MatrixXd& x,
                   const Eigen::MatrixXd& laplacian);

}  // namespace egda
