#pragma once

#include <Eigen/Core>

#include "egda/alignment.hpp"
#include "egda/graph.hpp"

namespace egda {

/// Trade-off weights of the unified objective.
struct ObjectiveWeights {
    double alpha = 1.0;   // distribution alignment
    double beta = 0.1;    // within-class compactness
    double mu = 0.1;      // graph regularization
    double lambda = 1.0;  // projection regularization
};

/// The two sides of the generalized eigenproblem P a = Q a phi:
/// P = alpha X M X^T + beta S_w + mu X L X^T + lambda I (symmetrized),
/// Q = X H X^T with H the centering matrix.
struct ObjectivePieces {
    Eigen::MatrixXd p;  // d x d
    Eigen::MatrixXd q;  // d x d, symmetric PSD
    ObjectiveWeights weights;
};

/// Learned projection: columns are Q-orthonormal generalized eigenvectors
/// ordered by ascending eigenvalue, each with its first nonzero entry
/// positive.
struct Projection {
    Eigen::MatrixXd a;           // d x d_f
    Eigen::VectorXd eigenvalues; // d_f, ascending
};

/// H = I - (1/n) 11^T; symmetric and idempotent.
Eigen::MatrixXd centering_matrix(Eigen::Index n);

/// Assembles P and Q for the given data, combined MMD matrix, scatter
/// matrix and Laplacian. P is explicitly symmetrized.
ObjectivePieces assemble(const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& m_combined,
                         const Eigen::MatrixXd& sw,
                         const Eigen::MatrixXd& laplacian,
                         const ObjectiveWeights& weights);

/// The ridge used when the caller does not supply one:
/// 1e-6 * trace(Q) / d.
double default_ridge(const Eigen::MatrixXd& q);

/// Solves P A = (Q + ridge I) A Phi for the subspace_dim smallest
/// eigenpairs via Cholesky reduction to a standard symmetric problem.
/// The returned columns satisfy A^T (Q + ridge I) A = I.
/// Throws std::runtime_error when Q + ridge I is numerically singular or
/// the residual check fails, std::invalid_argument on a bad subspace_dim.
Projection solve_projection(const ObjectivePieces& pieces, int subspace_dim,
                            double ridge);

/// Full objective value:
/// alpha sum_c Tr(A^T X M_c X^T A) + beta Tr(A^T S_w A)
/// + mu Tr(A^T X L X^T A) + lambda Tr(A^T A) + gamma Tr(S^T S),
/// with the marginal matrix included in the sum over c and gamma taken
/// from the graph.
double objective_value(const Eigen::MatrixXd& a,
                       const Eigen::MatrixXd& x,
                       const AlignmentMatrices& alignment,
                       const Eigen::MatrixXd& sw,
                       const Eigen::MatrixXd& laplacian,
                       const SimilarityGraph& graph,
                       const ObjectiveWeights& weights);

}  // namespace egda
