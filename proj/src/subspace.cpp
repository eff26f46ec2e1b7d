#include "egda/subspace.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

#include "egda/scatter.hpp"

namespace egda {

Eigen::MatrixXd centering_matrix(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("centering_matrix: n must be >= 1");
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    h.array() -= 1.0 / static_cast<double>(n);
    return h;
}

ObjectivePieces assemble(const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& m_combined,
                         const Eigen::MatrixXd& sw,
                         const Eigen::MatrixXd& laplacian,
                         const ObjectiveWeights& weights) {
    const Eigen::Index d = x.rows();
    const Eigen::Index n = x.cols();
    if (m_combined.rows() != n || m_combined.cols() != n)
        throw std::invalid_argument("assemble: MMD matrix does not match sample count");
    if (sw.rows() != d || sw.cols() != d)
        throw std::invalid_argument("assemble: scatter matrix does not match feature dim");
    if (laplacian.rows() != n || laplacian.cols() != n)
        throw std::invalid_argument("assemble: Laplacian does not match sample count");
    if (weights.alpha < 0 || weights.beta < 0 || weights.mu < 0 || weights.lambda < 0)
        throw std::invalid_argument("assemble: weights must be nonnegative");

    ObjectivePieces pieces;
    pieces.weights = weights;

    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
    if (weights.alpha != 0.0) p.noalias() += weights.alpha * (x * m_combined * x.transpose());
    if (weights.beta != 0.0) p.noalias() += weights.beta * sw;
    if (weights.mu != 0.0) p.noalias() += weights.mu * (x * laplacian * x.transpose());
    p.diagonal().array() += weights.lambda;
    pieces.p = 0.5 * (p + p.transpose());  // mandatory: solvers need exact symmetry

    // Q = X H X^T = (XH)(XH)^T since H is symmetric idempotent; centering
    // the columns directly keeps Q PSD by construction.
    Eigen::MatrixXd centered = x.colwise() - x.rowwise().mean();
    pieces.q.noalias() = centered * centered.transpose();
    pieces.q = 0.5 * (pieces.q + pieces.q.transpose()).eval();
    return pieces;
}

double default_ridge(const Eigen::MatrixXd& q) {
    return 1e-6 * q.trace() / static_cast<double>(q.rows());
}

Projection solve_projection(const ObjectivePieces& pieces, int subspace_dim, double ridge) {
    const Eigen::Index d = pieces.p.rows();
    if (subspace_dim < 1 || subspace_dim > d) {
        throw std::invalid_argument("solve_projection: subspace_dim " +
                                    std::to_string(subspace_dim) + " outside [1, " +
                                    std::to_string(d) + "]");
    }
    if (ridge < 0.0) throw std::invalid_argument("solve_projection: ridge must be >= 0");

    Eigen::MatrixXd q_ridged = pieces.q;
    q_ridged.diagonal().array() += ridge;

    // Cholesky reduction P a = Q a phi -> (L^-1 P L^-T) u = phi u, a = L^-T u.
    Eigen::LLT<Eigen::MatrixXd> llt(q_ridged);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error(
            "solve_projection: Q + ridge*I is numerically singular; increase the ridge");
    }
    const auto lower = llt.matrixL();
    Eigen::MatrixXd half = lower.solve(pieces.p);                     // L^-1 P
    Eigen::MatrixXd reduced = lower.solve(half.transpose());          // L^-1 P^T L^-T
    reduced = 0.5 * (reduced + reduced.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("solve_projection: eigendecomposition failed to converge");
    }

    Projection projection;
    projection.eigenvalues = solver.eigenvalues().head(subspace_dim);
    projection.a = llt.matrixU().solve(solver.eigenvectors().leftCols(subspace_dim));

    // Deterministic sign: first non-negligible entry of each column positive.
    for (Eigen::Index c = 0; c < projection.a.cols(); ++c) {
        const double scale = projection.a.col(c).cwiseAbs().maxCoeff();
        if (scale == 0.0) continue;
        for (Eigen::Index r = 0; r < projection.a.rows(); ++r) {
            double value = projection.a(r, c);
            if (std::abs(value) > 1e-12 * scale) {
                if (value < 0.0) projection.a.col(c) = -projection.a.col(c);
                break;
            }
        }
    }

    const Eigen::MatrixXd pa = pieces.p * projection.a;
    const Eigen::MatrixXd qa_phi =
        q_ridged * projection.a * projection.eigenvalues.asDiagonal();
    const double denom = std::max(pa.norm(), 1e-30);
    if ((pa - qa_phi).norm() / denom >= 1e-6) {
        throw std::runtime_error("solve_projection: residual check failed (ill-conditioned pencil)");
    }
    return projection;
}

double objective_value(const Eigen::MatrixXd& a,
                       const Eigen::MatrixXd& x,
                       const AlignmentMatrices& alignment,
                       const Eigen::MatrixXd& sw,
                       const Eigen::MatrixXd& laplacian,
                       const SimilarityGraph& graph,
                       const ObjectiveWeights& weights) {
    double mmd = mmd_trace(a, x, alignment.m0);
    for (const auto& m : alignment.mc) mmd += mmd_trace(a, x, m);
    return weights.alpha * mmd + weights.beta * scatter_trace(a, sw) +
           weights.mu * graph_trace(a, x, laplacian) +
           weights.lambda * a.squaredNorm() + graph.gamma * graph.s.squaredNorm();
}

}  // namespace egda
