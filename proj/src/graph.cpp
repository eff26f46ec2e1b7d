#include "egda/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace egda {
namespace {

/// Sort-and-threshold projection onto {u >= 0, sum(u) = 1}: with the
/// entries sorted descending, the largest rho for which
/// w_rho + (1 - sum_{i<=rho} w_i)/rho stays positive fixes the shift.
Eigen::VectorXd simplex_core(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size();
    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());

    double cumulative = 0.0;
    double shift = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        cumulative += sorted[static_cast<std::size_t>(j)];
        double candidate = (1.0 - cumulative) / static_cast<double>(j + 1);
        if (sorted[static_cast<std::size_t>(j)] + candidate > 0.0) shift = candidate;
    }

    Eigen::VectorXd u = (v.array() + shift).max(0.0);
    // Renormalization guard: the clamped sum is 1 up to roundoff.
    double total = u.sum();
    if (total > 0.0) u /= total;
    return u;
}

void check_finite(const Eigen::VectorXd& v, const char* where) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i))) {
            throw std::invalid_argument(std::string(where) + ": non-finite entry at index " +
                                        std::to_string(i + 1));
        }
    }
}

}  // namespace

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
    if (v.size() == 0) throw std::invalid_argument("project_to_simplex: empty vector");
    check_finite(v, "project_to_simplex");
    return simplex_core(v);
}

SimilarityGraph update_similarity(const Eigen::MatrixXd& z, double gamma,
                                  const GraphOptions& options) {
    if (gamma <= 0.0) throw std::invalid_argument("update_similarity: gamma must be positive");
    const Eigen::Index n = z.cols();
    if (n == 0) throw std::invalid_argument("update_similarity: no samples");

    // d_ij = ||z_i||^2 + ||z_j||^2 - 2 z_i.z_j via one Gram product.
    const Eigen::VectorXd sq = z.colwise().squaredNorm();
    Eigen::MatrixXd dist = -2.0 * (z.transpose() * z);
    dist.colwise() += sq;
    dist.rowwise() += sq.transpose();
    dist = dist.cwiseMax(0.0);

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!std::isfinite(dist(i, j))) {
                throw std::invalid_argument("update_similarity: non-finite distance between samples " +
                                            std::to_string(i + 1) + " and " + std::to_string(j + 1));
            }
        }
    }

    SimilarityGraph graph;
    graph.gamma = gamma;
    graph.s.resize(n, n);

    auto solve_rows = [&](Eigen::Index begin, Eigen::Index end) {
        Eigen::VectorXd row(n);
        for (Eigen::Index i = begin; i < end; ++i) {
            row = dist.row(i).transpose() / (-2.0 * gamma);
            if (options.zero_diagonal && n > 1) {
                // Project the off-diagonal entries alone, keep s_ii = 0.
                Eigen::VectorXd others(n - 1);
                Eigen::Index k = 0;
                for (Eigen::Index j = 0; j < n; ++j)
                    if (j != i) others(k++) = row(j);
                Eigen::VectorXd proj = simplex_core(others);
                k = 0;
                for (Eigen::Index j = 0; j < n; ++j) graph.s(i, j) = (j == i) ? 0.0 : proj(k++);
            } else {
                graph.s.row(i) = simplex_core(row).transpose();
            }
        }
    };

    const int threads = std::max(1, options.threads);
    if (threads == 1 || n < 64) {
        solve_rows(0, n);
    } else {
        std::vector<std::thread> pool;
        const Eigen::Index chunk = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            Eigen::Index begin = t * chunk;
            Eigen::Index end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(solve_rows, begin, end);
        }
        for (auto& worker : pool) worker.join();
    }
    return graph;
}

Eigen::MatrixXd build_laplacian(const SimilarityGraph& graph) {
    const Eigen::MatrixXd w = 0.5 * (graph.s + graph.s.transpose());
    Eigen::MatrixXd laplacian = -w;
    laplacian.diagonal() += w.rowwise().sum();
    return laplacian;
}

double graph_trace(const Eigen::MatrixXd& a,
                   const Eigen::MatrixXd& x,
                   const Eigen::MatrixXd& laplacian) {
    if (a.rows() != x.rows() || x.cols() != laplacian.rows() ||
        laplacian.rows() != laplacian.cols()) {
        throw std::invalid_argument("graph_trace: shape mismatch");
    }
    const Eigen::MatrixXd z = a.transpose() * x;
    return (z * laplacian).cwiseProduct(z).sum();
}

}  // namespace egda
