#include "oracles.hpp"

#include <Eigen/LU>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace egda::oracle {

Eigen::VectorXd qp_simplex_oracle(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    if (n < 1 || n > 10) throw std::invalid_argument("qp_simplex_oracle: n must be in [1, 10]");

    // KKT for min ||u - v||^2 on the simplex: active entries u_i = v_i + t
    // with t making them sum to 1; inactive entries need v_j + t <= 0.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                sum += v(i);
                ++count;
            }
        }
        const double t = (1.0 - sum) / count;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            if (mask & (1u << i)) {
                if (v(i) + t < -1e-12) ok = false;  // primal feasibility
            } else {
                if (v(i) + t > 1e-12) ok = false;   // dual feasibility
            }
        }
        if (ok) {
            Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) u(i) = std::max(0.0, v(i) + t);
            return u;
        }
    }
    throw std::logic_error("qp_simplex_oracle: no KKT point found");
}

double mmd_direct_oracle(const Eigen::MatrixXd& a,
                         const Eigen::MatrixXd& x,
                         Eigen::Index source_count,
                         const std::optional<Eigen::VectorXi>& source_labels,
                         const std::optional<Eigen::VectorXi>& target_labels,
                         std::optional<int> class_index) {
    const Eigen::Index n = x.cols();
    const Eigen::Index target_count = n - source_count;
    std::vector<Eigen::Index> source_set, target_set;
    for (Eigen::Index i = 0; i < source_count; ++i) {
        if (!class_index || (*source_labels)(i) == *class_index) source_set.push_back(i);
    }
    for (Eigen::Index j = 0; j < target_count; ++j) {
        if (!class_index || (*target_labels)(j) == *class_index)
            target_set.push_back(source_count + j);
    }
    if (source_set.empty() || target_set.empty()) return 0.0;

    Eigen::VectorXd source_mean = Eigen::VectorXd::Zero(a.cols());
    for (Eigen::Index i : source_set) source_mean += a.transpose() * x.col(i);
    source_mean /= static_cast<double>(source_set.size());
    Eigen::VectorXd target_mean = Eigen::VectorXd::Zero(a.cols());
    for (Eigen::Index j : target_set) target_mean += a.transpose() * x.col(j);
    target_mean /= static_cast<double>(target_set.size());
    return (source_mean - target_mean).squaredNorm();
}

Eigen::VectorXd dense_geneig_oracle(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
    if (p.rows() > 20) throw std::invalid_argument("dense_geneig_oracle: d must be <= 20");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(q);
    if (!lu.isInvertible()) throw std::invalid_argument("dense_geneig_oracle: singular Q");
    const Eigen::MatrixXd m = lu.inverse() * p;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
    Eigen::VectorXd eigenvalues = solver.eigenvalues().real();
    std::sort(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
    return eigenvalues;
}

Eigen::MatrixXd scatter_direct_oracle(const Eigen::MatrixXd& x, const Eigen::VectorXi& labels,
                                      int class_count) {
    const Eigen::Index d = x.rows();
    Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(d, d);
    for (int c = 0; c < class_count; ++c) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
        int count = 0;
        for (Eigen::Index i = 0; i < x.cols(); ++i) {
            if (labels(i) == c) {
                mean += x.col(i);
                ++count;
            }
        }
        if (count == 0) continue;
        mean /= count;
        for (Eigen::Index i = 0; i < x.cols(); ++i) {
            if (labels(i) != c) continue;
            for (Eigen::Index r = 0; r < d; ++r)
                for (Eigen::Index s = 0; s < d; ++s)
                    sw(r, s) += (x(r, i) - mean(r)) * (x(s, i) - mean(s));
        }
    }
    return sw;
}

}  // namespace egda::oracle
