#include "egda/alignment.hpp"

#include <stdexcept>
#include <string>

namespace egda {

Eigen::MatrixXd AlignmentMatrices::combined() const {
    Eigen::MatrixXd total = m0;
    for (const auto& m : mc) total += m;
    return total;
}

Eigen::MatrixXd build_m0(Eigen::Index source_count, Eigen::Index target_count) {
    if (source_count < 1 || target_count < 1) {
        throw std::invalid_argument("build_m0: both domains need at least one sample");
    }
    const Eigen::Index n = source_count + target_count;
    const double ss = 1.0 / (static_cast<double>(source_count) * source_count);
    const double tt = 1.0 / (static_cast<double>(target_count) * target_count);
    const double st = -1.0 / (static_cast<double>(source_count) * target_count);
    Eigen::MatrixXd m0(n, n);
    m0.topLeftCorner(source_count, source_count).setConstant(ss);
    m0.bottomRightCorner(target_count, target_count).setConstant(tt);
    m0.topRightCorner(source_count, target_count).setConstant(st);
    m0.bottomLeftCorner(target_count, source_count).setConstant(st);
    return m0;
}

std::vector<Eigen::MatrixXd> build_mc(const Eigen::VectorXi& source_labels,
                                      const Eigen::VectorXi& target_pseudo,
                                      int class_count) {
    const Eigen::Index ns = source_labels.size();
    const Eigen::Index nt = target_pseudo.size();
    const Eigen::Index n = ns + nt;
    auto check = [&](const Eigen::VectorXi& labels, const char* what) {
        for (Eigen::Index i = 0; i < labels.size(); ++i) {
            if (labels(i) < 0 || labels(i) >= class_count) {
                throw std::invalid_argument(std::string("build_mc: ") + what + " label " +
                                            std::to_string(labels(i)) + " out of range [0, " +
                                            std::to_string(class_count) + ")");
            }
        }
    };
    check(source_labels, "source");
    check(target_pseudo, "target pseudo");

    std::vector<Eigen::MatrixXd> mc;
    mc.reserve(static_cast<std::size_t>(class_count));
    std::vector<Eigen::Index> source_idx, target_idx;
    for (int c = 0; c < class_count; ++c) {
        source_idx.clear();
        target_idx.clear();
        for (Eigen::Index i = 0; i < ns; ++i)
            if (source_labels(i) == c) source_idx.push_back(i);
        for (Eigen::Index j = 0; j < nt; ++j)
            if (target_pseudo(j) == c) target_idx.push_back(ns + j);

        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        // A class missing from either side contributes nothing this round.
        if (!source_idx.empty() && !target_idx.empty()) {
            const double ss = 1.0 / (static_cast<double>(source_idx.size()) * source_idx.size());
            const double tt = 1.0 / (static_cast<double>(target_idx.size()) * target_idx.size());
            const double st = -1.0 / (static_cast<double>(source_idx.size()) * target_idx.size());
            for (Eigen::Index i : source_idx)
                for (Eigen::Index j : source_idx) m(i, j) = ss;
            for (Eigen::Index i : target_idx)
                for (Eigen::Index j : target_idx) m(i, j) = tt;
            for (Eigen::Index i : source_idx)
                for (Eigen::Index j : target_idx) {
                    m(i, j) = st;
                    m(j, i) = st;
                }
        }
        mc.push_back(std::move(m));
    }
    return mc;
}

double mmd_trace(const Eigen::MatrixXd& a,
                 const Eigen::MatrixXd& x,
                 const Eigen::MatrixXd& m) {
    if (a.rows() != x.rows() || x.cols() != m.rows() || m.rows() != m.cols()) {
        throw std::invalid_argument("mmd_trace: shape mismatch");
    }
    const Eigen::MatrixXd z = a.transpose() * x;  // d_f x n
    return (z * m).cwiseProduct(z).sum();         // trace(Z M Z^T)
}

}  // namespace egda
