#include "egda/scatter.hpp"

#include <stdexcept>
#include <vector>

namespace egda {

Eigen::MatrixXd build_sw(const DomainDataset& source) {
    if (!source.labeled()) {
        throw std::invalid_argument("build_sw: source dataset has no labels");
    }
    source.validate();
    const Eigen::Index d = source.dim();
    const Eigen::VectorXi& labels = *source.labels;

    Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(d, d);
    std::vector<Eigen::Index> members;
    for (int c = 0; c < source.class_count; ++c) {
        members.clear();
        for (Eigen::Index i = 0; i < labels.size(); ++i)
            if (labels(i) == c) members.push_back(i);
        if (members.empty()) continue;

        Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
        for (Eigen::Index i : members) mean += source.features.col(i);
        mean /= static_cast<double>(members.size());

        Eigen::MatrixXd centered(d, static_cast<Eigen::Index>(members.size()));
        for (std::size_t k = 0; k < members.size(); ++k)
            centered.col(static_cast<Eigen::Index>(k)) = source.features.col(members[k]) - mean;
        sw.noalias() += centered * centered.transpose();
    }
    return sw;
}

double scatter_trace(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sw) {
    if (sw.rows() != sw.cols() || a.rows() != sw.rows()) {
        throw std::invalid_argument("scatter_trace: shape mismatch");
    }
    return (a.transpose() * sw).cwiseProduct(a.transpose()).sum();
}

}  // namespace egda
