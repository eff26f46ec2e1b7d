#pragma once

#include <Eigen/Core>
#include <vector>

namespace egda {

/// MMD coefficient matrices over the combined n = n_s + n_t samples.
/// m0 drives marginal alignment; mc[c] drives conditional alignment for
/// class c and is all-zero whenever c is missing from either domain.
struct AlignmentMatrices {
    Eigen::MatrixXd m0;                // n x n
    std::vector<Eigen::MatrixXd> mc;   // class_count matrices, n x n each

    /// m0 + sum of all mc.
    Eigen::MatrixXd combined() const;
};

/// Marginal MMD coefficient matrix: 1/n_s^2 on the source block, 1/n_t^2
/// on the target block, -1/(n_s n_t) on the cross blocks. Every row sums
/// to zero.
Eigen::MatrixXd build_m0(Eigen::Index source_count, Eigen::Index target_count);

/// Per-class MMD coefficient matrices from source labels and target
/// pseudo-labels. A class absent from either side yields a zero matrix;
/// it contributes no conditional alignment until pseudo-labels recover it.
std::vector<Eigen::MatrixXd> build_mc(const Eigen::VectorXi& source_labels,
                                      const Eigen::VectorXi& target_pseudo,
                                      int class_count);

/// trace(A^T X M X^T A). For M = m0 this equals the squared Euclidean
/// distance between the projected domain means.
double mmd_trace(const Eigen::MatrixXd& a,
                 const Eigen::MatrixXd& x,
                 const Eigen::MatrixXd& m);

}  // namespace egda
