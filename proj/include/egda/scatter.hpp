#pragma once

#include <Eigen/Core>

#include "egda/dataset.hpp"

namespace egda {

/// Source-domain within-class scatter: sum over classes of the outer
/// products of deviations from the class mean. Unnormalized, symmetric,
/// positive semidefinite; empty classes contribute nothing.
Eigen::MatrixXd build_sw(const DomainDataset& source);

/// trace(A^T S_w A) — the projected intra-class spread; nonnegative.
double scatter_trace(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sw);

}  // namespace egda
