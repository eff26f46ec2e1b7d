#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "egda/dataset.hpp"
#include "egda/subspace.hpp"

namespace egda {

enum class ClassifierKind { nn1 };
enum class Convergence { fixed_iters, label_stability };

ClassifierKind parse_classifier(const std::string& name);
Convergence parse_convergence(const std::string& name);
std::string to_string(ClassifierKind kind);
std::string to_string(Convergence mode);

struct EgdaConfig {
    double alpha = 1.0;
    double beta = 0.1;
    double mu = 0.1;
    double lambda = 1.0;
    double gamma = 1.0;

    /// Target subspace dimension; 0 selects min(d, 100).
    int subspace_dim = 0;
    int max_iters = 15;
    /// Ridge added to Q; unset selects 1e-6 * trace(Q) / d.
    std::optional<double> ridge;

    ClassifierKind classifier = ClassifierKind::nn1;
    Convergence convergence = Convergence::fixed_iters;
    /// label_stability stops once the fraction of changed pseudo-labels
    /// drops to this value or below (default: stop only on zero changes).
    double stability_threshold = 0.0;

    /// Ablation switch: when false the conditional MMD matrices are never
    /// built and alignment stays purely marginal.
    bool conditional_alignment = true;
    bool zero_self_similarity = false;
    int graph_threads = 1;

    std::uint64_t seed = 0;

    int resolved_subspace_dim(Eigen::Index d) const;
    void validate() const;  // throws std::invalid_argument
};

struct AdaptationReport {
    Eigen::VectorXi predictions;  // length n_t
    Projection projection;
    int iterations_run = 0;
    std::vector<double> objective_trace;
    std::vector<int> label_change_trace;
    /// Filled only when the target carries ground-truth labels.
    std::optional<Eigen::MatrixXi> confusion;  // C x C, rows = truth
    std::optional<double> accuracy;
};

/// Labels every test column with the label of its Euclidean-nearest
/// training column; distance ties go to the smallest training index.
Eigen::VectorXi nn1_classify(const Eigen::MatrixXd& train_z,
                             const Eigen::VectorXi& train_labels,
                             const Eigen::MatrixXd& test_z);

/// The full alternating loop: initialize the similarity graph in input
/// space, then per iteration solve the projection, pseudo-label the
/// target with the configured classifier, and rebuild the conditional
/// MMD matrices and the graph in the projected space. The first
/// iteration aligns marginals only (no pseudo-labels exist yet).
AdaptationReport run_egda(const DomainDataset& source,
                          const DomainDataset& target,
                          const EgdaConfig& config);

/// accuracy = mean(pred == truth); confusion[i][j] counts truth i
/// predicted as j.
std::pair<double, Eigen::MatrixXi> evaluate(const Eigen::VectorXi& predictions,
                                            const Eigen::VectorXi& truth,
                                            int class_count);

}  // namespace egda
