#include "egda/adapt.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "egda/alignment.hpp"
#include "egda/graph.hpp"
#include "egda/scatter.hpp"

namespace egda {

ClassifierKind parse_classifier(const std::string& name) {
    if (name == "nn1") return ClassifierKind::nn1;
    throw std::invalid_argument("unknown classifier '" + name + "'");
}

Convergence parse_convergence(const std::string& name) {
    if (name == "fixed_iters") return Convergence::fixed_iters;
    if (name == "label_stability") return Convergence::label_stability;
    throw std::invalid_argument("unknown convergence mode '" + name + "'");
}

std::string to_string(ClassifierKind) { return "nn1"; }

std::string to_string(Convergence mode) {
    return mode == Convergence::fixed_iters ? "fixed_iters" : "label_stability";
}

int EgdaConfig::resolved_subspace_dim(Eigen::Index d) const {
    if (subspace_dim > 0) return subspace_dim;
    return static_cast<int>(std::min<Eigen::Index>(d, 100));
}

void EgdaConfig::validate() const {
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    if (alpha < 0.0 || beta < 0.0 || mu < 0.0 || lambda < 0.0)
        throw std::invalid_argument("weights must be nonnegative");
    if (subspace_dim < 0) throw std::invalid_argument("subspace dimension must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (ridge && *ridge < 0.0) throw std::invalid_argument("ridge must be >= 0");
    if (stability_threshold < 0.0 || stability_threshold > 1.0)
        throw std::invalid_argument("stability_threshold must lie in [0, 1]");
    if (graph_threads < 1) throw std::invalid_argument("graph_threads must be >= 1");
}

Eigen::VectorXi nn1_classify(const Eigen::MatrixXd& train_z,
                             const Eigen::VectorXi& train_labels,
                             const Eigen::MatrixXd& test_z) {
    if (train_z.cols() == 0) throw std::invalid_argument("nn1_classify: empty training set");
    if (train_labels.size() != train_z.cols())
        throw std::invalid_argument("nn1_classify: label count mismatch");
    if (train_z.rows() != test_z.rows())
        throw std::invalid_argument("nn1_classify: feature dimension mismatch");

    Eigen::VectorXi predictions(test_z.cols());
    for (Eigen::Index j = 0; j < test_z.cols(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index best_idx = 0;
        for (Eigen::Index i = 0; i < train_z.cols(); ++i) {
            double dist = (train_z.col(i) - test_z.col(j)).squaredNorm();
            if (dist < best) {  // strict: ties keep the smallest index
                best = dist;
                best_idx = i;
            }
        }
        predictions(j) = train_labels(best_idx);
    }
    return predictions;
}

namespace {

/// Minimal fit/predict contract the loop trains each iteration. Only the
/// nearest-neighbor rule ships.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual void fit(const Eigen::MatrixXd& z, const Eigen::VectorXi& labels) = 0;
    virtual Eigen::VectorXi predict(const Eigen::MatrixXd& z) const = 0;
};

class Nn1Classifier final : public Classifier {
public:
    void fit(const Eigen::MatrixXd& z, const Eigen::VectorXi& labels) override {
        train_z_ = z;
        train_labels_ = labels;
    }
    Eigen::VectorXi predict(const Eigen::MatrixXd& z) const override {
        return nn1_classify(train_z_, train_labels_, z);
    }

private:
    Eigen::MatrixXd train_z_;
    Eigen::VectorXi train_labels_;
};

std::unique_ptr<Classifier> make_classifier(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::nn1: return std::make_unique<Nn1Classifier>();
    }
    throw std::invalid_argument("unsupported classifier");
}

}  // namespace

AdaptationReport run_egda(const DomainDataset& source,
                          const DomainDataset& target,
                          const EgdaConfig& config) {
    config.validate();
    source.validate();
    target.validate();
    if (!source.labeled()) throw std::invalid_argument("run_egda: source must be labeled");
    if (source.dim() != target.dim())
        throw std::invalid_argument("run_egda: feature dimension mismatch");
    if (source.class_count < 2) throw std::invalid_argument("run_egda: need at least 2 classes");

    const CombinedData combined = CombinedData::join(source, target);
    const Eigen::MatrixXd& x = combined.features;
    const Eigen::Index ns = combined.source_count;
    const Eigen::Index nt = combined.target_count;
    const int d_f = config.resolved_subspace_dim(source.dim());
    const ObjectiveWeights weights{config.alpha, config.beta, config.mu, config.lambda};
    const GraphOptions graph_options{config.zero_self_similarity, config.graph_threads};

    // Graph initialized in the original feature space (identity projection),
    // scatter and the marginal MMD matrix fixed before the loop.
    SimilarityGraph graph = update_similarity(x, config.gamma, graph_options);
    Eigen::MatrixXd laplacian = build_laplacian(graph);
    const Eigen::MatrixXd sw = build_sw(source);
    AlignmentMatrices alignment;
    alignment.m0 = build_m0(ns, nt);

    auto classifier = make_classifier(config.classifier);

    AdaptationReport report;
    Eigen::VectorXi pseudo;
    Projection projection;

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        // Iteration 1 aligns marginals only: no pseudo-labels exist yet.
        ObjectivePieces pieces = assemble(x, alignment.combined(), sw, laplacian, weights);
        const double ridge = config.ridge ? *config.ridge : default_ridge(pieces.q);
        try {
            projection = solve_projection(pieces, d_f, ridge);
        } catch (const std::runtime_error& err) {
            throw std::runtime_error("iteration " + std::to_string(iter) + ": " + err.what());
        }

        const Eigen::MatrixXd z = projection.a.transpose() * x;
        classifier->fit(z.leftCols(ns), *source.labels);
        Eigen::VectorXi next = classifier->predict(z.rightCols(nt));

        int changed = static_cast<int>(nt);
        if (pseudo.size() == next.size()) changed = static_cast<int>((pseudo.array() != next.array()).count());
        pseudo = std::move(next);
        report.label_change_trace.push_back(changed);

        if (config.conditional_alignment) {
            alignment.mc = build_mc(*source.labels, pseudo, source.class_count);
        }
        graph = update_similarity(z, config.gamma, graph_options);
        laplacian = build_laplacian(graph);

        report.objective_trace.push_back(
            objective_value(projection.a, x, alignment, sw, laplacian, graph, weights));
        report.iterations_run = iter;

        if (config.convergence == Convergence::label_stability && iter > 1 &&
            changed <= config.stability_threshold * static_cast<double>(nt)) {
            break;
        }
    }

    report.predictions = pseudo;
    report.projection = std::move(projection);
    if (target.labeled()) {
        auto [accuracy, confusion] = evaluate(report.predictions, *target.labels, source.class_count);
        report.accuracy = accuracy;
        report.confusion = std::move(confusion);
    }
    return report;
}

std::pair<double, Eigen::MatrixXi> evaluate(const Eigen::VectorXi& predictions,
                                            const Eigen::VectorXi& truth,
                                            int class_count) {
    if (predictions.size() != truth.size())
        throw std::invalid_argument("evaluate: length mismatch");
    if (predictions.size() == 0) throw std::invalid_argument("evaluate: empty inputs");
    Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(class_count, class_count);
    Eigen::Index correct = 0;
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        if (truth(i) < 0 || truth(i) >= class_count || predictions(i) < 0 ||
            predictions(i) >= class_count) {
            throw std::invalid_argument("evaluate: label out of range at sample " +
                                        std::to_string(i + 1));
        }
        confusion(truth(i), predictions(i)) += 1;
        if (truth(i) == predictions(i)) ++correct;
    }
    return {static_cast<double>(correct) / static_cast<double>(truth.size()), confusion};
}

}  // namespace egda
