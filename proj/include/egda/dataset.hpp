#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace egda {

/// A single domain: DE-feature matrix with samples stored column-wise
/// (d rows of features, n sample columns). The source domain carries
/// labels in [0, class_count); the target usually does not.
struct DomainDataset {
    Eigen::MatrixXd features;               // d x n
    std::optional<Eigen::VectorXi> labels;  // length n when present
    int class_count = 0;

    Eigen::Index dim() const { return features.rows(); }
    Eigen::Index size() const { return features.cols(); }
    bool labeled() const { return labels.has_value(); }

    /// Throws std::invalid_argument when any container invariant is broken
    /// (empty matrix, non-finite entry, label out of range, length mismatch).
    void validate() const;
};

/// Source and target stacked column-wise, source columns first. All
/// alignment-matrix index conventions depend on this ordering.
struct CombinedData {
    Eigen::MatrixXd features;  // d x (source_count + target_count)
    Eigen::Index source_count = 0;
    Eigen::Index target_count = 0;

    static CombinedData join(const DomainDataset& source, const DomainDataset& target);
};

/// How a flat feature vector maps onto (frequency band, channel) pairs.
/// Band-major means feature i belongs to band i / channel_count.
struct FeatureLayout {
    int band_count = 5;
    int channel_count = 62;
    bool band_major = true;

    int dim() const { return band_count * channel_count; }
    /// Flat index of (band b, channel k), both 0-based.
    int feature_index(int band, int channel) const {
        return band_major ? band * channel_count + channel
                          : channel * band_count + band;
    }
};

enum class Standardize { none, zscore_joint, unit_column };

Standardize parse_standardize(const std::string& name);
std::string to_string(Standardize mode);

/// Reads a feature file (CSV: one sample per line, d comma-separated
/// fields; or binary: "EGDA" magic, u32 LE d, u32 LE n, column-major f64)
/// plus an optional label file (one integer per line). The format is
/// detected from the leading magic bytes.
DomainDataset load_dataset(const std::string& features_path,
                           const std::optional<std::string>& labels_path,
                           int class_count);

/// Writers for the two feature formats and the label format. CSV uses 17
/// significant digits so that a save/load round trip is bit-exact.
void save_features_csv(const Eigen::MatrixXd& features, const std::string& path);
void save_features_binary(const Eigen::MatrixXd& features, const std::string& path);
void save_labels(const Eigen::VectorXi& labels, const std::string& path);

/// zscore_joint: every feature row gets mean 0 / variance 1 over the
/// combined columns of both domains (population variance; zero-variance
/// rows pass through). unit_column: every sample column gets Euclidean
/// norm 1 (zero columns pass through). none: identity.
std::pair<DomainDataset, DomainDataset> standardize(const DomainDataset& source,
                                                    const DomainDataset& target,
                                                    Standardize mode);

/// Synthetic cross-session-shift problem: C unit-covariance Gaussian
/// clusters on a circle in the first two coordinates; the target redraws
/// the same clusters, rotates the first two coordinates by
/// rotation_angle and translates by shift. Both domains carry ground
/// truth (the target's labels are for evaluation only). Deterministic
/// given seed, independent of platform.
std::pair<DomainDataset, DomainDataset> generate_synthetic(int class_count,
                                                           int dims,
                                                           int per_class,
                                                           const Eigen::VectorXd& shift,
                                                           double rotation_angle,
                                                           std::uint64_t seed);

}  // namespace egda
