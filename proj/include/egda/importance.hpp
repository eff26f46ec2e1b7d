#pragma once

#include <Eigen/Core>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "egda/dataset.hpp"

namespace egda {

/// Normalized importance vectors: theta per feature, band and channel as
/// its marginal sums under a FeatureLayout. Each sums to 1.
struct ImportanceProfile {
    Eigen::VectorXd theta;    // length d
    Eigen::VectorXd band;     // length band_count
    Eigen::VectorXd channel;  // length channel_count
};

/// theta_i = ||row i of a||_2 / sum_j ||row j of a||_2.
/// Throws std::invalid_argument for an all-zero matrix.
Eigen::VectorXd feature_importance(const Eigen::MatrixXd& a);

/// Sum of theta over the channels of each band.
Eigen::VectorXd band_importance(const Eigen::VectorXd& theta, const FeatureLayout& layout);

/// Sum of theta over the bands of each channel.
Eigen::VectorXd channel_importance(const Eigen::VectorXd& theta, const FeatureLayout& layout);

ImportanceProfile importance_profile(const Eigen::MatrixXd& a, const FeatureLayout& layout);

struct RankedEntry {
    int index = 0;  // 0-based channel index
    std::string name;
    double score = 0.0;
};

/// Channel ranking by descending score, ties broken by ascending index.
/// Names default to "ch<k>" when no list is supplied.
std::vector<RankedEntry> rank_report(const ImportanceProfile& profile,
                                     const std::optional<std::vector<std::string>>& channel_names,
                                     int top_k);

/// CSV with header "rank,name,score", scores at 6 significant digits.
void write_rank_csv(std::ostream& out, const std::vector<RankedEntry>& entries);

/// Electrode names of the 62-channel extended 10-20 montage used by the
/// SEED datasets, in recording order. Mirrors data/seed62_channels.txt.
const std::vector<std::string>& seed62_channel_names();

}  // namespace egda
