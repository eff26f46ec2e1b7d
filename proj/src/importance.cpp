#include "egda/importance.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace egda {

Eigen::VectorXd feature_importance(const Eigen::MatrixXd& a) {
    Eigen::VectorXd norms(a.rows());
    for (Eigen::Index r = 0; r < a.rows(); ++r) norms(r) = a.row(r).norm();
    const double total = norms.sum();
    if (total == 0.0) {
        throw std::invalid_argument("feature_importance: all-zero projection matrix");
    }
    return norms / total;
}

namespace {

void check_layout(const Eigen::VectorXd& theta, const FeatureLayout& layout) {
    if (layout.band_count < 1 || layout.channel_count < 1)
        throw std::invalid_argument("importance: layout counts must be positive");
    if (theta.size() != layout.dim()) {
        throw std::invalid_argument("importance: theta length " + std::to_string(theta.size()) +
                                    " != band_count * channel_count = " +
                                    std::to_string(layout.dim()));
    }
}

}  // namespace

Eigen::VectorXd band_importance(const Eigen::VectorXd& theta, const FeatureLayout& layout) {
    check_layout(theta, layout);
    Eigen::VectorXd band = Eigen::VectorXd::Zero(layout.band_count);
    for (int b = 0; b < layout.band_count; ++b)
        for (int k = 0; k < layout.channel_count; ++k) band(b) += theta(layout.feature_index(b, k));
    return band;
}

Eigen::VectorXd channel_importance(const Eigen::VectorXd& theta, const FeatureLayout& layout) {
    check_layout(theta, layout);
    Eigen::VectorXd channel = Eigen::VectorXd::Zero(layout.channel_count);
    for (int k = 0; k < layout.channel_count; ++k)
        for (int b = 0; b < layout.band_count; ++b) channel(k) += theta(layout.feature_index(b, k));
    return channel;
}

ImportanceProfile importance_profile(const Eigen::MatrixXd& a, const FeatureLayout& layout) {
    ImportanceProfile profile;
    profile.theta = feature_importance(a);
    profile.band = band_importance(profile.theta, layout);
    profile.channel = channel_importance(profile.theta, layout);
    return profile;
}

std::vector<RankedEntry> rank_report(const ImportanceProfile& profile,
                                     const std::optional<std::vector<std::string>>& channel_names,
                                     int top_k) {
    const int q = static_cast<int>(profile.channel.size());
    if (top_k < 1 || top_k > q) {
        throw std::invalid_argument("rank_report: top_k must lie in [1, " + std::to_string(q) + "]");
    }
    if (channel_names && static_cast<int>(channel_names->size()) != q) {
        throw std::invalid_argument("rank_report: got " + std::to_string(channel_names->size()) +
                                    " channel names for " + std::to_string(q) + " channels");
    }

    std::vector<int> order(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) order[static_cast<std::size_t>(k)] = k;
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return profile.channel(lhs) > profile.channel(rhs);  // ties keep index order
    });

    std::vector<RankedEntry> entries;
    entries.reserve(static_cast<std::size_t>(top_k));
    for (int rank = 0; rank < top_k; ++rank) {
        const int idx = order[static_cast<std::size_t>(rank)];
        RankedEntry entry;
        entry.index = idx;
        entry.name = channel_names ? (*channel_names)[static_cast<std::size_t>(idx)]
                                   : "ch" + std::to_string(idx + 1);
        entry.score = profile.channel(idx);
        entries.push_back(std::move(entry));
    }
    return entries;
}

void write_rank_csv(std::ostream& out, const std::vector<RankedEntry>& entries) {
    out << "rank,name,score\n";
    char buffer[32];
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::snprintf(buffer, sizeof buffer, "%.6g", entries[i].score);
        out << (i + 1) << ',' << entries[i].name << ',' << buffer << '\n';
    }
}

const std::vector<std::string>& seed62_channel_names() {
    static const std::vector<std::string> names = {
        "FP1", "FPZ", "FP2", "AF3", "AF4", "F7",  "F5",  "F3",  "F1",  "FZ",  "F2",  "F4",
        "F6",  "F8",  "FT7", "FC5", "FC3", "FC1", "FCZ", "FC2", "FC4", "FC6", "FT8", "T7",
        "C5",  "C3",  "C1",  "CZ",  "C2",  "C4",  "C6",  "T8",  "TP7", "CP5", "CP3", "CP1",
        "CPZ", "CP2", "CP4", "CP6", "TP8", "P7",  "P5",  "P3",  "P1",  "PZ",  "P2",  "P4",
        "P6",  "P8",  "PO7", "PO5", "PO3", "POZ", "PO4", "PO6", "PO8", "CB1", "O1",  "OZ",
        "O2",  "CB2"};
    return names;
}

}  // namespace egda
