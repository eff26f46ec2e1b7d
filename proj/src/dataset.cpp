#include "egda/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace egda {
namespace {

[[noreturn]] void fail(const std::string& message) {
    throw std::invalid_argument(message);
}

std::string cell(Eigen::Index row, Eigen::Index col) {
    std::ostringstream os;
    os << "row " << row + 1 << ", column " << col + 1;
    return os.str();
}

double parse_field(std::string_view field, const std::string& path,
                   Eigen::Index line, Eigen::Index col) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double value = 0.0;
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        fail(path + ": unparsable value '" + std::string(field) + "' at " + cell(line, col));
    }
    if (!std::isfinite(value)) {
        fail(path + ": non-finite value '" + std::string(field) + "' at " + cell(line, col));
    }
    return value;
}

constexpr char kMagic[4] = {'E', 'G', 'D', 'A'};

Eigen::MatrixXd load_features_binary(std::ifstream& in, const std::string& path) {
    char magic[4];
    in.read(magic, 4);
    std::uint32_t d = 0, n = 0;
    in.read(reinterpret_cast<char*>(&d), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in) fail(path + ": truncated binary header");
    if (d == 0 || n == 0) fail(path + ": empty matrix in binary header");
    Eigen::MatrixXd features(d, n);
    in.read(reinterpret_cast<char*>(features.data()),
            static_cast<std::streamsize>(sizeof(double) * d * n));
    if (!in) fail(path + ": truncated binary payload");
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
        for (Eigen::Index r = 0; r < features.rows(); ++r) {
            if (!std::isfinite(features(r, c))) {
                fail(path + ": non-finite value at feature " + std::to_string(r + 1) +
                     ", sample " + std::to_string(c + 1));
            }
        }
    }
    return features;
}

Eigen::MatrixXd load_features_csv(std::ifstream& in, const std::string& path) {
    std::vector<std::vector<double>> samples;  // one row per line = one sample
    std::string line;
    Eigen::Index line_no = 0;
    Eigen::Index dim = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<double> fields;
        std::size_t start = 0;
        Eigen::Index col = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string_view field(line.data() + start,
                                   (comma == std::string::npos ? line.size() : comma) - start);
            fields.push_back(parse_field(field, path, line_no, col));
            ++col;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (dim < 0) {
            dim = static_cast<Eigen::Index>(fields.size());
        } else if (static_cast<Eigen::Index>(fields.size()) != dim) {
            fail(path + ": dimension mismatch at row " + std::to_string(line_no) + " (expected " +
                 std::to_string(dim) + " fields, got " + std::to_string(fields.size()) + ")");
        }
        samples.push_back(std::move(fields));
    }
    if (samples.empty()) fail(path + ": no samples");
    Eigen::MatrixXd features(dim, static_cast<Eigen::Index>(samples.size()));
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            features(r, c) = samples[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
        }
    }
    return features;
}

Eigen::VectorXi load_label_file(const std::string& path, Eigen::Index expected, int class_count) {
    std::ifstream in(path);
    if (!in) fail(path + ": cannot open label file");
    std::vector<int> labels;
    std::string line;
    Eigen::Index line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        while (!view.empty() && (view.back() == '\r' || view.back() == ' ')) view.remove_suffix(1);
        while (!view.empty() && view.front() == ' ') view.remove_prefix(1);
        if (view.empty()) continue;
        int value = 0;
        auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
        if (ec != std::errc{} || ptr != view.data() + view.size()) {
            fail(path + ": unparsable label '" + std::string(view) + "' at line " +
                 std::to_string(line_no));
        }
        if (value < 0 || value >= class_count) {
            fail(path + ": label " + std::to_string(value) + " out of range [0, " +
                 std::to_string(class_count) + ") at line " + std::to_string(line_no));
        }
        labels.push_back(value);
    }
    if (static_cast<Eigen::Index>(labels.size()) != expected) {
        fail(path + ": label count mismatch (got " + std::to_string(labels.size()) +
             ", expected " + std::to_string(expected) + ")");
    }
    return Eigen::Map<const Eigen::VectorXi>(labels.data(),
                                             static_cast<Eigen::Index>(labels.size()));
}

}  // namespace

void DomainDataset::validate() const {
    if (features.rows() < 1 || features.cols() < 1) fail("dataset: empty feature matrix");
    if (class_count < 1) fail("dataset: class_count must be positive");
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
        for (Eigen::Index r = 0; r < features.rows(); ++r) {
            if (!std::isfinite(features(r, c))) {
                fail("dataset: non-finite value at feature " + std::to_string(r + 1) +
                     ", sample " + std::to_string(c + 1));
            }
        }
    }
    if (labels) {
        if (labels->size() != features.cols()) {
            fail("dataset: label count mismatch (got " + std::to_string(labels->size()) +
                 ", expected " + std::to_string(features.cols()) + ")");
        }
        for (Eigen::Index i = 0; i < labels->size(); ++i) {
            int y = (*labels)(i);
            if (y < 0 || y >= class_count) {
                fail("dataset: label " + std::to_string(y) + " out of range [0, " +
                     std::to_string(class_count) + ") at sample " + std::to_string(i + 1));
            }
        }
    }
}

CombinedData CombinedData::join(const DomainDataset& source, const DomainDataset& target) {
    if (source.dim() != target.dim()) {
        fail("combine: feature dimension mismatch (" + std::to_string(source.dim()) + " vs " +
             std::to_string(target.dim()) + ")");
    }
    CombinedData combined;
    combined.source_count = source.size();
    combined.target_count = target.size();
    combined.features.resize(source.dim(), source.size() + target.size());
    combined.features.leftCols(source.size()) = source.features;
    combined.features.rightCols(target.size()) = target.features;
    return combined;
}

Standardize parse_standardize(const std::string& name) {
    if (name == "none") return Standardize::none;
    if (name == "zscore_joint") return Standardize::zscore_joint;
    if (name == "unit_column") return Standardize::unit_column;
    fail("unknown standardize mode '" + name + "'");
}

std::string to_string(Standardize mode) {
    switch (mode) {
        case Standardize::none: return "none";
        case Standardize::zscore_joint: return "zscore_joint";
        case Standardize::unit_column: return "unit_column";
    }
    return "none";
}

DomainDataset load_dataset(const std::string& features_path,
                           const std::optional<std::string>& labels_path,
                           int class_count) {
    if (class_count < 1) fail("load_dataset: class_count must be positive");
    std::ifstream in(features_path, std::ios::binary);
    if (!in) fail(features_path + ": cannot open feature file");
    char magic[4] = {};
    in.read(magic, 4);
    in.clear();
    in.seekg(0);

    DomainDataset dataset;
    dataset.class_count = class_count;
    if (in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0) {
        dataset.features = load_features_binary(in, features_path);
    } else {
        dataset.features = load_features_csv(in, features_path);
    }
    if (labels_path) {
        dataset.labels = load_label_file(*labels_path, dataset.size(), class_count);
    }
    dataset.validate();
    return dataset;
}

void save_features_csv(const Eigen::MatrixXd& features, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(path + ": cannot open for writing");
    char buffer[64];
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
        for (Eigen::Index r = 0; r < features.rows(); ++r) {
            std::snprintf(buffer, sizeof buffer, "%.17g", features(r, c));
            out << buffer << (r + 1 < features.rows() ? "," : "\n");
        }
    }
    if (!out) fail(path + ": write failed");
}

void save_features_binary(const Eigen::MatrixXd& features, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path + ": cannot open for writing");
    out.write(kMagic, 4);
    std::uint32_t d = static_cast<std::uint32_t>(features.rows());
    std::uint32_t n = static_cast<std::uint32_t>(features.cols());
    out.write(reinterpret_cast<const char*>(&d), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(features.data()),
              static_cast<std::streamsize>(sizeof(double) * features.size()));
    if (!out) fail(path + ": write failed");
}

void save_labels(const Eigen::VectorXi& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(path + ": cannot open for writing");
    for (Eigen::Index i = 0; i < labels.size(); ++i) out << labels(i) << "\n";
    if (!out) fail(path + ": write failed");
}

std::pair<DomainDataset, DomainDataset> standardize(const DomainDataset& source,
                                                    const DomainDataset& target,
                                                    Standardize mode) {
    if (source.dim() != target.dim()) {
        fail("standardize: feature dimension mismatch (" + std::to_string(source.dim()) +
             " vs " + std::to_string(target.dim()) + ")");
    }
    DomainDataset s = source;
    DomainDataset t = target;
    if (mode == Standardize::none) return {std::move(s), std::move(t)};

    if (mode == Standardize::zscore_joint) {
        const Eigen::Index n = source.size() + target.size();
        for (Eigen::Index r = 0; r < source.dim(); ++r) {
            double sum = source.features.row(r).sum() + target.features.row(r).sum();
            double mean = sum / static_cast<double>(n);
            double sq = (source.features.row(r).array() - mean).square().sum() +
                        (target.features.row(r).array() - mean).square().sum();
            double variance = sq / static_cast<double>(n);  // population variance
            if (variance <= 1e-24 * std::max(1.0, mean * mean)) continue;  // degenerate row
            double inv_std = 1.0 / std::sqrt(variance);
            s.features.row(r) = (source.features.row(r).array() - mean) * inv_std;
            t.features.row(r) = (target.features.row(r).array() - mean) * inv_std;
        }
    } else {  // unit_column
        auto normalize = [](Eigen::MatrixXd& m) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                double norm = m.col(c).norm();
                if (norm > 0.0) m.col(c) /= norm;
            }
        };
        normalize(s.features);
        normalize(t.features);
    }
    return {std::move(s), std::move(t)};
}

namespace {

// top 53 bits -> uniform in (0, 1]; bit-identical on every platform
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// Box-Muller on raw mt19937_64 bits; std::normal_distribution is
/// implementation-defined, which would break cross-platform determinism.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(rng_);
        double u2 = uniform01(rng_);
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

std::pair<DomainDataset, DomainDataset> generate_synthetic(int class_count,
                                                           int dims,
                                                           int per_class,
                                                           const Eigen::VectorXd& shift,
                                                           double rotation_angle,
                                                           std::uint64_t seed) {
    if (class_count < 2) fail("generate_synthetic: class_count must be >= 2");
    if (per_class < 2) fail("generate_synthetic: per_class must be >= 2");
    if (dims < 2) fail("generate_synthetic: dims must be >= 2 (plane rotation needs two axes)");
    if (shift.size() != dims) {
        fail("generate_synthetic: shift length " + std::to_string(shift.size()) +
             " does not match dims " + std::to_string(dims));
    }

    // Class means on a circle of this radius in the rotation plane, so a
    // plane rotation shifts every class-conditional distribution.
    constexpr double kClusterRadius = 4.0;
    Eigen::MatrixXd means(dims, class_count);
    means.setZero();
    for (int c = 0; c < class_count; ++c) {
        double angle = 2.0 * std::numbers::pi * c / class_count;
        means(0, c) = kClusterRadius * std::cos(angle);
        means(1, c) = kClusterRadius * std::sin(angle);
    }

    const Eigen::Index n = static_cast<Eigen::Index>(class_count) * per_class;
    NormalSampler normal(seed);
    auto draw_domain = [&](Eigen::MatrixXd& x, Eigen::VectorXi& y) {
        x.resize(dims, n);
        y.resize(n);
        Eigen::Index col = 0;
        for (int c = 0; c < class_count; ++c) {
            for (int i = 0; i < per_class; ++i, ++col) {
                for (int r = 0; r < dims; ++r) x(r, col) = means(r, c) + normal();
                y(col) = c;
            }
        }
    };

    DomainDataset source, target;
    source.class_count = target.class_count = class_count;
    Eigen::VectorXi ys, yt;
    draw_domain(source.features, ys);
    draw_domain(target.features, yt);
    source.labels = std::move(ys);
    target.labels = std::move(yt);

    // Plane rotation on the first two coordinates, then the translation.
    const double c = std::cos(rotation_angle), s = std::sin(rotation_angle);
    for (Eigen::Index col = 0; col < n; ++col) {
        double x0 = target.features(0, col), x1 = target.features(1, col);
        target.features(0, col) = c * x0 - s * x1;
        target.features(1, col) = s * x0 + c * x1;
    }
    target.features.colwise() += shift;

    return {std::move(source), std::move(target)};
}

}  // namespace egda
