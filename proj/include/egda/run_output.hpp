#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "egda/adapt.hpp"
#include "egda/dataset.hpp"
#include "egda/importance.hpp"

namespace egda {

/// Everything one adaptation run needs from disk.
struct RunInputs {
    std::string source_path;
    std::string source_labels_path;
    std::string target_path;
    std::optional<std::string> target_labels_path;
    int class_count = 0;
    Standardize standardize_mode = Standardize::zscore_joint;
    /// Bands of the feature layout; 0 = infer (5 when d is 310, else 1).
    int bands = 0;
    std::optional<std::string> channel_names_path;
};

/// Run metadata written next to the results so a run can be replayed:
/// config echo, input digests, artifact version, timestamps, summary.
struct RunManifest {
    std::string artifact_name;
    std::string artifact_version;
    std::string created_utc;
    std::optional<std::string> preset;
    struct InputDigest {
        std::string role;    // "source", "source_labels", ...
        std::string path;
        std::string digest;  // fnv1a-64 of the file bytes, hex
    };
    std::vector<InputDigest> inputs;

    // config echo
    EgdaConfig config;
    Standardize standardize_mode = Standardize::zscore_joint;
    int class_count = 0;
    int bands = 0;

    // result summary
    int source_count = 0;
    int target_count = 0;
    int dim = 0;
    int subspace_dim = 0;
    int iterations = 0;
    std::optional<double> accuracy;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

/// 64-bit FNV-1a over a file's bytes, as a 16-digit hex string.
std::string file_digest(const std::string& path);

nlohmann::json report_to_json(const AdaptationReport& report,
                              const std::optional<ImportanceProfile>& importance);

struct RunArtifacts {
    AdaptationReport report;
    std::filesystem::path predictions_csv;
    std::filesystem::path report_json;
    std::filesystem::path importance_csv;
    std::filesystem::path manifest_json;
};

/// Loads the inputs, standardizes, runs the adaptation and writes
/// predictions.csv, report.json, importance.csv and manifest.json into
/// out_dir (created if missing).
RunArtifacts execute_adaptation(const RunInputs& inputs,
                                const EgdaConfig& config,
                                const std::optional<std::string>& preset,
                                const std::filesystem::path& out_dir);

/// One (task, parameter point) combination of a sweep.
struct SweepRow {
    std::string task;
    double alpha, beta, mu, lambda, gamma;
    int dim;
    std::optional<double> accuracy;
    int iterations = 0;
    double seconds = 0.0;
    std::string status;  // "ok" or "error"
};

struct SweepTask {
    std::string name;
    RunInputs inputs;
};

struct SweepGrid {
    std::vector<double> alpha{1.0};
    std::vector<double> beta{0.1};
    std::vector<double> mu{0.1};
    std::vector<double> lambda{1.0};
    std::vector<double> gamma{1.0};
    std::vector<int> dim{0};

    std::size_t point_count() const {
        return alpha.size() * beta.size() * mu.size() * lambda.size() * gamma.size() * dim.size();
    }
};

/// Tasks file: CSV with header
/// task,source,source_labels,target,target_labels,classes
/// (target_labels may be empty; '#' lines are skipped).
std::vector<SweepTask> load_tasks_file(const std::string& path);

/// Grid file: lines "name=v1,v2,..." for alpha, beta, mu, lambda, gamma,
/// dim; unlisted parameters keep their defaults.
SweepGrid load_grid_file(const std::string& path);

/// Runs every task x point combination (jobs-way parallel across runs),
/// returning rows in deterministic task-major order. Failures are
/// recorded in the row and do not stop the sweep.
std::vector<SweepRow> run_sweep(const std::vector<SweepTask>& tasks,
                                const SweepGrid& grid,
                                const EgdaConfig& base_config,
                                int jobs);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace egda
