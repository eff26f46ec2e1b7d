#include "egda/run_output.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "egda/version.hpp"

namespace egda {
namespace {

using nlohmann::json;

std::string now_utc_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

json config_to_json(const EgdaConfig& config) {
    json j;
    j["alpha"] = config.alpha;
    j["beta"] = config.beta;
    j["mu"] = config.mu;
    j["lambda"] = config.lambda;
    j["gamma"] = config.gamma;
    j["dim"] = config.subspace_dim;
    j["iters"] = config.max_iters;
    j["ridge"] = config.ridge ? json(*config.ridge) : json(nullptr);
    j["classifier"] = to_string(config.classifier);
    j["convergence"] = to_string(config.convergence);
    j["stability_threshold"] = config.stability_threshold;
    j["conditional_alignment"] = config.conditional_alignment;
    j["zero_self_similarity"] = config.zero_self_similarity;
    j["graph_threads"] = config.graph_threads;
    j["seed"] = config.seed;
    return j;
}

EgdaConfig config_from_json(const json& j) {
    EgdaConfig config;
    config.alpha = j.at("alpha").get<double>();
    config.beta = j.at("beta").get<double>();
    config.mu = j.at("mu").get<double>();
    config.lambda = j.at("lambda").get<double>();
    config.gamma = j.at("gamma").get<double>();
    config.subspace_dim = j.at("dim").get<int>();
    config.max_iters = j.at("iters").get<int>();
    if (!j.at("ridge").is_null()) config.ridge = j.at("ridge").get<double>();
    config.classifier = parse_classifier(j.at("classifier").get<std::string>());
    config.convergence = parse_convergence(j.at("convergence").get<std::string>());
    config.stability_threshold = j.at("stability_threshold").get<double>();
    config.conditional_alignment = j.at("conditional_alignment").get<bool>();
    config.zero_self_similarity = j.at("zero_self_similarity").get<bool>();
    config.graph_threads = j.at("graph_threads").get<int>();
    config.seed = j.at("seed").get<std::uint64_t>();
    return config;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string field = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        fields.push_back(std::move(field));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument(path + ": cannot open for digest");
    std::uint64_t hash = 1469598103934665603ull;  // FNV-1a 64 offset basis
    char buffer[1 << 16];
    while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 1099511628211ull;
        }
        if (got < static_cast<std::streamsize>(sizeof buffer)) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

json RunManifest::to_json() const {
    json j;
    j["artifact"] = {{"name", artifact_name}, {"version", artifact_version}};
    j["created_utc"] = created_utc;
    j["preset"] = preset ? json(*preset) : json(nullptr);
    json inputs_json = json::array();
    for (const auto& input : inputs) {
        inputs_json.push_back({{"role", input.role}, {"path", input.path}, {"digest", input.digest}});
    }
    j["inputs"] = inputs_json;
    j["config"] = config_to_json(config);
    j["config"]["standardize"] = egda::to_string(standardize_mode);
    j["config"]["classes"] = class_count;
    j["config"]["bands"] = bands;
    j["results"] = {{"source_count", source_count},
                    {"target_count", target_count},
                    {"dim", dim},
                    {"subspace_dim", subspace_dim},
                    {"iterations", iterations},
                    {"accuracy", accuracy ? json(*accuracy) : json(nullptr)}};
    return j;
}

RunManifest RunManifest::from_json(const json& j) {
    RunManifest m;
    m.artifact_name = j.at("artifact").at("name").get<std::string>();
    m.artifact_version = j.at("artifact").at("version").get<std::string>();
    m.created_utc = j.at("created_utc").get<std::string>();
    if (!j.at("preset").is_null()) m.preset = j.at("preset").get<std::string>();
    for (const auto& input : j.at("inputs")) {
        m.inputs.push_back({input.at("role").get<std::string>(),
                            input.at("path").get<std::string>(),
                            input.at("digest").get<std::string>()});
    }
    m.config = config_from_json(j.at("config"));
    m.standardize_mode = parse_standardize(j.at("config").at("standardize").get<std::string>());
    m.class_count = j.at("config").at("classes").get<int>();
    m.bands = j.at("config").at("bands").get<int>();
    const auto& results = j.at("results");
    m.source_count = results.at("source_count").get<int>();
    m.target_count = results.at("target_count").get<int>();
    m.dim = results.at("dim").get<int>();
    m.subspace_dim = results.at("subspace_dim").get<int>();
    m.iterations = results.at("iterations").get<int>();
    if (!results.at("accuracy").is_null()) m.accuracy = results.at("accuracy").get<double>();
    return m;
}

json report_to_json(const AdaptationReport& report,
                    const std::optional<ImportanceProfile>& importance) {
    json j;
    j["predictions"] = std::vector<int>(report.predictions.data(),
                                        report.predictions.data() + report.predictions.size());
    j["iterations_run"] = report.iterations_run;
    j["objective_trace"] = report.objective_trace;
    j["label_change_trace"] = report.label_change_trace;

    json projection;
    projection["eigenvalues"] = std::vector<double>(
        report.projection.eigenvalues.data(),
        report.projection.eigenvalues.data() + report.projection.eigenvalues.size());
    json rows = json::array();
    for (Eigen::Index r = 0; r < report.projection.a.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < report.projection.a.cols(); ++c)
            row.push_back(report.projection.a(r, c));
        rows.push_back(std::move(row));
    }
    projection["a"] = std::move(rows);
    j["projection"] = std::move(projection);

    j["accuracy"] = report.accuracy ? json(*report.accuracy) : json(nullptr);
    if (report.confusion) {
        json confusion = json::array();
        for (Eigen::Index r = 0; r < report.confusion->rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < report.confusion->cols(); ++c)
                row.push_back((*report.confusion)(r, c));
            confusion.push_back(std::move(row));
        }
        j["confusion"] = std::move(confusion);
    } else {
        j["confusion"] = json(nullptr);
    }

    if (importance) {
        auto vec = [](const Eigen::VectorXd& v) {
            return std::vector<double>(v.data(), v.data() + v.size());
        };
        j["importance"] = {{"theta", vec(importance->theta)},
                           {"band", vec(importance->band)},
                           {"channel", vec(importance->channel)}};
    } else {
        j["importance"] = json(nullptr);
    }
    return j;
}

namespace {

FeatureLayout resolve_layout(const RunInputs& inputs, Eigen::Index d) {
    FeatureLayout layout;
    if (inputs.bands > 0) {
        if (d % inputs.bands != 0) {
            throw std::invalid_argument("--bands " + std::to_string(inputs.bands) +
                                        " does not divide feature dimension " + std::to_string(d));
        }
        layout.band_count = inputs.bands;
        layout.channel_count = static_cast<int>(d) / inputs.bands;
    } else if (d == 310) {
        layout.band_count = 5;  // the 62x5 DE layout
        layout.channel_count = 62;
    } else {
        layout.band_count = 1;  // feature-level ranking
        layout.channel_count = static_cast<int>(d);
    }
    return layout;
}

std::optional<std::vector<std::string>> resolve_channel_names(const RunInputs& inputs,
                                                              const FeatureLayout& layout) {
    if (inputs.channel_names_path) {
        std::ifstream in(*inputs.channel_names_path);
        if (!in) throw std::invalid_argument(*inputs.channel_names_path + ": cannot open");
        std::vector<std::string> names;
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty()) names.push_back(line);
        }
        if (static_cast<int>(names.size()) != layout.channel_count) {
            throw std::invalid_argument(*inputs.channel_names_path + ": got " +
                                        std::to_string(names.size()) + " names for " +
                                        std::to_string(layout.channel_count) + " channels");
        }
        return names;
    }
    if (layout.channel_count == 62) return seed62_channel_names();
    return std::nullopt;
}

struct LoadedPair {
    DomainDataset source;
    DomainDataset target;
};

LoadedPair load_pair(const RunInputs& inputs) {
    DomainDataset source =
        load_dataset(inputs.source_path, inputs.source_labels_path, inputs.class_count);
    DomainDataset target =
        load_dataset(inputs.target_path, inputs.target_labels_path, inputs.class_count);
    auto [s, t] = standardize(source, target, inputs.standardize_mode);
    return {std::move(s), std::move(t)};
}

}  // namespace

RunArtifacts execute_adaptation(const RunInputs& inputs,
                                const EgdaConfig& config,
                                const std::optional<std::string>& preset,
                                const std::filesystem::path& out_dir) {
    config.validate();
    LoadedPair pair = load_pair(inputs);

    RunManifest manifest;
    manifest.artifact_name = kArtifactName;
    manifest.artifact_version = kArtifactVersion;
    manifest.created_utc = now_utc_iso8601();
    manifest.preset = preset;
    manifest.inputs.push_back({"source", inputs.source_path, file_digest(inputs.source_path)});
    manifest.inputs.push_back(
        {"source_labels", inputs.source_labels_path, file_digest(inputs.source_labels_path)});
    manifest.inputs.push_back({"target", inputs.target_path, file_digest(inputs.target_path)});
    if (inputs.target_labels_path) {
        manifest.inputs.push_back(
            {"target_labels", *inputs.target_labels_path, file_digest(*inputs.target_labels_path)});
    }
    manifest.config = config;
    manifest.standardize_mode = inputs.standardize_mode;
    manifest.class_count = inputs.class_count;
    manifest.bands = inputs.bands;

    RunArtifacts artifacts;
    artifacts.report = run_egda(pair.source, pair.target, config);

    const FeatureLayout layout = resolve_layout(inputs, pair.source.dim());
    const auto names = resolve_channel_names(inputs, layout);
    const ImportanceProfile profile = importance_profile(artifacts.report.projection.a, layout);

    manifest.source_count = static_cast<int>(pair.source.size());
    manifest.target_count = static_cast<int>(pair.target.size());
    manifest.dim = static_cast<int>(pair.source.dim());
    manifest.subspace_dim = static_cast<int>(artifacts.report.projection.a.cols());
    manifest.iterations = artifacts.report.iterations_run;
    manifest.accuracy = artifacts.report.accuracy;

    std::filesystem::create_directories(out_dir);
    artifacts.predictions_csv = out_dir / "predictions.csv";
    artifacts.report_json = out_dir / "report.json";
    artifacts.importance_csv = out_dir / "importance.csv";
    artifacts.manifest_json = out_dir / "manifest.json";

    {
        std::ofstream out(artifacts.predictions_csv);
        for (Eigen::Index i = 0; i < artifacts.report.predictions.size(); ++i)
            out << artifacts.report.predictions(i) << "\n";
        if (!out) throw std::runtime_error(artifacts.predictions_csv.string() + ": write failed");
    }
    {
        std::ofstream out(artifacts.report_json);
        out << report_to_json(artifacts.report, profile).dump(2) << "\n";
        if (!out) throw std::runtime_error(artifacts.report_json.string() + ": write failed");
    }
    {
        std::ofstream out(artifacts.importance_csv);
        write_rank_csv(out, rank_report(profile, names, layout.channel_count));
        if (!out) throw std::runtime_error(artifacts.importance_csv.string() + ": write failed");
    }
    {
        std::ofstream out(artifacts.manifest_json);
        out << manifest.to_json().dump(2) << "\n";
        if (!out) throw std::runtime_error(artifacts.manifest_json.string() + ": write failed");
    }
    return artifacts;
}

std::vector<SweepTask> load_tasks_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(path + ": cannot open tasks file");
    std::vector<SweepTask> tasks;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        if (!header_seen) {
            header_seen = true;  // first data line is the header
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            throw std::invalid_argument(path + ": expected 6 fields per task row, got " +
                                        std::to_string(fields.size()));
        }
        SweepTask task;
        task.name = fields[0];
        task.inputs.source_path = fields[1];
        task.inputs.source_labels_path = fields[2];
        task.inputs.target_path = fields[3];
        if (!fields[4].empty()) task.inputs.target_labels_path = fields[4];
        task.inputs.class_count = std::stoi(fields[5]);
        tasks.push_back(std::move(task));
    }
    if (tasks.empty()) throw std::invalid_argument(path + ": no tasks");
    return tasks;
}

SweepGrid load_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(path + ": cannot open grid file");
    SweepGrid grid;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ": expected name=v1,v2,... got '" + line + "'");
        const std::string name = line.substr(0, eq);
        std::vector<double> values;
        for (const auto& field : split_csv_line(line.substr(eq + 1))) {
            if (field.empty())
                throw std::invalid_argument(path + ": empty value in line '" + line + "'");
            values.push_back(std::stod(field));
        }
        if (values.empty()) throw std::invalid_argument(path + ": no values for " + name);
        if (name == "alpha") grid.alpha = values;
        else if (name == "beta") grid.beta = values;
        else if (name == "mu") grid.mu = values;
        else if (name == "lambda") grid.lambda = values;
        else if (name == "gamma") grid.gamma = values;
        else if (name == "dim") {
            grid.dim.clear();
            for (double v : values) grid.dim.push_back(static_cast<int>(v));
        } else {
            throw std::invalid_argument(path + ": unknown grid parameter '" + name + "'");
        }
    }
    return grid;
}

std::vector<SweepRow> run_sweep(const std::vector<SweepTask>& tasks,
                                const SweepGrid& grid,
                                const EgdaConfig& base_config,
                                int jobs) {
    if (jobs < 1) throw std::invalid_argument("run_sweep: jobs must be >= 1");

    struct Job {
        std::size_t task_idx;
        EgdaConfig config;
    };
    std::vector<Job> job_list;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        for (double alpha : grid.alpha)
            for (double beta : grid.beta)
                for (double mu : grid.mu)
                    for (double lambda : grid.lambda)
                        for (double gamma : grid.gamma)
                            for (int dim : grid.dim) {
                                EgdaConfig config = base_config;
                                config.alpha = alpha;
                                config.beta = beta;
                                config.mu = mu;
                                config.lambda = lambda;
                                config.gamma = gamma;
                                config.subspace_dim = dim;
                                job_list.push_back({t, config});
                            }
    }

    // Datasets are shared per task; load each once up front.
    std::vector<std::optional<LoadedPair>> loaded(tasks.size());
    std::vector<std::string> load_errors(tasks.size());
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        try {
            loaded[t] = load_pair(tasks[t].inputs);
        } catch (const std::exception& err) {
            load_errors[t] = err.what();
        }
    }

    std::vector<SweepRow> rows(job_list.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= job_list.size()) return;
            const Job& job = job_list[i];
            SweepRow& row = rows[i];
            row.task = tasks[job.task_idx].name;
            row.alpha = job.config.alpha;
            row.beta = job.config.beta;
            row.mu = job.config.mu;
            row.lambda = job.config.lambda;
            row.gamma = job.config.gamma;
            row.dim = job.config.subspace_dim;
            if (!loaded[job.task_idx]) {
                row.status = "error";
                continue;
            }
            const auto start = std::chrono::steady_clock::now();
            try {
                const LoadedPair& pair = *loaded[job.task_idx];
                AdaptationReport report = run_egda(pair.source, pair.target, job.config);
                row.iterations = report.iterations_run;
                row.accuracy = report.accuracy;
                row.status = "ok";
            } catch (const std::exception&) {
                row.status = "error";
            }
            row.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "task,alpha,beta,mu,lambda,gamma,dim,accuracy,iterations,seconds,status\n";
    char buffer[64];
    for (const auto& row : rows) {
        out << row.task << ',';
        std::snprintf(buffer, sizeof buffer, "%g,%g,%g,%g,%g,%d,", row.alpha, row.beta, row.mu,
                      row.lambda, row.gamma, row.dim);
        out << buffer;
        if (row.accuracy) {
            std::snprintf(buffer, sizeof buffer, "%.6f", *row.accuracy);
            out << buffer;
        }
        std::snprintf(buffer, sizeof buffer, ",%d,%.3f,", row.iterations, row.seconds);
        out << buffer << row.status << '\n';
    }
}

}  // namespace egda
