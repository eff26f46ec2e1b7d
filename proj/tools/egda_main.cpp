// Command-line front end: adaptation runs, ablation presets, synthetic
// benchmark generation and hyperparameter sweeps.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "egda/run_output.hpp"
#include "egda/version.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonRunFlags {
    egda::RunInputs inputs;
    egda::EgdaConfig config;
    std::string standardize = "zscore_joint";
    std::string classifier = "nn1";
    std::string convergence = "fixed_iters";
    double ridge = -1.0;  // < 0 keeps the automatic ridge
    std::string out_dir;
};

void add_io_flags(CLI::App* cmd, CommonRunFlags& flags) {
    cmd->add_option("--source", flags.inputs.source_path, "Source feature file (CSV or binary)")
        ->required();
    cmd->add_option("--source-labels", flags.inputs.source_labels_path, "Source label file")
        ->required();
    cmd->add_option("--target", flags.inputs.target_path, "Target feature file")->required();
    cmd->add_option("--target-labels", flags.inputs.target_labels_path,
                    "Target label file (evaluation only; never used during adaptation)");
    cmd->add_option("--classes", flags.inputs.class_count, "Number of classes")->required();
    cmd->add_option("--standardize", flags.standardize,
                    "Feature scaling: none, zscore_joint, unit_column")
        ->capture_default_str();
    cmd->add_option("--bands", flags.inputs.bands,
                    "Frequency bands of the feature layout (0 = infer: 5 when d=310, else 1)")
        ->capture_default_str();
    cmd->add_option("--channel-names", flags.inputs.channel_names_path,
                    "File with one channel name per line (default: bundled 62-channel montage "
                    "when the layout has 62 channels)");
    cmd->add_option("--out", flags.out_dir,
                    "Output directory (default: $EGDA_OUT_DIR)");
}

void add_config_flags(CLI::App* cmd, CommonRunFlags& flags) {
    cmd->add_option("--alpha", flags.config.alpha, "Distribution-alignment weight")
        ->capture_default_str();
    cmd->add_option("--beta", flags.config.beta, "Within-class scatter weight")
        ->capture_default_str();
    cmd->add_option("--mu", flags.config.mu, "Graph regularization weight")
        ->capture_default_str();
    cmd->add_option("--lambda", flags.config.lambda, "Projection regularization weight")
        ->capture_default_str();
    cmd->add_option("--gamma", flags.config.gamma, "Similarity smoothness (must be > 0)")
        ->capture_default_str();
    cmd->add_option("--dim", flags.config.subspace_dim,
                    "Subspace dimension (0 = min(d, 100))")
        ->capture_default_str();
    cmd->add_option("--iters", flags.config.max_iters, "Maximum iterations")
        ->capture_default_str();
    cmd->add_option("--ridge", flags.ridge, "Ridge added to Q (<0 = 1e-6 tr(Q)/d)");
    cmd->add_option("--classifier", flags.classifier, "Pseudo-label classifier (nn1)")
        ->capture_default_str();
    cmd->add_option("--convergence", flags.convergence,
                    "fixed_iters or label_stability")
        ->capture_default_str();
    cmd->add_option("--stability-threshold", flags.config.stability_threshold,
                    "Changed-label fraction at or below which label_stability stops")
        ->capture_default_str();
    cmd->add_flag("--zero-self-similarity", flags.config.zero_self_similarity,
                  "Force s_ii = 0 in the similarity graph");
    cmd->add_option("--graph-threads", flags.config.graph_threads,
                    "Threads for the row-wise graph update (result-invariant)")
        ->capture_default_str();
    cmd->add_option("--seed", flags.config.seed, "Seed echoed into the manifest")
        ->capture_default_str();
}

fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("EGDA_OUT_DIR"); env && *env) return env;
    throw std::invalid_argument("no output directory: pass --out or set EGDA_OUT_DIR");
}

void finalize_config(CommonRunFlags& flags) {
    flags.inputs.standardize_mode = egda::parse_standardize(flags.standardize);
    flags.config.classifier = egda::parse_classifier(flags.classifier);
    flags.config.convergence = egda::parse_convergence(flags.convergence);
    if (flags.ridge >= 0.0) flags.config.ridge = flags.ridge;
}

void apply_preset(const std::string& preset, egda::EgdaConfig& config) {
    if (preset == "egda") return;
    if (preset == "marginal_only") {  // TCA-like: marginal MMD only
        config.beta = 0.0;
        config.mu = 0.0;
        config.conditional_alignment = false;
    } else if (preset == "no_graph") {  // JDA-like: pseudo-labeled MMD, no graph term
        config.mu = 0.0;
    } else if (preset == "no_scatter") {
        config.beta = 0.0;
    } else {
        throw std::invalid_argument("unknown preset '" + preset + "'");
    }
}

int run_adaptation_command(CommonRunFlags& flags, const std::optional<std::string>& preset) {
    finalize_config(flags);
    const fs::path out_dir = resolve_out_dir(flags.out_dir);
    const auto artifacts = egda::execute_adaptation(flags.inputs, flags.config, preset, out_dir);
    std::cout << "wrote " << artifacts.manifest_json.parent_path().string() << " (iterations "
              << artifacts.report.iterations_run;
    if (artifacts.report.accuracy) std::cout << ", accuracy " << *artifacts.report.accuracy;
    std::cout << ")\n";
    return 0;
}

struct SynthFlags {
    int classes = 4;
    int dims = 10;
    int per_class = 100;
    double shift = 1.0;
    double angle = 0.2617993877991494;  // 15 degrees
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out_dir;
};

int run_synth(const SynthFlags& flags) {
    const fs::path out_dir = resolve_out_dir(flags.out_dir);
    // Shift along the normalized all-ones direction so ||shift|| is the flag.
    Eigen::VectorXd shift = Eigen::VectorXd::Constant(
        flags.dims, flags.shift / std::sqrt(static_cast<double>(flags.dims)));
    auto [source, target] = egda::generate_synthetic(flags.classes, flags.dims, flags.per_class,
                                                     shift, flags.angle, flags.seed);
    fs::create_directories(out_dir);
    const bool binary = flags.format == "bin";
    if (!binary && flags.format != "csv")
        throw std::invalid_argument("unknown format '" + flags.format + "' (csv or bin)");
    const char* ext = binary ? ".egda" : ".csv";
    auto save = [&](const egda::DomainDataset& dataset, const std::string& stem) {
        const auto features = out_dir / (stem + ext);
        if (binary)
            egda::save_features_binary(dataset.features, features.string());
        else
            egda::save_features_csv(dataset.features, features.string());
        egda::save_labels(*dataset.labels, (out_dir / (stem + "_labels.csv")).string());
    };
    save(source, "source");
    save(target, "target");
    std::cout << "wrote " << out_dir.string() << " (d=" << flags.dims << ", n="
              << flags.classes * flags.per_class << " per domain)\n";
    return 0;
}

struct SweepFlags {
    std::string grid_file;
    std::string tasks_file;
    std::string out_dir;
    int jobs = 1;
    CommonRunFlags base;  // reuse config flags for sweep defaults
};

int run_sweep_command(SweepFlags& flags) {
    finalize_config(flags.base);
    const fs::path out_dir = resolve_out_dir(flags.out_dir);
    const auto tasks = egda::load_tasks_file(flags.tasks_file);
    const auto grid = egda::load_grid_file(flags.grid_file);
    const auto rows = egda::run_sweep(tasks, grid, flags.base.config, flags.jobs);

    fs::create_directories(out_dir);
    const fs::path csv_path = out_dir / "sweep.csv";
    std::ofstream out(csv_path);
    egda::write_sweep_csv(out, rows);
    if (!out) throw std::runtime_error(csv_path.string() + ": write failed");

    std::size_t failed = 0;
    for (const auto& row : rows)
        if (row.status != "ok") ++failed;
    std::cout << "wrote " << csv_path.string() << " (" << rows.size() << " runs, " << failed
              << " failed)\n";
    return failed == rows.size() ? 2 : 0;  // nonzero only when every run failed
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-guided domain adaptation for cross-session EEG emotion recognition"};
    app.set_version_flag("--version", std::string(egda::kArtifactVersion));
    app.require_subcommand(1);

    CommonRunFlags adapt_flags;
    auto* adapt_cmd = app.add_subcommand("adapt", "Run adaptation on a source/target pair");
    add_io_flags(adapt_cmd, adapt_flags);
    add_config_flags(adapt_cmd, adapt_flags);

    CommonRunFlags ablate_flags;
    std::string preset = "egda";
    auto* ablate_cmd = app.add_subcommand("ablate", "Run a degenerate-term ablation preset");
    ablate_cmd->add_option("--preset", preset, "egda, marginal_only, no_graph, no_scatter")
        ->required();
    add_io_flags(ablate_cmd, ablate_flags);
    add_config_flags(ablate_cmd, ablate_flags);

    SynthFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic cross-session problem");
    synth_cmd->add_option("--classes", synth_flags.classes, "Number of classes (>= 2)")
        ->capture_default_str();
    synth_cmd->add_option("--dims", synth_flags.dims, "Feature dimension (>= 2)")
        ->capture_default_str();
    synth_cmd->add_option("--per-class", synth_flags.per_class, "Samples per class (>= 2)")
        ->capture_default_str();
    synth_cmd->add_option("--shift", synth_flags.shift, "Euclidean norm of the target translation")
        ->capture_default_str();
    synth_cmd->add_option("--angle", synth_flags.angle, "Plane rotation of the target, radians")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_flags.seed, "RNG seed")->capture_default_str();
    synth_cmd->add_option("--format", synth_flags.format, "csv or bin")->capture_default_str();
    synth_cmd->add_option("--out", synth_flags.out_dir, "Output directory (default: $EGDA_OUT_DIR)");

    SweepFlags sweep_flags;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a task x parameter-grid sweep");
    sweep_cmd->add_option("--grid-file", sweep_flags.grid_file, "Grid file (name=v1,v2,...)")
        ->required();
    sweep_cmd->add_option("--tasks-file", sweep_flags.tasks_file,
                          "Tasks CSV: task,source,source_labels,target,target_labels,classes")
        ->required();
    sweep_cmd->add_option("--jobs", sweep_flags.jobs, "Parallel runs")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_flags.out_dir, "Output directory (default: $EGDA_OUT_DIR)");
    add_config_flags(sweep_cmd, sweep_flags.base);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 1;  // usage problems exit 1, --help exits 0
    }

    try {
        if (adapt_cmd->parsed()) return run_adaptation_command(adapt_flags, std::nullopt);
        if (ablate_cmd->parsed()) {
            apply_preset(preset, ablate_flags.config);
            return run_adaptation_command(ablate_flags, preset);
        }
        if (synth_cmd->parsed()) return run_synth(synth_flags);
        if (sweep_cmd->parsed()) return run_sweep_command(sweep_flags);
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
