#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rfmseg/config.hpp"

namespace rfmseg {

struct AlgorithmOutcome {
    Algorithm algorithm = Algorithm::KMeans;
    bool ok = false;
    std::string error;
    std::uint64_t seed = 0;
    std::size_t rows = 0;
    std::size_t n_clusters = 0;
    std::size_t noise = 0;
    std::size_t iterations = 0;
    /// Noise points left out.
    std::optional<double> silhouette;
    /// Noise points scored as one more cluster; DBSCAN only.
    std::optional<double> silhouette_noise_as_cluster;
    std::string silhouette_error;
    std::map<std::string, double> diagnostics;
};

/// What a pipeline run did and wrote. The embedded config (with absolute
/// paths) is enough to repeat the run.
struct RunManifest {
    PipelineConfig config;
    std::vector<Stage> completed_stages;
    std::vector<std::pair<std::string, std::size_t>> row_counts;
    std::vector<std::pair<std::string, double>> stage_seconds;
    std::vector<AlgorithmOutcome> algorithms;
    std::optional<std::size_t> elbow_chosen_k;
    /// Paths relative to the output directory, in write order.
    std::vector<std::string> artifacts;
    std::vector<std::pair<std::string, std::uint64_t>> seeds;
    std::vector<std::string> notes;
    std::vector<std::string> failures;

    bool completed(Stage s) const;
    bool has_artifact(std::string_view rel) const;
    const AlgorithmOutcome* outcome(Algorithm a) const;
    /// 0 when everything ran, 4 after an algorithm failure.
    int exit_code() const { return failures.empty() ? 0 : 4; }
};

/// Runs the configured stages in order: clean, RFM and segments, feature
/// matrix, per-algorithm scaling/PCA and clustering, silhouette, elbow and
/// k-distance, plot data. Writes every artifact under config.output and
/// finishes with manifest.json.
///
/// Throws ConfigError before touching the disk when the config is invalid
/// and DataError/ParseError when the input cannot be read or nothing
/// survives cleaning. A failing clusterer does not stop the run: its error
/// goes to the manifest and exit_code() becomes 4.
RunManifest run_pipeline(const PipelineConfig& config);

/// Writes `manifest.json` into the run's output directory.
void write_manifest(RunManifest& m);
/// Reads a manifest.json back. Timings and notes are restored; the config
/// is re-parsed from its embedded key-value text.
RunManifest read_manifest(const std::filesystem::path& file);

/// Maps an exception from the pipeline to a process exit code: 2 for
/// configuration errors, 3 for data errors, 4 for algorithm failures and
/// 1 for anything else.
int exit_code_for(const std::exception& e);

}  // namespace rfmseg
