#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rfmseg/agglomerative.hpp"
#include "rfmseg/birch.hpp"
#include "rfmseg/dataio.hpp"
#include "rfmseg/dbscan.hpp"
#include "rfmseg/features.hpp"
#include "rfmseg/gmm.hpp"
#include "rfmseg/kmeans.hpp"
#include "rfmseg/matrix.hpp"

namespace rfmseg {

enum class Algorithm { KMeans, Gmm, Dbscan, Birch, Agglomerative };

inline constexpr std::array<Algorithm, 5> kAllAlgorithms = {Algorithm::KMeans, Algorithm::Gmm, Algorithm::Dbscan,
                                                            Algorithm::Birch, Algorithm::Agglomerative};

/// Short names used in file names and on the command line:
/// kmeans, gmm, dbscan, birch, agglo.
std::string to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

enum class Stage { Clean, Rfm, Cluster, Evaluate, PlotData };

inline constexpr std::array<Stage, 5> kAllStages = {Stage::Clean, Stage::Rfm, Stage::Cluster, Stage::Evaluate,
                                                    Stage::PlotData};

std::string to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

enum class FeatureLevel { Customer, Invoice };

/// Scaler, then optional PCA, applied to the feature matrix before a clusterer.
struct Preprocessing {
    ScalingKind scaler = ScalingKind::MinMax;
    /// 0 leaves the scaled features as they are.
    std::size_t pca_components = 0;
};

struct PipelineConfig {
    std::filesystem::path input;
    std::filesystem::path output = "out";
    std::uint64_t seed = 42;

    std::string date_format{DatePattern::kDefault};
    char decimal_separator = '.';
    char delimiter = ',';

    CleanConfig clean;
    bool write_cleaned = true;

    RfmConfig rfm;
    RfmWeights weights;
    SegmentThresholds thresholds;
    /// Reference (customer id, score) pairs checked after scoring.
    std::vector<std::pair<std::string, double>> calibration;

    FeatureLevel level = FeatureLevel::Customer;
    std::vector<std::string> features = {"frequency", "monetary"};

    std::map<Algorithm, Preprocessing> preprocessing = {
        {Algorithm::KMeans, {ScalingKind::MinMax, 0}},
        {Algorithm::Gmm, {ScalingKind::ZScore, 2}},
        {Algorithm::Dbscan, {ScalingKind::ZScore, 0}},
        {Algorithm::Birch, {ScalingKind::MinMax, 0}},
        {Algorithm::Agglomerative, {ScalingKind::MinMax, 0}},
    };
    /// Per-algorithm seeds; algorithms without one use `seed`.
    std::map<Algorithm, std::uint64_t> seed_overrides;

    KMeansParams kmeans;
    GmmParams gmm;
    DbscanParams dbscan;
    BirchParams birch;
    std::size_t agglo_clusters = 3;
    Linkage agglo_linkage = Linkage::Ward;
    std::size_t agglo_max_table_mb = 2048;

    std::size_t elbow_k_min = 2;
    std::size_t elbow_k_max = 10;
    std::size_t elbow_seeds = 10;
    /// 0 means dbscan.min_samples.
    std::size_t kdistance_k = 0;

    std::set<Stage> stages = {kAllStages.begin(), kAllStages.end()};
    std::vector<Algorithm> algorithms = {kAllAlgorithms.begin(), kAllAlgorithms.end()};

    /// Applies one `key = value` setting. Throws ConfigError for unknown
    /// keys or values that do not parse.
    void set(std::string_view key, std::string_view value);

    /// Every setting as (key, value), in a fixed order. Feeding them back
    /// through set() reproduces this config.
    std::vector<std::pair<std::string, std::string>> entries() const;
    std::string to_text() const;

    /// Checks every parameter and that the input file exists. Throws
    /// ConfigError; nothing is read or written.
    void validate() const;

    bool runs(Stage s) const { return stages.count(s) != 0; }
    bool runs(Algorithm a) const;
    std::uint64_t seed_for(Algorithm a) const;
    std::size_t effective_kdistance_k() const;
    ParseConfig parse_config() const;
};

/// Parses `key = value` lines on top of `base`. Blank lines and lines
/// starting with '#' are skipped. Errors carry the line number.
PipelineConfig parse_config_text(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

}  // namespace rfmseg
