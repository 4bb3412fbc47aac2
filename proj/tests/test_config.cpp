#include <gtest/gtest.h>

#include <filesystem>

#include "rfmseg/config.hpp"
#include "rfmseg/error.hpp"

using namespace rfmseg;
namespace fs = std::filesystem;

namespace {

PipelineConfig runnable() {
    PipelineConfig c;
    c.input = RFMSEG_FIXTURE;
    c.output = fs::temp_directory_path() / "rfmseg_config_test";
    return c;
}

}  // namespace

TEST(Config, DefaultsValidateAgainstTheFixture) { EXPECT_NO_THROW(runnable().validate()); }

TEST(Config, EntriesRoundTripThroughText) {
    PipelineConfig c = runnable();
    c.set("seed", "7");
    c.set("algorithms", "gmm,kmeans");
    c.set("rfm.weights", "0.2, 0.3, 0.5");
    c.set("rfm.reference", "2011-12-10");
    c.set("rfm.calibration", "12346:0.06,12347:4.48");
    c.set("dbscan.eps", "0.25");
    c.set("agglo.linkage", "average");
    c.set("kmeans.seed", "11");
    c.set("gmm.pca", "0");
    c.set("delimiter", "tab");
    c.set("decimal_separator", ",");
    const PipelineConfig back = parse_config_text(c.to_text());
    EXPECT_EQ(back.to_text(), c.to_text());
    EXPECT_EQ(back.seed, 7u);
    EXPECT_EQ(back.seed_for(Algorithm::KMeans), 11u);
    EXPECT_EQ(back.seed_for(Algorithm::Gmm), 7u);
    EXPECT_EQ(back.delimiter, '\t');
    EXPECT_EQ(back.algorithms, (std::vector<Algorithm>{Algorithm::Gmm, Algorithm::KMeans}));
    EXPECT_EQ(back.rfm.reference, Timestamp::from_civil(2011, 12, 10));
    ASSERT_EQ(back.calibration.size(), 2u);
    EXPECT_EQ(back.calibration[1].first, "12347");
}

TEST(Config, CommentsAndBlankLinesAreIgnored) {
    const auto c = parse_config_text("# comment\n\n  kmeans.k = 4  \n");
    EXPECT_EQ(c.kmeans.k, 4u);
}

TEST(Config, ParseErrorsCarryTheLine) {
    try {
        parse_config_text("seed = 1\nkmeans.k = three\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_config_text("no equals sign"), ConfigError);
    EXPECT_THROW(parse_config_text("kmeans.colour = red"), ConfigError);
    EXPECT_THROW(parse_config_text("algorithms = kmeans,spectral"), ConfigError);
    EXPECT_THROW(parse_config_text("stages = clean,report"), ConfigError);
}

TEST(Config, ValidationRejects) {
    const auto rejects = [](const char* key, const char* value) {
        PipelineConfig c = runnable();
        c.set(key, value);
        EXPECT_THROW(c.validate(), ConfigError) << key << " = " << value;
    };
    rejects("kmeans.k", "0");
    rejects("gmm.k", "0");
    rejects("dbscan.eps", "0");
    rejects("dbscan.min_samples", "0");
    rejects("birch.threshold", "0");
    rejects("birch.branching", "1");
    rejects("agglo.n_clusters", "0");
    rejects("elbow.k_max", "1");
    rejects("rfm.weights", "0,0,0");
    rejects("rfm.thresholds", "1,2,3,4");
    rejects("features.columns", "line_count");
    rejects("kmeans.pca", "3");
    rejects("stages", "rfm,cluster");
    rejects("stages", "clean,rfm,evaluate");
    rejects("stages", "clean,cluster");
    rejects("input", "/definitely/not/here.csv");
    rejects("date_format", "%Q");
    rejects("decimal_separator", ",");  // same as the delimiter
}

TEST(Config, InvoiceLevelNeedsNoRfmStage) {
    PipelineConfig c = runnable();
    c.set("features.level", "invoice");
    c.set("features.columns", "line_count,invoice_total");
    c.set("stages", "clean,cluster");
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, KDistanceDefaultsToMinSamples) {
    PipelineConfig c;
    c.set("dbscan.min_samples", "7");
    EXPECT_EQ(c.effective_kdistance_k(), 7u);
    c.set("kdistance.k", "3");
    EXPECT_EQ(c.effective_kdistance_k(), 3u);
}

TEST(Config, CommittedConfigsParse) {
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(RFMSEG_CONFIG_DIR)) {
        if (entry.path().extension() != ".conf") continue;
        PipelineConfig c = load_config(entry.path());
        c.input = RFMSEG_FIXTURE;
        EXPECT_NO_THROW(c.validate()) << entry.path();
        ++n;
    }
    EXPECT_GE(n, 2u);
}

TEST(Config, DefaultConfigFileMatchesBuiltInDefaults) {
    PipelineConfig file = load_config(fs::path(RFMSEG_CONFIG_DIR) / "default.conf");
    PipelineConfig built;
    // calibration references are the only thing the file adds
    file.calibration.clear();
    EXPECT_EQ(file.to_text(), built.to_text());
}

TEST(Config, NamesRoundTrip) {
    for (Algorithm a : kAllAlgorithms) EXPECT_EQ(parse_algorithm(to_string(a)), a);
    for (Stage s : kAllStages) EXPECT_EQ(parse_stage(to_string(s)), s);
    EXPECT_FALSE(parse_algorithm("optics").has_value());
}
