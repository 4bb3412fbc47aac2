// rfmseg: command-line front end for the segmentation pipeline.
//
//   rfmseg pipeline --config configs/default.conf --input data.csv --out run1
//   rfmseg plotdata --out run1 --figure fig4
//
// Exit codes: 0 ok, 2 bad configuration, 3 bad input data, 4 a clusterer
// failed (partial artifacts and the manifest are kept).

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rfmseg/config.hpp"
#include "rfmseg/error.hpp"
#include "rfmseg/pipeline.hpp"
#include "rfmseg/plotdata.hpp"

namespace {

struct Options {
    std::string config;
    std::string input;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string algo;
    std::vector<std::string> overrides;
    std::string figure = "all";
};

rfmseg::PipelineConfig build_config(const Options& o) {
    rfmseg::PipelineConfig cfg;
    if (!o.config.empty()) cfg = rfmseg::load_config(o.config);
    if (!o.input.empty()) cfg.input = o.input;
    if (!o.out.empty()) cfg.output = o.out;
    if (o.seed) cfg.seed = *o.seed;
    if (!o.algo.empty()) cfg.set("algorithms", o.algo);
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw rfmseg::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

void report(const rfmseg::RunManifest& m) {
    for (const auto& [name, n] : m.row_counts) std::cout << name << ": " << n << '\n';
    for (const auto& o : m.algorithms) {
        std::cout << rfmseg::to_string(o.algorithm) << ": ";
        if (!o.ok) {
            std::cout << "FAILED " << o.error << '\n';
            continue;
        }
        std::cout << o.n_clusters << " clusters";
        if (o.noise) std::cout << ", " << o.noise << " noise";
        if (o.silhouette) std::cout << ", silhouette " << *o.silhouette;
        if (o.silhouette_noise_as_cluster) std::cout << " (noise as cluster " << *o.silhouette_noise_as_cluster << ')';
        if (!o.silhouette_error.empty()) std::cout << ", silhouette n/a: " << o.silhouette_error;
        std::cout << '\n';
    }
    if (m.elbow_chosen_k) std::cout << "elbow chosen k: " << *m.elbow_chosen_k << '\n';
    std::cout << "wrote " << m.artifacts.size() << " files to " << m.config.output.string() << '\n';
}

int run_stages(const Options& o, const std::vector<rfmseg::Stage>& stages) {
    auto cfg = build_config(o);
    if (!stages.empty()) {
        cfg.stages = {stages.begin(), stages.end()};
        if (cfg.runs(rfmseg::Stage::Cluster) && cfg.level == rfmseg::FeatureLevel::Customer) {
            cfg.stages.insert(rfmseg::Stage::Rfm);
        }
    }
    auto m = rfmseg::run_pipeline(cfg);
    report(m);
    return m.exit_code();
}

int run_plotdata(const Options& o) {
    const std::filesystem::path dir = o.out.empty() ? std::filesystem::path("out") : std::filesystem::path(o.out);
    auto m = rfmseg::read_manifest(dir / "manifest.json");
    // The run may have been moved since it was written.
    m.config.output = std::filesystem::absolute(dir).lexically_normal();
    const auto ids = o.figure == "all" ? rfmseg::plot_figure_ids() : std::vector<std::string>{o.figure};
    std::size_t written = 0;
    for (const auto& id : ids) {
        try {
            std::cout << rfmseg::emit_plot_data(m, id).string() << '\n';
            ++written;
        } catch (const rfmseg::ConfigError& e) {
            if (o.figure != "all") throw;
            std::cerr << "skipped " << id << ": " << e.what() << '\n';
        }
    }
    rfmseg::write_manifest(m);
    return written > 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RFM customer segmentation and clustering toolkit"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&o](CLI::App* sub, bool pipeline_flags) {
        sub->add_option("--out", o.out, "Output directory");
        if (!pipeline_flags) return;
        sub->add_option("--config", o.config, "Key-value config file")->check(CLI::ExistingFile);
        sub->add_option("--input", o.input, "Ledger CSV");
        sub->add_option("--seed", o.seed, "Seed for every randomised step");
        sub->add_option("--algo", o.algo, "kmeans, gmm, dbscan, birch, agglo or all (comma-separated)");
        sub->add_option("--set", o.overrides, "Extra key=value config overrides")->take_all();
    };

    using rfmseg::Stage;
    struct Sub {
        const char* name;
        const char* help;
        std::vector<Stage> stages;
    };
    const std::vector<Sub> subs = {
        {"clean", "Parse and clean the ledger", {Stage::Clean}},
        {"rfm", "Clean, then compute RFM scores and segments", {Stage::Clean, Stage::Rfm}},
        {"cluster", "Clean, build features and run the clusterers", {Stage::Clean, Stage::Cluster}},
        {"evaluate", "Cluster, then score silhouettes, elbow and k-distance",
         {Stage::Clean, Stage::Cluster, Stage::Evaluate}},
        {"pipeline", "Run the stages listed in the config (all by default)", {}},
    };
    std::vector<std::pair<CLI::App*, const Sub*>> handles;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        common(sub, true);
        handles.emplace_back(sub, &s);
    }
    auto* plot = app.add_subcommand("plotdata", "Write plot-ready CSVs from a finished run");
    common(plot, false);
    plot->add_option("--figure", o.figure, "fig3, fig4, fig5 .. fig9, fig7_kdistance or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (plot->parsed()) return run_plotdata(o);
        for (const auto& [sub, s] : handles)
            if (sub->parsed()) return run_stages(o, s->stages);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return rfmseg::exit_code_for(e);
    }
    return 1;
}
