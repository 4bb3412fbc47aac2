#include "rfmseg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "json_codec.hpp"
#include "rfmseg/clustering_result.hpp"
#include "rfmseg/error.hpp"
#include "rfmseg/eval.hpp"
#include "rfmseg/numeric.hpp"
#include "rfmseg/plotdata.hpp"
#include "rfmseg/serialize.hpp"

namespace rfmseg {

using detail::Json;

bool RunManifest::completed(Stage s) const {
    return std::find(completed_stages.begin(), completed_stages.end(), s) != completed_stages.end();
}

bool RunManifest::has_artifact(std::string_view rel) const {
    return std::find(artifacts.begin(), artifacts.end(), rel) != artifacts.end();
}

const AlgorithmOutcome* RunManifest::outcome(Algorithm a) const {
    for (const auto& o : algorithms)
        if (o.algorithm == a) return &o;
    return nullptr;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const DataError*>(&e)) return 3;
    if (dynamic_cast<const AlgorithmError*>(&e)) return 4;
    return 1;
}

namespace {

class StageClock {
public:
    explicit StageClock(RunManifest& m, std::string name)
        : m_(m), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~StageClock() {
        const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
        m_.stage_seconds.emplace_back(name_, d.count());
    }
    StageClock(const StageClock&) = delete;
    StageClock& operator=(const StageClock&) = delete;

private:
    RunManifest& m_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

void write_artifact(RunManifest& m, const std::string& rel, const std::function<void(std::ostream&)>& body) {
    const auto path = m.config.output / rel;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    body(out);
    out.flush();
    if (!out) throw DataError("failed writing '" + path.string() + "'");
    if (!m.has_artifact(rel)) m.artifacts.push_back(rel);
}

void write_json(RunManifest& m, const std::string& rel, const Json& j) {
    write_artifact(m, rel, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

// Scaled (and optionally projected) input for one clusterer.
struct Prepared {
    FeatureMatrix matrix;
    Json preprocessing;
};

Prepared prepare(const FeatureMatrix& features, const Preprocessing& p) {
    Prepared out;
    switch (p.scaler) {
        case ScalingKind::Raw: out.matrix = features; break;
        case ScalingKind::MinMax: out.matrix = minmax_scale(features); break;
        case ScalingKind::ZScore: out.matrix = standard_scale(features); break;
    }
    out.preprocessing["scaling"] = detail::json_of(out.matrix.scaling);
    out.preprocessing["columns"] = out.matrix.column_names;
    if (p.pca_components > 0) {
        auto pca = pca_fit_transform(out.matrix, p.pca_components);
        out.preprocessing["pca"] = detail::json_of(pca.model);
        out.matrix = std::move(pca.scores);
    }
    return out;
}

Json params_json(const PipelineConfig& c, Algorithm a) {
    Json j;
    switch (a) {
        case Algorithm::KMeans:
            j["k"] = c.kmeans.k;
            j["init"] = to_string(c.kmeans.init);
            j["max_iter"] = c.kmeans.max_iter;
            j["tol"] = c.kmeans.tol;
            break;
        case Algorithm::Gmm:
            j["k"] = c.gmm.k;
            j["max_iter"] = c.gmm.max_iter;
            j["tol"] = c.gmm.tol;
            j["reg"] = c.gmm.reg;
            break;
        case Algorithm::Dbscan:
            j["eps"] = c.dbscan.eps;
            j["min_samples"] = c.dbscan.min_samples;
            break;
        case Algorithm::Birch:
            j["threshold"] = c.birch.threshold;
            j["branching"] = c.birch.branching;
            j["n_clusters"] = c.birch.n_clusters;
            break;
        case Algorithm::Agglomerative:
            j["n_clusters"] = c.agglo_clusters;
            j["linkage"] = to_string(c.agglo_linkage);
            break;
    }
    const auto& p = c.preprocessing.at(a);
    j["scaler"] = to_string(p.scaler);
    j["pca"] = p.pca_components;
    return j;
}

struct FitOutput {
    ClusteringResult result;
    Json model;
};

FitOutput fit_one(const PipelineConfig& c, Algorithm a, const Matrix& x, std::uint64_t seed) {
    FitOutput out;
    switch (a) {
        case Algorithm::KMeans: {
            auto p = c.kmeans;
            p.seed = seed;
            auto f = kmeans_fit(x, p);
            out.model = detail::json_of(f.model);
            out.model["inertia_history"] = f.inertia_history;
            out.result = std::move(f.result);
            break;
        }
        case Algorithm::Gmm: {
            auto p = c.gmm;
            p.seed = seed;
            auto f = gmm_fit(x, p);
            out.model = detail::json_of(f.model);
            out.model["log_likelihood_history"] = f.log_likelihood_history;
            out.result = std::move(f.result);
            break;
        }
        case Algorithm::Dbscan: {
            out.result = dbscan_fit(x, c.dbscan);
            out.model["eps"] = c.dbscan.eps;
            out.model["min_samples"] = c.dbscan.min_samples;
            out.model["n_clusters"] = out.result.n_clusters;
            out.model["noise"] = out.result.noise_count();
            break;
        }
        case Algorithm::Birch: {
            auto f = birch_fit(x, c.birch);
            out.model = detail::json_of(f);
            out.result = std::move(f.result);
            break;
        }
        case Algorithm::Agglomerative: {
            auto f = agglomerative_fit(x, c.agglo_clusters, c.agglo_linkage, c.agglo_max_table_mb << 20);
            out.model = detail::json_of(f);
            out.model["linkage"] = to_string(c.agglo_linkage);
            out.result = std::move(f.result);
            break;
        }
    }
    out.result.seed = seed;
    return out;
}

Json outcome_json(const AlgorithmOutcome& o) {
    Json j;
    j["algorithm"] = to_string(o.algorithm);
    j["ok"] = o.ok;
    if (!o.ok) j["error"] = o.error;
    j["seed"] = o.seed;
    j["rows"] = o.rows;
    if (o.ok) {
        j["n_clusters"] = o.n_clusters;
        j["noise"] = o.noise;
        j["iterations"] = o.iterations;
        j["silhouette"] = o.silhouette ? Json(*o.silhouette) : Json(nullptr);
        if (o.algorithm == Algorithm::Dbscan) {
            j["silhouette_noise_as_cluster"] =
                o.silhouette_noise_as_cluster ? Json(*o.silhouette_noise_as_cluster) : Json(nullptr);
        }
        if (!o.silhouette_error.empty()) j["silhouette_error"] = o.silhouette_error;
        j["diagnostics"] = o.diagnostics;
    }
    return j;
}

AlgorithmOutcome outcome_from_json(const Json& j) {
    AlgorithmOutcome o;
    o.algorithm = parse_algorithm(j.at("algorithm").get<std::string>()).value_or(Algorithm::KMeans);
    o.ok = j.at("ok").get<bool>();
    o.error = j.value("error", std::string{});
    o.seed = j.value("seed", std::uint64_t{0});
    o.rows = j.value("rows", std::size_t{0});
    o.n_clusters = j.value("n_clusters", std::size_t{0});
    o.noise = j.value("noise", std::size_t{0});
    o.iterations = j.value("iterations", std::size_t{0});
    if (j.contains("silhouette") && j["silhouette"].is_number()) o.silhouette = j["silhouette"].get<double>();
    if (j.contains("silhouette_noise_as_cluster") && j["silhouette_noise_as_cluster"].is_number()) {
        o.silhouette_noise_as_cluster = j["silhouette_noise_as_cluster"].get<double>();
    }
    o.silhouette_error = j.value("silhouette_error", std::string{});
    if (j.contains("diagnostics")) o.diagnostics = j["diagnostics"].get<std::map<std::string, double>>();
    return o;
}

std::string cleaning_note(const CleaningReport& r, const CleanConfig& c) {
    std::ostringstream s;
    s << "cleaning: " << r.rows_in << " rows in, " << r.nulls_removed() << " without a customer id, "
      << r.negatives_removed << " with non-positive quantity, leaving " << r.rows_after_negative_drop
      << " rows before duplicate removal; ";
    if (c.deduplicate) {
        s << r.duplicates_removed << " exact duplicate rows then removed, " << r.rows_after_dedup << " rows kept";
    } else {
        s << "duplicate removal disabled";
    }
    return s.str();
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config) {
    config.validate();

    RunManifest m;
    m.config = config;
    m.config.input = std::filesystem::absolute(config.input).lexically_normal();
    m.config.output = std::filesystem::absolute(config.output).lexically_normal();
    const PipelineConfig& c = m.config;

    Json report;

    // Read before creating anything so a bad input leaves no artifacts.
    std::vector<TransactionRecord> raw;
    {
        StageClock clock(m, "read");
        raw = read_transactions(c.input, c.parse_config());
    }
    std::filesystem::create_directories(c.output);

    // clean
    CleanResult cleaned;
    std::vector<InvoiceSummary> invoices;
    {
        StageClock clock(m, "clean");
        cleaned = clean(raw, c.clean);
        raw.clear();
        raw.shrink_to_fit();
        const auto& r = cleaned.report;
        m.row_counts = {{"rows_in", r.rows_in},
                        {"rows_after_null_drop", r.rows_after_null_drop},
                        {"rows_after_negative_drop", r.rows_after_negative_drop},
                        {"rows_after_dedup", r.rows_after_dedup}};
        m.notes.push_back(cleaning_note(r, c.clean));
        if (c.write_cleaned) {
            write_artifact(m, "cleaned.csv",
                           [&](std::ostream& o) { write_transactions(o, cleaned.records, c.parse_config()); });
        }
        write_json(m, "cleaning_report.json", detail::json_of(r));
        report["cleaning"] = detail::json_of(r);
        if (cleaned.records.empty()) throw DataError("no rows survive cleaning");

        invoices = aggregate_invoices(cleaned.records);
        m.row_counts.emplace_back("invoices", invoices.size());
        write_artifact(m, "invoices.csv", [&](std::ostream& o) { write_invoices_csv(o, invoices); });
        m.completed_stages.push_back(Stage::Clean);
    }

    // RFM and segments
    std::vector<CustomerRFM> customers;
    if (c.runs(Stage::Rfm)) {
        StageClock clock(m, "rfm");
        customers = compute_rfm(cleaned.records, c.rfm);
        if (customers.empty()) throw DataError("no customers with an id after cleaning");
        score_customers(customers, c.weights, c.thresholds);
        m.row_counts.emplace_back("customers", customers.size());
        write_artifact(m, "customers.csv", [&](std::ostream& o) { write_customers_csv(o, customers); });

        std::vector<Segment> segs;
        for (const auto& cu : customers) segs.push_back(cu.segment);
        const auto shares = segment_distribution(segs);
        write_json(m, "segments.json", detail::json_of(shares));

        Json rfm;
        rfm["customers"] = customers.size();
        rfm["reference"] = (c.rfm.reference ? *c.rfm.reference : latest_invoice_date(cleaned.records)).iso();
        rfm["segments"] = detail::json_of(shares);
        if (!c.calibration.empty()) {
            Json cal = Json::array();
            for (const auto& row : calibrate_scores(customers, c.calibration)) {
                Json j;
                j["customer_id"] = row.customer_id;
                j["expected"] = row.expected;
                j["actual"] = row.actual ? Json(*row.actual) : Json(nullptr);
                j["deviation"] = row.deviation;
                cal.push_back(std::move(j));
            }
            rfm["calibration"] = std::move(cal);
        }
        report["rfm"] = std::move(rfm);
        m.completed_stages.push_back(Stage::Rfm);
    }

    if (!c.runs(Stage::Cluster)) {
        write_json(m, "report.json", report);
        if (c.runs(Stage::PlotData)) {
            for (const auto& fig : plot_figure_ids()) {
                try {
                    emit_plot_data(m, fig);
                } catch (const ConfigError&) {
                }
            }
            m.completed_stages.push_back(Stage::PlotData);
        }
        write_manifest(m);
        return m;
    }

    // feature matrix
    FeatureMatrix features;
    {
        StageClock clock(m, "features");
        const FeatureSpec spec{c.features};
        features = c.level == FeatureLevel::Customer ? build_feature_matrix(customers, spec)
                                                     : build_feature_matrix(invoices, spec);
        m.row_counts.emplace_back("feature_rows", features.rows());
        Json f;
        f["level"] = c.level == FeatureLevel::Customer ? "customer" : "invoice";
        f["columns"] = features.column_names;
        f["rows"] = features.rows();
        report["features"] = std::move(f);
    }

    // cluster
    std::map<Algorithm, FeatureMatrix> inputs;
    std::map<Algorithm, ClusteringResult> results;
    Json algorithms_report = Json::array();
    for (Algorithm a : c.algorithms) {
        StageClock clock(m, "cluster:" + to_string(a));
        AlgorithmOutcome o;
        o.algorithm = a;
        o.seed = c.seed_for(a);
        o.rows = features.rows();
        m.seeds.emplace_back(to_string(a), o.seed);
        const std::string name = to_string(a);
        try {
            Prepared prep = prepare(features, c.preprocessing.at(a));
            write_artifact(m, "matrix_" + name + ".csv", [&](std::ostream& out) { write_matrix_csv(out, prep.matrix); });
            FitOutput fit = fit_one(c, a, prep.matrix.data, o.seed);
            check_label_invariants(fit.result, a == Algorithm::Dbscan);

            Json model;
            model["algorithm"] = name;
            model["parameters"] = params_json(c, a);
            model["seed"] = o.seed;
            model["preprocessing"] = std::move(prep.preprocessing);
            model["model"] = std::move(fit.model);
            write_json(m, "model_" + name + ".json", model);
            write_artifact(m, "labels_" + name + ".csv",
                           [&](std::ostream& out) { write_labels_csv(out, prep.matrix.row_ids, fit.result.labels); });

            o.ok = true;
            o.n_clusters = fit.result.n_clusters;
            o.noise = fit.result.noise_count();
            o.iterations = fit.result.iterations;
            o.diagnostics = fit.result.diagnostics;
            inputs.emplace(a, std::move(prep.matrix));
            results.emplace(a, std::move(fit.result));
        } catch (const std::exception& e) {
            if (dynamic_cast<const DataError*>(&e)) throw;
            o.ok = false;
            o.error = e.what();
            m.failures.push_back(name + ": " + e.what());
        }
        m.algorithms.push_back(std::move(o));
    }
    m.completed_stages.push_back(Stage::Cluster);

    // evaluate
    if (c.runs(Stage::Evaluate)) {
        StageClock clock(m, "evaluate");
        for (auto& o : m.algorithms) {
            if (!o.ok) continue;
            const Matrix& x = inputs.at(o.algorithm).data;
            const auto& labels = results.at(o.algorithm).labels;
            try {
                o.silhouette = silhouette(x, labels, NoisePolicy::Exclude).mean_score;
            } catch (const std::invalid_argument& e) {
                o.silhouette_error = e.what();
            }
            if (o.algorithm == Algorithm::Dbscan) {
                try {
                    o.silhouette_noise_as_cluster = silhouette(x, labels, NoisePolicy::AsCluster).mean_score;
                } catch (const std::invalid_argument& e) {
                    if (o.silhouette_error.empty()) o.silhouette_error = e.what();
                }
            }
        }

        if (c.runs(Algorithm::KMeans)) {
            const auto it = inputs.find(Algorithm::KMeans);
            Json elbow;
            try {
                const Matrix& x = it != inputs.end() ? it->second.data
                                                     : prepare(features, c.preprocessing.at(Algorithm::KMeans)).matrix.data;
                const std::size_t distinct = count_distinct_rows(x);
                std::vector<std::size_t> ks;
                for (std::size_t k = c.elbow_k_min; k <= c.elbow_k_max && k <= distinct; ++k) ks.push_back(k);
                const std::uint64_t seed0 = c.seed_for(Algorithm::KMeans);
                m.seeds.emplace_back("elbow", seed0);
                const auto curve = inertia_curve(x, ks, c.elbow_seeds, seed0, c.kmeans.init);
                write_artifact(m, "elbow.csv", [&](std::ostream& out) {
                    out << "k,inertia,best_seed\n";
                    for (std::size_t i = 0; i < curve.k_values.size(); ++i)
                        out << curve.k_values[i] << ',' << format_number(curve.inertias[i]) << ','
                            << curve.best_seeds[i] << '\n';
                });
                elbow["k_values"] = curve.k_values;
                elbow["inertias"] = curve.inertias;
                elbow["seeds_per_k"] = c.elbow_seeds;
                elbow["chosen_k"] = curve.chosen_k;
                if (curve.chosen_k > 0) m.elbow_chosen_k = curve.chosen_k;
            } catch (const std::invalid_argument& e) {
                elbow["error"] = e.what();
                m.notes.push_back(std::string("elbow curve not computed: ") + e.what());
            }
            report["elbow"] = std::move(elbow);
        }

        if (c.runs(Algorithm::Dbscan)) {
            const auto it = inputs.find(Algorithm::Dbscan);
            Json kd;
            const std::size_t k = c.effective_kdistance_k();
            kd["k"] = k;
            try {
                const Matrix& x = it != inputs.end() ? it->second.data
                                                     : prepare(features, c.preprocessing.at(Algorithm::Dbscan)).matrix.data;
                const auto dist = k_distance(x, k);
                write_artifact(m, "kdistance.csv", [&](std::ostream& out) {
                    out << "rank,distance\n";
                    for (std::size_t i = 0; i < dist.size(); ++i) out << i << ',' << format_number(dist[i]) << '\n';
                });
                kd["rows"] = dist.size();
                kd["median"] = dist[dist.size() / 2];
                kd["max"] = dist.back();
            } catch (const std::invalid_argument& e) {
                kd["error"] = e.what();
                m.notes.push_back(std::string("k-distance curve not computed: ") + e.what());
            }
            report["kdistance"] = std::move(kd);
        }
        m.completed_stages.push_back(Stage::Evaluate);
    }

    for (const auto& o : m.algorithms) {
        Json j = outcome_json(o);
        j["parameters"] = params_json(c, o.algorithm);
        algorithms_report.push_back(std::move(j));
    }
    report["algorithms"] = std::move(algorithms_report);
    write_json(m, "report.json", report);

    if (c.runs(Stage::PlotData)) {
        StageClock clock(m, "plotdata");
        for (const auto& fig : plot_figure_ids()) {
            try {
                emit_plot_data(m, fig);
            } catch (const ConfigError&) {
                // the figure's stage or algorithm was not run
            }
        }
        m.completed_stages.push_back(Stage::PlotData);
    }

    write_manifest(m);
    return m;
}

void write_manifest(RunManifest& m) {
    const std::string rel = "manifest.json";
    if (!m.has_artifact(rel)) m.artifacts.push_back(rel);

    Json j;
    j["status"] = m.failures.empty() ? "ok" : "failed";
    j["exit_code"] = m.exit_code();
    j["failures"] = m.failures;
    j["config_text"] = m.config.to_text();
    Json cfg = Json::object();
    for (const auto& [k, v] : m.config.entries()) cfg[k] = v;
    j["config"] = std::move(cfg);
    Json stages = Json::array();
    for (Stage s : m.completed_stages) stages.push_back(to_string(s));
    j["completed_stages"] = std::move(stages);
    Json counts = Json::object();
    for (const auto& [k, v] : m.row_counts) counts[k] = v;
    j["row_counts"] = std::move(counts);
    Json metrics = Json::array();
    for (const auto& o : m.algorithms) metrics.push_back(outcome_json(o));
    j["algorithms"] = std::move(metrics);
    if (m.elbow_chosen_k) j["elbow_chosen_k"] = *m.elbow_chosen_k;
    Json seconds = Json::array();
    for (const auto& [k, v] : m.stage_seconds) seconds.push_back(Json::array({k, v}));
    j["stage_seconds"] = std::move(seconds);
    Json seeds = Json::object();
    seeds["seed"] = m.config.seed;
    for (const auto& [k, v] : m.seeds) seeds[k] = v;
    j["seeds"] = std::move(seeds);
    j["notes"] = m.notes;
    j["artifacts"] = m.artifacts;

    const auto path = m.config.output / rel;
    std::filesystem::create_directories(m.config.output);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << j.dump(2) << '\n';
    if (!out) throw DataError("cannot write '" + path.string() + "'");
}

RunManifest read_manifest(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open manifest '" + file.string() + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("manifest '" + file.string() + "' is not valid JSON: " + e.what());
    }
    RunManifest m;
    try {
        m.config = parse_config_text(j.at("config_text").get<std::string>());
        for (const auto& s : j.at("completed_stages"))
            if (auto st = parse_stage(s.get<std::string>())) m.completed_stages.push_back(*st);
        for (const auto& [k, v] : j.at("row_counts").items()) m.row_counts.emplace_back(k, v.get<std::size_t>());
        for (const auto& a : j.at("algorithms")) m.algorithms.push_back(outcome_from_json(a));
        if (j.contains("elbow_chosen_k")) m.elbow_chosen_k = j["elbow_chosen_k"].get<std::size_t>();
        for (const auto& p : j.at("stage_seconds"))
            m.stage_seconds.emplace_back(p.at(0).get<std::string>(), p.at(1).get<double>());
        for (const auto& [k, v] : j.at("seeds").items())
            if (k != "seed") m.seeds.emplace_back(k, v.get<std::uint64_t>());
        m.notes = j.at("notes").get<std::vector<std::string>>();
        m.failures = j.at("failures").get<std::vector<std::string>>();
        m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("manifest '" + file.string() + "' is incomplete: " + e.what());
    }
    return m;
}

}  // namespace rfmseg
