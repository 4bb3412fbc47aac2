#include "rfmseg/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rfmseg/error.hpp"
#include "text_util.hpp"

namespace rfmseg {

using detail::format_double;
using detail::split_list;
using detail::trim;

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::KMeans: return "kmeans";
        case Algorithm::Gmm: return "gmm";
        case Algorithm::Dbscan: return "dbscan";
        case Algorithm::Birch: return "birch";
        case Algorithm::Agglomerative: break;
    }
    return "agglo";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (Algorithm a : kAllAlgorithms)
        if (to_string(a) == name) return a;
    return std::nullopt;
}

std::string to_string(Stage s) {
    switch (s) {
        case Stage::Clean: return "clean";
        case Stage::Rfm: return "rfm";
        case Stage::Cluster: return "cluster";
        case Stage::Evaluate: return "evaluate";
        case Stage::PlotData: break;
    }
    return "plotdata";
}

std::optional<Stage> parse_stage(std::string_view name) {
    for (Stage s : kAllStages)
        if (to_string(s) == name) return s;
    return std::nullopt;
}

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw ConfigError("config key '" + std::string(key) + "': cannot use '" + std::string(value) + "' (expected " +
                      std::string(expected) + ")");
}

double to_double(std::string_view key, std::string_view v) {
    if (auto d = detail::parse_double(v)) return *d;
    bad_value(key, v, "a number");
}

std::size_t to_count(std::string_view key, std::string_view v) {
    if (auto u = detail::parse_unsigned(v)) return static_cast<std::size_t>(*u);
    bad_value(key, v, "a non-negative integer");
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    bad_value(key, v, "true or false");
}

char to_char(std::string_view key, std::string_view v) {
    if (v == "tab" || v == "\\t") return '\t';
    if (v.size() != 1) bad_value(key, v, "a single character");
    return v[0];
}

std::string char_text(char c) { return c == '\t' ? "tab" : std::string(1, c); }

std::vector<double> to_doubles(std::string_view key, std::string_view v, std::size_t count) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
    if (out.size() != count) bad_value(key, v, std::to_string(count) + " comma-separated numbers");
    return out;
}

ScalingKind to_scaler(std::string_view key, std::string_view v) {
    for (ScalingKind k : {ScalingKind::Raw, ScalingKind::MinMax, ScalingKind::ZScore})
        if (to_string(k) == v) return k;
    bad_value(key, v, "raw, minmax or zscore");
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ',';
        out += s;
    }
    return out;
}

Timestamp to_reference(std::string_view key, std::string_view v) {
    for (const char* pattern : {"%Y-%m-%d %H:%M", "%Y-%m-%d"}) {
        try {
            return DatePattern(pattern).parse(v);
        } catch (const std::invalid_argument&) {
        }
    }
    bad_value(key, v, "YYYY-MM-DD or YYYY-MM-DD HH:MM");
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view raw) {
    const std::string_view v = trim(raw);

    if (key == "input") {
        input = std::string(v);
    } else if (key == "output") {
        output = std::string(v);
    } else if (key == "seed") {
        if (auto u = detail::parse_unsigned(v)) {
            seed = *u;
        } else {
            bad_value(key, v, "a non-negative integer");
        }
    } else if (key == "date_format") {
        date_format = std::string(v);
    } else if (key == "decimal_separator") {
        decimal_separator = to_char(key, v);
    } else if (key == "delimiter") {
        delimiter = to_char(key, v);
    } else if (key == "stages") {
        stages.clear();
        for (const auto& s : split_list(v)) {
            auto st = parse_stage(s);
            if (!st) bad_value(key, s, "clean, rfm, cluster, evaluate or plotdata");
            stages.insert(*st);
        }
    } else if (key == "algorithms") {
        algorithms.clear();
        for (const auto& s : split_list(v)) {
            if (s == "all") {
                algorithms.assign(kAllAlgorithms.begin(), kAllAlgorithms.end());
                continue;
            }
            auto a = parse_algorithm(s);
            if (!a) bad_value(key, s, "kmeans, gmm, dbscan, birch, agglo or all");
            if (!runs(*a)) algorithms.push_back(*a);
        }
    } else if (key == "clean.drop_missing_customer") {
        clean.drop_missing_customer = to_bool(key, v);
    } else if (key == "clean.drop_nonpositive_quantity") {
        clean.drop_nonpositive_quantity = to_bool(key, v);
    } else if (key == "clean.deduplicate") {
        clean.deduplicate = to_bool(key, v);
    } else if (key == "clean.write_cleaned") {
        write_cleaned = to_bool(key, v);
    } else if (key == "rfm.frequency_mode") {
        if (v == "lines") {
            rfm.frequency = FrequencyMode::Lines;
        } else if (v == "distinct_dates") {
            rfm.frequency = FrequencyMode::DistinctDates;
        } else {
            bad_value(key, v, "lines or distinct_dates");
        }
    } else if (key == "rfm.recency_mode") {
        if (v == "elapsed_days") {
            rfm.recency = RecencyMode::ElapsedDays;
        } else if (v == "calendar_days") {
            rfm.recency = RecencyMode::CalendarDays;
        } else {
            bad_value(key, v, "elapsed_days or calendar_days");
        }
    } else if (key == "rfm.reference") {
        if (v.empty() || v == "latest") {
            rfm.reference.reset();
        } else {
            rfm.reference = to_reference(key, v);
        }
    } else if (key == "rfm.weights") {
        const auto w = to_doubles(key, v, 3);
        weights.recency = w[0];
        weights.frequency = w[1];
        weights.monetary = w[2];
    } else if (key == "rfm.scale_divisor") {
        weights.scale_divisor = to_double(key, v);
    } else if (key == "rfm.thresholds") {
        const auto t = to_doubles(key, v, 4);
        thresholds = {t[0], t[1], t[2], t[3]};
    } else if (key == "rfm.calibration") {
        calibration.clear();
        for (const auto& item : split_list(v)) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) bad_value(key, item, "customer:score pairs");
            calibration.emplace_back(std::string(trim(std::string_view(item).substr(0, colon))),
                                     to_double(key, std::string_view(item).substr(colon + 1)));
        }
    } else if (key == "features.level") {
        if (v == "customer") {
            level = FeatureLevel::Customer;
        } else if (v == "invoice") {
            level = FeatureLevel::Invoice;
        } else {
            bad_value(key, v, "customer or invoice");
        }
    } else if (key == "features.columns") {
        features = split_list(v);
    } else if (key == "kmeans.k") {
        kmeans.k = to_count(key, v);
    } else if (key == "kmeans.init") {
        if (v == "kmeanspp") {
            kmeans.init = KMeansInit::KMeansPlusPlus;
        } else if (v == "random") {
            kmeans.init = KMeansInit::Random;
        } else {
            bad_value(key, v, "kmeanspp or random");
        }
    } else if (key == "kmeans.max_iter") {
        kmeans.max_iter = to_count(key, v);
    } else if (key == "kmeans.tol") {
        kmeans.tol = to_double(key, v);
    } else if (key == "gmm.k") {
        gmm.k = to_count(key, v);
    } else if (key == "gmm.max_iter") {
        gmm.max_iter = to_count(key, v);
    } else if (key == "gmm.tol") {
        gmm.tol = to_double(key, v);
    } else if (key == "gmm.reg") {
        gmm.reg = to_double(key, v);
    } else if (key == "dbscan.eps") {
        dbscan.eps = to_double(key, v);
    } else if (key == "dbscan.min_samples") {
        dbscan.min_samples = to_count(key, v);
    } else if (key == "birch.threshold") {
        birch.threshold = to_double(key, v);
    } else if (key == "birch.branching") {
        birch.branching = to_count(key, v);
    } else if (key == "birch.n_clusters") {
        birch.n_clusters = to_count(key, v);
    } else if (key == "agglo.n_clusters") {
        agglo_clusters = to_count(key, v);
    } else if (key == "agglo.linkage") {
        auto l = parse_linkage(v);
        if (!l) bad_value(key, v, "single, complete, average or ward");
        agglo_linkage = *l;
    } else if (key == "agglo.max_table_mb") {
        agglo_max_table_mb = to_count(key, v);
    } else if (key == "elbow.k_min") {
        elbow_k_min = to_count(key, v);
    } else if (key == "elbow.k_max") {
        elbow_k_max = to_count(key, v);
    } else if (key == "elbow.seeds") {
        elbow_seeds = to_count(key, v);
    } else if (key == "kdistance.k") {
        kdistance_k = to_count(key, v);
    } else {
        // <algo>.scaler, <algo>.pca, <algo>.seed
        const auto dot = key.find('.');
        const auto algo = dot == std::string_view::npos ? std::nullopt : parse_algorithm(key.substr(0, dot));
        const auto field = dot == std::string_view::npos ? std::string_view{} : key.substr(dot + 1);
        if (!algo) throw ConfigError("unknown config key '" + std::string(key) + "'");
        if (field == "scaler") {
            preprocessing[*algo].scaler = to_scaler(key, v);
        } else if (field == "pca") {
            preprocessing[*algo].pca_components = to_count(key, v);
        } else if (field == "seed") {
            if (v.empty()) {
                seed_overrides.erase(*algo);
            } else if (auto u = detail::parse_unsigned(v)) {
                seed_overrides[*algo] = *u;
            } else {
                bad_value(key, v, "a non-negative integer or nothing");
            }
        } else {
            throw ConfigError("unknown config key '" + std::string(key) + "'");
        }
    }
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::entries() const {
    std::vector<std::pair<std::string, std::string>> e;
    const auto add = [&e](std::string k, std::string v) { e.emplace_back(std::move(k), std::move(v)); };
    const auto count = [](std::size_t n) { return std::to_string(n); };
    const auto boolean = [](bool b) { return std::string(b ? "true" : "false"); };

    add("input", input.string());
    add("output", output.string());
    add("seed", std::to_string(seed));
    {
        std::vector<std::string> s;
        for (Stage st : kAllStages)
            if (runs(st)) s.push_back(to_string(st));
        add("stages", join(s));
    }
    {
        std::vector<std::string> a;
        for (Algorithm al : algorithms) a.push_back(to_string(al));
        add("algorithms", join(a));
    }
    add("date_format", date_format);
    add("decimal_separator", char_text(decimal_separator));
    add("delimiter", char_text(delimiter));

    add("clean.drop_missing_customer", boolean(clean.drop_missing_customer));
    add("clean.drop_nonpositive_quantity", boolean(clean.drop_nonpositive_quantity));
    add("clean.deduplicate", boolean(clean.deduplicate));
    add("clean.write_cleaned", boolean(write_cleaned));

    add("rfm.frequency_mode", rfm.frequency == FrequencyMode::Lines ? "lines" : "distinct_dates");
    add("rfm.recency_mode", rfm.recency == RecencyMode::ElapsedDays ? "elapsed_days" : "calendar_days");
    add("rfm.reference", rfm.reference ? rfm.reference->iso() : "latest");
    add("rfm.weights", join({format_double(weights.recency), format_double(weights.frequency),
                             format_double(weights.monetary)}));
    add("rfm.scale_divisor", format_double(weights.scale_divisor));
    add("rfm.thresholds", join({format_double(thresholds.top), format_double(thresholds.high),
                                format_double(thresholds.medium), format_double(thresholds.low)}));
    {
        std::vector<std::string> c;
        for (const auto& [id, score] : calibration) c.push_back(id + ":" + format_double(score));
        add("rfm.calibration", join(c));
    }

    add("features.level", level == FeatureLevel::Customer ? "customer" : "invoice");
    add("features.columns", join(features));

    for (Algorithm a : kAllAlgorithms) {
        const auto it = preprocessing.find(a);
        const Preprocessing p = it == preprocessing.end() ? Preprocessing{} : it->second;
        add(to_string(a) + ".scaler", to_string(p.scaler));
        add(to_string(a) + ".pca", count(p.pca_components));
        const auto s = seed_overrides.find(a);
        add(to_string(a) + ".seed", s == seed_overrides.end() ? "" : std::to_string(s->second));
    }

    add("kmeans.k", count(kmeans.k));
    add("kmeans.init", to_string(kmeans.init));
    add("kmeans.max_iter", count(kmeans.max_iter));
    add("kmeans.tol", format_double(kmeans.tol));
    add("gmm.k", count(gmm.k));
    add("gmm.max_iter", count(gmm.max_iter));
    add("gmm.tol", format_double(gmm.tol));
    add("gmm.reg", format_double(gmm.reg));
    add("dbscan.eps", format_double(dbscan.eps));
    add("dbscan.min_samples", count(dbscan.min_samples));
    add("birch.threshold", format_double(birch.threshold));
    add("birch.branching", count(birch.branching));
    add("birch.n_clusters", count(birch.n_clusters));
    add("agglo.n_clusters", count(agglo_clusters));
    add("agglo.linkage", to_string(agglo_linkage));
    add("agglo.max_table_mb", count(agglo_max_table_mb));
    add("elbow.k_min", count(elbow_k_min));
    add("elbow.k_max", count(elbow_k_max));
    add("elbow.seeds", count(elbow_seeds));
    add("kdistance.k", count(kdistance_k));
    return e;
}

std::string PipelineConfig::to_text() const {
    std::string out;
    for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
    return out;
}

bool PipelineConfig::runs(Algorithm a) const {
    for (Algorithm x : algorithms)
        if (x == a) return true;
    return false;
}

std::uint64_t PipelineConfig::seed_for(Algorithm a) const {
    const auto it = seed_overrides.find(a);
    return it == seed_overrides.end() ? seed : it->second;
}

std::size_t PipelineConfig::effective_kdistance_k() const {
    return kdistance_k > 0 ? kdistance_k : dbscan.min_samples;
}

ParseConfig PipelineConfig::parse_config() const {
    ParseConfig p{DatePattern(date_format), decimal_separator, delimiter};
    return p;
}

void PipelineConfig::validate() const {
    const auto fail = [](const std::string& msg) { throw ConfigError(msg); };

    if (input.empty()) fail("no input file configured");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(input, ec)) fail("input file '" + input.string() + "' does not exist");
    if (output.empty()) fail("no output directory configured");
    try {
        (void)DatePattern(date_format);
    } catch (const std::invalid_argument& e) {
        fail(std::string("date_format: ") + e.what());
    }
    if (decimal_separator == delimiter) fail("decimal_separator and delimiter must differ");
    if (delimiter == '"' || decimal_separator == '"') fail("the quote character cannot be a separator");

    if (!runs(Stage::Clean)) fail("the clean stage cannot be skipped; every later stage reads its output");
    if (runs(Stage::Evaluate) && !runs(Stage::Cluster)) fail("stage 'evaluate' needs stage 'cluster'");

    weights.validate();
    thresholds.validate();
    for (const auto& [id, score] : calibration)
        if (id.empty() || !std::isfinite(score)) fail("rfm.calibration entries must be customer:score");

    if (features.empty()) fail("features.columns is empty");
    for (const auto& f : features) {
        const bool ok = level == FeatureLevel::Customer ? is_customer_feature(f) : is_invoice_feature(f);
        if (!ok) {
            fail("feature '" + f + "' is not a " + (level == FeatureLevel::Customer ? "customer" : "invoice") +
                 "-level feature");
        }
    }
    if (runs(Stage::Cluster) && level == FeatureLevel::Customer && !runs(Stage::Rfm)) {
        fail("customer-level features need stage 'rfm'");
    }

    if (!runs(Stage::Cluster)) return;
    if (algorithms.empty()) fail("no algorithms selected");
    const std::size_t d = features.size();
    for (Algorithm a : algorithms) {
        const auto it = preprocessing.find(a);
        const std::size_t k = it == preprocessing.end() ? 0 : it->second.pca_components;
        if (k > d) {
            fail(to_string(a) + ".pca = " + std::to_string(k) + " exceeds the " + std::to_string(d) + " feature columns");
        }
    }

    const auto positive_count = [&](const char* key, std::size_t v) {
        if (v < 1) fail(std::string(key) + " must be at least 1");
    };
    const auto non_negative = [&](const char* key, double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) fail(std::string(key) + " must be a finite non-negative number");
    };
    if (runs(Algorithm::KMeans)) {
        positive_count("kmeans.k", kmeans.k);
        positive_count("kmeans.max_iter", kmeans.max_iter);
        non_negative("kmeans.tol", kmeans.tol);
    }
    if (runs(Algorithm::Gmm)) {
        positive_count("gmm.k", gmm.k);
        positive_count("gmm.max_iter", gmm.max_iter);
        non_negative("gmm.tol", gmm.tol);
        non_negative("gmm.reg", gmm.reg);
    }
    if (runs(Algorithm::Dbscan)) {
        try {
            dbscan.validate();
        } catch (const std::invalid_argument& e) {
            fail(std::string("dbscan: ") + e.what());
        }
    }
    if (runs(Algorithm::Birch)) {
        try {
            birch.validate();
        } catch (const std::invalid_argument& e) {
            fail(std::string("birch: ") + e.what());
        }
    }
    if (runs(Algorithm::Agglomerative)) {
        positive_count("agglo.n_clusters", agglo_clusters);
        positive_count("agglo.max_table_mb", agglo_max_table_mb);
    }
    if (runs(Stage::Evaluate) && runs(Algorithm::KMeans)) {
        positive_count("elbow.k_min", elbow_k_min);
        if (elbow_k_max < elbow_k_min) fail("elbow.k_max must not be below elbow.k_min");
        positive_count("elbow.seeds", elbow_seeds);
    }
}

PipelineConfig parse_config_text(std::string_view text, PipelineConfig base) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const std::string_view line = trim(text.substr(0, nl));
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config_text(ss.str(), std::move(base));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace rfmseg
