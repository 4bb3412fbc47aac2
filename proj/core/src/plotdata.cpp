#include "rfmseg/plotdata.hpp"

#include <fstream>
#include <sstream>

#include "json_codec.hpp"
#include "rfmseg/error.hpp"
#include "rfmseg/serialize.hpp"
#include "text_util.hpp"

namespace rfmseg {

namespace {

struct ScatterFigure {
    const char* id;
    Algorithm algorithm;
};

constexpr ScatterFigure kScatter[] = {
    {"fig5", Algorithm::KMeans}, {"fig6", Algorithm::Gmm},           {"fig7", Algorithm::Dbscan},
    {"fig8", Algorithm::Birch},  {"fig9", Algorithm::Agglomerative},
};

void require(const RunManifest& m, const std::string& artifact, std::string_view figure, const std::string& stage) {
    if (!m.has_artifact(artifact) || !std::filesystem::exists(m.config.output / artifact)) {
        throw ConfigError("plot data " + std::string(figure) + " needs stage '" + stage + "' (" + artifact +
                          " was not produced)");
    }
}

std::ifstream open_artifact(const RunManifest& m, const std::string& rel) {
    std::ifstream in(m.config.output / rel, std::ios::binary);
    if (!in) throw DataError("cannot read '" + (m.config.output / rel).string() + "'");
    return in;
}

// Copies a CSV artifact below a comment line, dropping columns past `keep`.
void copy_csv(std::istream& in, std::ostream& out, std::size_t keep) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = detail::csv_split(line);
        for (std::size_t i = 0; i < keep && i < fields.size(); ++i) out << (i ? "," : "") << detail::csv_field(fields[i]);
        out << '\n';
    }
}

}  // namespace

std::vector<std::string> plot_figure_ids() {
    return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig7_kdistance", "fig8", "fig9"};
}

std::filesystem::path emit_plot_data(RunManifest& m, std::string_view figure) {
    const std::string rel = "plotdata/" + std::string(figure) + ".csv";
    const auto path = m.config.output / rel;

    // Gather everything first so a missing prerequisite writes nothing.
    std::ostringstream body;
    if (figure == "fig3") {
        require(m, "segments.json", figure, "rfm");
        auto in = open_artifact(m, "segments.json");
        const auto shares = detail::Json::parse(in);
        body << "# fig3 customer segments; columns: segment,count,percent (largest-remainder rounded, sums to 100)\n";
        body << "segment,count,percent\n";
        for (const auto& s : shares)
            body << s.at("segment").get<std::string>() << ',' << s.at("count").get<std::size_t>() << ','
                 << s.at("rounded_percent").get<int>() << '\n';
    } else if (figure == "fig4") {
        require(m, "elbow.csv", figure, "evaluate");
        auto in = open_artifact(m, "elbow.csv");
        body << "# fig4 elbow curve; columns: k,inertia (best of the seeded k-means runs)\n";
        copy_csv(in, body, 2);
    } else if (figure == "fig7_kdistance") {
        require(m, "kdistance.csv", figure, "evaluate");
        auto in = open_artifact(m, "kdistance.csv");
        body << "# fig7_kdistance sorted k-distances; columns: rank,distance\n";
        copy_csv(in, body, 2);
    } else {
        const ScatterFigure* scatter = nullptr;
        for (const auto& s : kScatter)
            if (figure == s.id) scatter = &s;
        if (!scatter) throw ConfigError("unknown figure id '" + std::string(figure) + "'");
        const std::string name = to_string(scatter->algorithm);
        require(m, "labels_" + name + ".csv", figure, "cluster with algorithm " + name);
        require(m, "matrix_" + name + ".csv", figure, "cluster with algorithm " + name);

        auto min = open_artifact(m, "matrix_" + name + ".csv");
        const auto x = read_matrix_csv(min);
        auto lin = open_artifact(m, "labels_" + name + ".csv");
        const auto labels = read_labels_csv(lin);
        if (labels.size() != x.rows()) throw DataError("labels_" + name + ".csv does not match matrix_" + name + ".csv");

        const std::string xname = x.column_names.at(0);
        const std::string yname = x.cols() > 1 ? x.column_names[1] : "zero";
        body << "# " << figure << ' ' << name << " clusters; columns: x,y,label (x = " << xname << ", y = " << yname
             << ", label -1 = noise)\n";
        body << "x,y,label\n";
        for (std::size_t i = 0; i < x.rows(); ++i) {
            body << format_number(x.data(i, 0)) << ',' << format_number(x.cols() > 1 ? x.data(i, 1) : 0.0) << ','
                 << labels[i] << '\n';
        }
    }

    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body.str();
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    if (!m.has_artifact(rel)) m.artifacts.push_back(rel);
    return path;
}

}  // namespace rfmseg
