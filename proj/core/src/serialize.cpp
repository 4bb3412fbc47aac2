#include "rfmseg/serialize.hpp"

#include <istream>
#include <ostream>

#include "json_codec.hpp"
#include "rfmseg/error.hpp"
#include "text_util.hpp"

namespace rfmseg {

using detail::csv_field;
using detail::Json;

std::string format_number(double v) { return detail::format_double(v); }

void write_customers_csv(std::ostream& out, std::span<const CustomerRFM> customers) {
    out << "customer_id,recency,frequency,monetary,r_score,f_score,m_score,rfm_score,segment\n";
    for (const auto& c : customers) {
        out << csv_field(c.customer_id) << ',' << c.recency << ',' << c.frequency << ','
            << c.monetary.to_exact_string('.') << ',' << format_number(c.r_score) << ',' << format_number(c.f_score)
            << ',' << format_number(c.m_score) << ',' << format_number(c.rfm_score) << ',' << to_string(c.segment)
            << '\n';
    }
}

void write_invoices_csv(std::ostream& out, std::span<const InvoiceSummary> invoices) {
    out << "invoice_no,line_count,invoice_total\n";
    for (const auto& i : invoices)
        out << csv_field(i.invoice_no) << ',' << i.line_count << ',' << i.invoice_total.to_exact_string('.') << '\n';
}

void write_labels_csv(std::ostream& out, std::span<const std::string> row_ids, std::span<const int> labels) {
    if (!row_ids.empty() && row_ids.size() != labels.size()) {
        throw std::invalid_argument("write_labels_csv: id count does not match label count");
    }
    out << "id,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out << (row_ids.empty() ? std::to_string(i) : csv_field(row_ids[i])) << ',' << labels[i] << '\n';
}

void write_matrix_csv(std::ostream& out, const FeatureMatrix& m) {
    out << "id";
    for (const auto& name : m.column_names) out << ',' << csv_field(name);
    out << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << (m.row_ids.empty() ? std::to_string(i) : csv_field(m.row_ids[i]));
        for (double v : m.data.row(i)) out << ',' << format_number(v);
        out << '\n';
    }
}

FeatureMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("matrix file is empty");
    const auto header = detail::csv_split(line);
    if (header.size() < 2 || header[0] != "id") throw DataError("matrix file header must start with 'id'");
    const std::size_t d = header.size() - 1;

    FeatureMatrix m;
    m.column_names.assign(header.begin() + 1, header.end());
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::csv_split(line);
        if (fields.size() != d + 1) throw ParseError(line_no, "id", "matrix row has the wrong number of fields");
        m.row_ids.push_back(fields[0]);
        for (std::size_t j = 1; j <= d; ++j) {
            const auto v = detail::parse_double(fields[j]);
            if (!v) throw ParseError(line_no, m.column_names[j - 1], "not a number: '" + fields[j] + "'");
            values.push_back(*v);
        }
    }
    m.data = Matrix(m.row_ids.size(), d);
    std::copy(values.begin(), values.end(), m.data.data().begin());
    return m;
}

std::vector<int> read_labels_csv(std::istream& in, std::vector<std::string>* row_ids) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("labels file is empty");
    std::vector<int> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::csv_split(line);
        const auto v = fields.size() == 2 ? detail::parse_double(fields[1]) : std::nullopt;
        if (!v || *v != static_cast<int>(*v)) throw ParseError(line_no, "label", "bad label row");
        labels.push_back(static_cast<int>(*v));
        if (row_ids) row_ids->push_back(fields[0]);
    }
    return labels;
}

std::string to_json(const CleaningReport& r) { return detail::json_of(r).dump(2); }
std::string to_json(std::span<const SegmentShare> shares) { return detail::json_of(shares).dump(2); }
std::string to_json(const KMeansModel& m) { return detail::json_of(m).dump(2); }
std::string to_json(const GmmModel& m) { return detail::json_of(m).dump(2); }
std::string to_json(const BirchFit& f) { return detail::json_of(f).dump(2); }
std::string to_json(const AgglomerativeFit& f) { return detail::json_of(f).dump(2); }
std::string to_json(const PcaModel& m) { return detail::json_of(m).dump(2); }
std::string to_json(const Scaling& s) { return detail::json_of(s).dump(2); }

namespace detail {

Json json_of(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

Json json_of(const CleaningReport& r) {
    Json j;
    j["rows_in"] = r.rows_in;
    j["nulls_removed"] = r.nulls_removed();
    j["rows_after_null_drop"] = r.rows_after_null_drop;
    j["negatives_removed"] = r.negatives_removed;
    j["rows_after_negative_drop"] = r.rows_after_negative_drop;
    j["duplicates_removed"] = r.duplicates_removed;
    j["rows_after_dedup"] = r.rows_after_dedup;
    return j;
}

Json json_of(std::span<const SegmentShare> shares) {
    Json arr = Json::array();
    for (const auto& s : shares) {
        Json j;
        j["segment"] = std::string(to_string(s.segment));
        j["count"] = s.count;
        j["percent"] = s.percent;
        j["rounded_percent"] = s.rounded_percent;
        arr.push_back(std::move(j));
    }
    return arr;
}

Json json_of(const KMeansModel& m) {
    Json j;
    j["k"] = m.k;
    j["n"] = m.n;
    j["inertia"] = m.inertia;
    j["centroids"] = json_of(m.centroids);
    return j;
}

Json json_of(const GmmModel& m) {
    Json j;
    j["weights"] = m.weights;
    j["means"] = json_of(m.means);
    Json covs = Json::array();
    for (const auto& c : m.covariances) covs.push_back(json_of(c));
    j["covariances"] = std::move(covs);
    j["mean_log_likelihood"] = m.log_likelihood;
    j["converged"] = m.converged;
    return j;
}

Json json_of(const BirchFit& f) {
    Json entries = Json::array();
    for (std::size_t e = 0; e < f.leaf_entries.size(); ++e) {
        const auto& cf = f.leaf_entries[e];
        Json j;
        j["n"] = cf.n;
        j["ls"] = cf.ls;
        j["ss"] = cf.ss;
        j["radius"] = cf.radius();
        j["cluster"] = f.entry_labels[e];
        entries.push_back(std::move(j));
    }
    Json j;
    j["n_clusters"] = f.result.n_clusters;
    j["leaf_entries"] = std::move(entries);
    AgglomerativeFit global;
    global.merges = f.global_merges;
    j["global_merges"] = json_of(global)["merges"];
    return j;
}

Json json_of(const AgglomerativeFit& f) {
    Json merges = Json::array();
    for (const auto& m : f.merges) merges.push_back(Json::array({m.a, m.b, m.distance, m.size}));
    Json j;
    j["n_clusters"] = f.result.n_clusters;
    j["merge_columns"] = {"a", "b", "distance", "size"};
    j["merges"] = std::move(merges);
    return j;
}

Json json_of(const PcaModel& m) {
    Json j;
    j["components"] = json_of(m.components);
    j["eigenvalues"] = m.eigenvalues;
    j["column_means"] = m.column_means;
    j["explained_variance_ratio"] = m.explained_variance_ratio;
    j["total_variance"] = m.total_variance;
    return j;
}

Json json_of(const Scaling& s) {
    Json j;
    j["kind"] = to_string(s.kind);
    j["offset"] = s.offset;
    j["scale"] = s.scale;
    return j;
}

}  // namespace detail

}  // namespace rfmseg
