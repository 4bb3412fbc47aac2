#include "rfmseg/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "rfmseg/error.hpp"
#include "rfmseg/random.hpp"

namespace rfmseg {

namespace {

constexpr std::string_view kCustomerFeatures[] = {"recency", "frequency", "monetary", "r_score",
                                                  "f_score", "m_score",   "rfm_score"};
constexpr std::string_view kInvoiceFeatures[] = {"line_count", "invoice_total"};

double round2(double v) { return std::round(v * 100.0) / 100.0; }

double customer_feature(const CustomerRFM& c, std::string_view name) {
    if (name == "recency") return static_cast<double>(c.recency);
    if (name == "frequency") return static_cast<double>(c.frequency);
    if (name == "monetary") return c.monetary.to_double();
    if (name == "r_score") return c.r_score;
    if (name == "f_score") return c.f_score;
    if (name == "m_score") return c.m_score;
    return c.rfm_score;
}

}  // namespace

std::string_view to_string(Segment s) {
    switch (s) {
        case Segment::Top: return "Top";
        case Segment::HighValue: return "HighValue";
        case Segment::MediumValue: return "MediumValue";
        case Segment::LowValue: return "LowValue";
        case Segment::Lost: break;
    }
    return "Lost";
}

std::optional<Segment> parse_segment(std::string_view name) {
    for (Segment s : kAllSegments)
        if (to_string(s) == name) return s;
    return std::nullopt;
}

void RfmWeights::validate() const {
    if (!(recency >= 0 && frequency >= 0 && monetary >= 0)) throw ConfigError("RFM weights must be non-negative");
    if (!(recency + frequency + monetary > 0)) throw ConfigError("RFM weights must have a positive sum");
    if (!(scale_divisor > 0) || !std::isfinite(scale_divisor)) throw ConfigError("RFM scale divisor must be positive");
}

void SegmentThresholds::validate() const {
    if (!(top > high && high > medium && medium > low && low > 0)) {
        throw ConfigError("segment thresholds must satisfy top > high > medium > low > 0");
    }
}

Timestamp latest_invoice_date(std::span<const TransactionRecord> records) {
    if (records.empty()) throw std::invalid_argument("no records");
    Timestamp latest = records.front().invoice_date;
    for (const auto& r : records) latest = std::max(latest, r.invoice_date);
    return latest;
}

std::vector<CustomerRFM> compute_rfm(std::span<const TransactionRecord> records, const RfmConfig& cfg) {
    struct Acc {
        Timestamp last;
        bool seen = false;
        std::size_t lines = 0;
        std::set<std::int64_t> dates;
        Money spend;
    };
    std::map<std::string, Acc> by_customer;
    bool any = false;
    Timestamp latest;
    for (const auto& r : records) {
        if (!r.customer_id) continue;
        auto& a = by_customer[*r.customer_id];
        if (!a.seen || r.invoice_date > a.last) a.last = r.invoice_date;
        a.seen = true;
        ++a.lines;
        if (cfg.frequency == FrequencyMode::DistinctDates) a.dates.insert(r.invoice_date.day_number());
        a.spend += r.line_total();
        if (!any || r.invoice_date > latest) latest = r.invoice_date;
        any = true;
    }
    if (!any) return {};

    const Timestamp reference = cfg.reference.value_or(latest);
    if (reference < latest) {
        throw ConfigError("reference date " + reference.iso() + " precedes invoice dated " + latest.iso());
    }

    std::vector<CustomerRFM> out;
    out.reserve(by_customer.size());
    for (auto& [id, a] : by_customer) {
        CustomerRFM c;
        c.customer_id = id;
        if (cfg.recency == RecencyMode::ElapsedDays) {
            c.recency = (reference.minutes() - a.last.minutes()) / 1440;
        } else {
            c.recency = reference.day_number() - a.last.day_number();
        }
        c.frequency = cfg.frequency == FrequencyMode::Lines ? a.lines : a.dates.size();
        c.monetary = a.spend;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<double> rank_normalize(std::span<const double> values, RankDirection direction) {
    if (values.empty()) throw std::invalid_argument("rank_normalize needs at least one value");
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // ascending "goodness": the best value ends last and gets rank n
    if (direction == RankDirection::HigherIsBetter) {
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    } else {
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] > values[b]; });
    }
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share ranks i+1..j+1
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    const double max_rank = *std::max_element(rank.begin(), rank.end());
    for (double& r : rank) r = r / max_rank * 100.0;
    return rank;
}

double weighted_rfm_score(const CustomerRFM& c, const RfmWeights& w) {
    return (w.recency * c.r_score + w.frequency * c.f_score + w.monetary * c.m_score) / w.scale_divisor;
}

double rfm_score(const CustomerRFM& c, const RfmWeights& w) { return round2(weighted_rfm_score(c, w)); }

Segment assign_segment(double score, const SegmentThresholds& t) {
    if (score > t.top) return Segment::Top;
    if (score > t.high) return Segment::HighValue;
    if (score > t.medium) return Segment::MediumValue;
    if (score > t.low) return Segment::LowValue;
    return Segment::Lost;
}

void score_customers(std::vector<CustomerRFM>& customers, const RfmWeights& w, const SegmentThresholds& t) {
    w.validate();
    t.validate();
    if (customers.empty()) return;
    std::vector<double> r, f, m;
    for (const auto& c : customers) {
        r.push_back(static_cast<double>(c.recency));
        f.push_back(static_cast<double>(c.frequency));
        m.push_back(c.monetary.to_double());
    }
    const auto rs = rank_normalize(r, RankDirection::LowerIsBetter);
    const auto fs = rank_normalize(f, RankDirection::HigherIsBetter);
    const auto ms = rank_normalize(m, RankDirection::HigherIsBetter);
    for (std::size_t i = 0; i < customers.size(); ++i) {
        auto& c = customers[i];
        c.r_score = rs[i];
        c.f_score = fs[i];
        c.m_score = ms[i];
        c.rfm_score = rfm_score(c, w);
        c.segment = assign_segment(c.rfm_score, t);
    }
}

std::vector<SegmentShare> segment_distribution(std::span<const Segment> segments) {
    if (segments.empty()) throw std::invalid_argument("segment_distribution needs at least one customer");
    std::vector<SegmentShare> out;
    for (Segment s : kAllSegments) out.push_back({s, 0, 0.0, 0});
    for (Segment s : segments) ++out[static_cast<std::size_t>(s)].count;

    const double n = static_cast<double>(segments.size());
    int assigned = 0;
    std::vector<std::pair<double, std::size_t>> remainders;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].percent = static_cast<double>(out[i].count) / n * 100.0;
        out[i].rounded_percent = static_cast<int>(std::floor(out[i].percent));
        assigned += out[i].rounded_percent;
        remainders.emplace_back(out[i].percent - out[i].rounded_percent, i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < 100 && k < remainders.size(); ++k, ++assigned) {
        ++out[remainders[k].second].rounded_percent;
    }
    return out;
}

std::vector<CalibrationRow> calibrate_scores(std::span<const CustomerRFM> customers,
                                             std::span<const std::pair<std::string, double>> reference) {
    std::vector<CalibrationRow> rows;
    for (const auto& [id, expected] : reference) {
        CalibrationRow row{id, expected, std::nullopt, 0.0};
        const auto it = std::lower_bound(customers.begin(), customers.end(), id,
                                         [](const CustomerRFM& c, const std::string& key) { return c.customer_id < key; });
        if (it != customers.end() && it->customer_id == id) {
            row.actual = it->rfm_score;
            row.deviation = it->rfm_score - expected;
        }
        rows.push_back(row);
    }
    return rows;
}

bool is_customer_feature(std::string_view name) {
    return std::find(std::begin(kCustomerFeatures), std::end(kCustomerFeatures), name) != std::end(kCustomerFeatures);
}

bool is_invoice_feature(std::string_view name) {
    return std::find(std::begin(kInvoiceFeatures), std::end(kInvoiceFeatures), name) != std::end(kInvoiceFeatures);
}

FeatureMatrix build_feature_matrix(std::span<const CustomerRFM> customers, const FeatureSpec& spec) {
    if (spec.columns.empty()) throw ConfigError("feature spec names no columns");
    for (const auto& name : spec.columns) {
        if (!is_customer_feature(name)) {
            throw ConfigError(is_invoice_feature(name) ? "feature '" + name + "' is per-invoice, not per-customer"
                                                       : "unknown feature '" + name + "'");
        }
    }
    std::vector<std::size_t> order(customers.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return customers[a].customer_id < customers[b].customer_id; });

    FeatureMatrix fm;
    fm.data = Matrix(customers.size(), spec.columns.size());
    fm.column_names = spec.columns;
    for (std::size_t r = 0; r < order.size(); ++r) {
        const auto& c = customers[order[r]];
        fm.row_ids.push_back(c.customer_id);
        for (std::size_t j = 0; j < spec.columns.size(); ++j) fm.data(r, j) = customer_feature(c, spec.columns[j]);
    }
    return fm;
}

FeatureMatrix build_feature_matrix(std::span<const InvoiceSummary> invoices, const FeatureSpec& spec) {
    if (spec.columns.empty()) throw ConfigError("feature spec names no columns");
    for (const auto& name : spec.columns) {
        if (!is_invoice_feature(name)) {
            throw ConfigError(is_customer_feature(name) ? "feature '" + name + "' is per-customer, not per-invoice"
                                                        : "unknown feature '" + name + "'");
        }
    }
    std::vector<std::size_t> order(invoices.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return invoices[a].invoice_no < invoices[b].invoice_no; });

    FeatureMatrix fm;
    fm.data = Matrix(invoices.size(), spec.columns.size());
    fm.column_names = spec.columns;
    for (std::size_t r = 0; r < order.size(); ++r) {
        const auto& inv = invoices[order[r]];
        fm.row_ids.push_back(inv.invoice_no);
        for (std::size_t j = 0; j < spec.columns.size(); ++j) {
            fm.data(r, j) = spec.columns[j] == "line_count" ? static_cast<double>(inv.line_count)
                                                            : inv.invoice_total.to_double();
        }
    }
    return fm;
}

RowSplit train_test_split(std::size_t n, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) throw std::invalid_argument("test fraction must be in [0, 1]");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    rng.shuffle(idx.begin(), idx.end());
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    RowSplit split;
    split.test.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
    std::sort(split.test.begin(), split.test.end());
    std::sort(split.train.begin(), split.train.end());
    return split;
}

}  // namespace rfmseg
