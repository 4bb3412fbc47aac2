#include "rfmseg/dataio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "rfmseg/error.hpp"

namespace rfmseg {

namespace {

enum Column : std::size_t { kInvoice, kStock, kDescription, kQuantity, kDate, kPrice, kCustomer, kCountry, kColumnCount };

// Splits CSV text into rows of fields. Quotes may wrap fields and escape
// themselves by doubling; quoted fields may span lines.
class CsvReader {
public:
    CsvReader(std::string text, char delimiter) : text_(std::move(text)), delim_(delimiter) {
        if (text_.size() >= 3 && text_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;
    }

    // Returns false at end of input. `line` receives the row's first line number.
    bool next(std::vector<std::string>& fields, std::size_t& line) {
        fields.clear();
        // skip blank lines
        while (pos_ < text_.size() && (text_[pos_] == '\n' || text_[pos_] == '\r')) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
        if (pos_ >= text_.size()) return false;
        line = line_;

        std::string field;
        bool quoted = false;
        bool field_was_quoted = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_++];
            if (quoted) {
                if (c == '"') {
                    if (pos_ < text_.size() && text_[pos_] == '"') {
                        field += '"';
                        ++pos_;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') ++line_;
                    field += c;
                }
            } else if (c == '"' && field.empty() && !field_was_quoted) {
                quoted = true;
                field_was_quoted = true;
            } else if (c == delim_) {
                fields.push_back(std::move(field));
                field.clear();
                field_was_quoted = false;
            } else if (c == '\n') {
                ++line_;
                break;
            } else if (c != '\r') {
                field += c;
            }
        }
        if (quoted) throw ParseError(line, "?", "unterminated quoted field");
        fields.push_back(std::move(field));
        return true;
    }

private:
    std::string text_;
    char delim_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::int64_t parse_quantity(std::string_view text, std::size_t line) {
    text = trim(text);
    std::int64_t value = 0;
    const char* first = text.data();
    if (!text.empty() && text.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, "Quantity", "not an integer: '" + std::string(text) + "'");
    }
    return value;
}

void write_field(std::ostream& out, std::string_view value, char delimiter) {
    const bool needs_quotes = value.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos ||
                              (!value.empty() && (value.front() == ' ' || value.back() == ' '));
    if (!needs_quotes) {
        out << value;
        return;
    }
    out << '"';
    for (char c : value) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

struct RecordHash {
    std::size_t operator()(const TransactionRecord& r) const {
        std::size_t h = std::hash<std::string>{}(r.invoice_no);
        const auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(std::hash<std::string>{}(r.stock_code));
        mix(r.description ? std::hash<std::string>{}(*r.description) : 0x51ed27);
        mix(std::hash<std::int64_t>{}(r.quantity));
        mix(std::hash<std::int64_t>{}(r.invoice_date.minutes()));
        mix(std::hash<std::int64_t>{}(r.unit_price.micros()));
        mix(r.customer_id ? std::hash<std::string>{}(*r.customer_id) : 0x7a3c11);
        mix(std::hash<std::string>{}(r.country));
        return h;
    }
};

}  // namespace

std::vector<TransactionRecord> parse_transactions(std::istream& source, const ParseConfig& cfg) {
    std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
    CsvReader reader(std::move(text), cfg.delimiter);

    std::vector<std::string> fields;
    std::size_t line = 0;
    if (!reader.next(fields, line)) {
        throw ConfigError("ledger CSV is empty: a header row is required");
    }

    std::array<std::size_t, kColumnCount> index{};
    const std::size_t header_width = fields.size();
    for (std::size_t c = 0; c < kColumnCount; ++c) {
        const auto it = std::find_if(fields.begin(), fields.end(),
                                     [&](const std::string& f) { return trim(f) == kLedgerColumns[c]; });
        if (it == fields.end()) {
            throw ConfigError(std::string("ledger CSV header is missing required column '") + kLedgerColumns[c] + "'");
        }
        index[c] = static_cast<std::size_t>(it - fields.begin());
    }

    std::vector<TransactionRecord> records;
    while (reader.next(fields, line)) {
        if (fields.size() != header_width) {
            const std::size_t missing = std::min(fields.size(), header_width - 1);
            const auto col = std::find(index.begin(), index.end(), missing);
            const std::string name = col != index.end() ? kLedgerColumns[col - index.begin()] : std::to_string(missing + 1);
            throw ParseError(line, name,
                             "expected " + std::to_string(header_width) + " fields, found " + std::to_string(fields.size()));
        }
        TransactionRecord r;
        r.invoice_no = trim(fields[index[kInvoice]]);
        r.stock_code = trim(fields[index[kStock]]);
        if (auto d = fields[index[kDescription]]; !trim(d).empty()) r.description = std::move(d);
        r.quantity = parse_quantity(fields[index[kQuantity]], line);
        try {
            r.invoice_date = cfg.date_pattern.parse(trim(fields[index[kDate]]));
        } catch (const std::invalid_argument& e) {
            throw ParseError(line, "InvoiceDate", e.what());
        }
        try {
            r.unit_price = Money::parse(fields[index[kPrice]], cfg.decimal_separator);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line, "UnitPrice", e.what());
        }
        if (auto id = trim(fields[index[kCustomer]]); !id.empty()) r.customer_id = std::string(id);
        r.country = trim(fields[index[kCountry]]);
        if (r.invoice_no.empty()) throw ParseError(line, "InvoiceNo", "empty invoice number");
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<TransactionRecord> read_transactions(const std::filesystem::path& path, const ParseConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open ledger file '" + path.string() + "'");
    return parse_transactions(in, cfg);
}

void write_transactions(std::ostream& out, std::span<const TransactionRecord> records, const ParseConfig& cfg) {
    const char d = cfg.delimiter;
    for (std::size_t c = 0; c < kColumnCount; ++c) {
        if (c) out << d;
        out << kLedgerColumns[c];
    }
    out << '\n';
    for (const auto& r : records) {
        write_field(out, r.invoice_no, d);
        out << d;
        write_field(out, r.stock_code, d);
        out << d;
        write_field(out, r.description.value_or(""), d);
        out << d << r.quantity << d;
        write_field(out, cfg.date_pattern.format(r.invoice_date), d);
        out << d;
        write_field(out, r.unit_price.to_exact_string(cfg.decimal_separator), d);
        out << d;
        write_field(out, r.customer_id.value_or(""), d);
        out << d;
        write_field(out, r.country, d);
        out << '\n';
    }
}

CleanResult clean(std::span<const TransactionRecord> records, const CleanConfig& cfg) {
    CleanResult result;
    auto& rep = result.report;
    rep.rows_in = records.size();

    std::vector<const TransactionRecord*> stage;
    stage.reserve(records.size());
    for (const auto& r : records) {
        if (cfg.drop_missing_customer && !r.customer_id) continue;
        stage.push_back(&r);
    }
    rep.rows_after_null_drop = stage.size();

    if (cfg.drop_nonpositive_quantity) {
        std::erase_if(stage, [](const TransactionRecord* r) { return r->quantity <= 0; });
    }
    rep.rows_after_negative_drop = stage.size();
    rep.negatives_removed = rep.rows_after_null_drop - rep.rows_after_negative_drop;

    if (cfg.deduplicate) {
        struct PtrHash {
            std::size_t operator()(const TransactionRecord* r) const { return RecordHash{}(*r); }
        };
        struct PtrEq {
            bool operator()(const TransactionRecord* a, const TransactionRecord* b) const { return *a == *b; }
        };
        std::unordered_set<const TransactionRecord*, PtrHash, PtrEq> seen;
        seen.reserve(stage.size());
        std::erase_if(stage, [&](const TransactionRecord* r) { return !seen.insert(r).second; });
    }
    rep.rows_after_dedup = stage.size();
    rep.duplicates_removed = rep.rows_after_negative_drop - rep.rows_after_dedup;

    result.records.reserve(stage.size());
    for (const auto* r : stage) result.records.push_back(*r);
    return result;
}

std::vector<InvoiceSummary> aggregate_invoices(std::span<const TransactionRecord> records) {
    std::map<std::string, InvoiceSummary> by_invoice;
    for (const auto& r : records) {
        auto& s = by_invoice[r.invoice_no];
        s.invoice_no = r.invoice_no;
        ++s.line_count;
        s.invoice_total += r.line_total();
    }
    std::vector<InvoiceSummary> out;
    out.reserve(by_invoice.size());
    for (auto& [_, s] : by_invoice) out.push_back(std::move(s));
    return out;
}

}  // namespace rfmseg
