#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfmseg/money.hpp"
#include "rfmseg/timestamp.hpp"

namespace rfmseg {

/// One line of the retail ledger.
struct TransactionRecord {
    std::string invoice_no;
    std::string stock_code;
    std::optional<std::string> description;
    std::int64_t quantity = 0;
    Timestamp invoice_date;
    Money unit_price;
    std::optional<std::string> customer_id;
    std::string country;

    bool is_cancellation() const { return !invoice_no.empty() && (invoice_no[0] == 'C' || invoice_no[0] == 'c'); }
    Money line_total() const { return unit_price * quantity; }

    friend bool operator==(const TransactionRecord&, const TransactionRecord&) = default;
};

struct ParseConfig {
    DatePattern date_pattern;
    char decimal_separator = '.';
    char delimiter = ',';
};

/// The eight ledger columns, in canonical order.
inline constexpr const char* kLedgerColumns[] = {"InvoiceNo",   "StockCode", "Description", "Quantity",
                                                 "InvoiceDate", "UnitPrice", "CustomerID",  "Country"};

/// Reads a ledger CSV with a header row naming the eight columns (any order).
/// Empty Description/CustomerID cells become absent. Row order is preserved.
///
/// Throws ConfigError when a required column is missing from the header and
/// ParseError (line + column) for malformed rows or unparseable values.
std::vector<TransactionRecord> parse_transactions(std::istream& source, const ParseConfig& cfg = {});
std::vector<TransactionRecord> read_transactions(const std::filesystem::path& path, const ParseConfig& cfg = {});

/// Writes records with the canonical header; fields are quoted when needed.
void write_transactions(std::ostream& out, std::span<const TransactionRecord> records, const ParseConfig& cfg = {});

struct CleanConfig {
    bool drop_missing_customer = true;
    bool drop_nonpositive_quantity = true;
    bool deduplicate = true;
};

/// Per-stage row counts. Disabled stages pass their input count through.
struct CleaningReport {
    std::size_t rows_in = 0;
    std::size_t rows_after_null_drop = 0;
    std::size_t rows_after_negative_drop = 0;
    std::size_t rows_after_dedup = 0;
    std::size_t duplicates_removed = 0;
    std::size_t negatives_removed = 0;

    std::size_t nulls_removed() const { return rows_in - rows_after_null_drop; }
    friend bool operator==(const CleaningReport&, const CleaningReport&) = default;
};

struct CleanResult {
    std::vector<TransactionRecord> records;
    CleaningReport report;
};

/// Fixed stage order: missing-customer drop, non-positive quantity drop,
/// exact-duplicate removal (all eight fields; first occurrence kept).
CleanResult clean(std::span<const TransactionRecord> records, const CleanConfig& cfg = {});

struct InvoiceSummary {
    std::string invoice_no;
    std::size_t line_count = 0;
    Money invoice_total;
};

/// One summary per distinct invoice number, ascending by invoice number.
std::vector<InvoiceSummary> aggregate_invoices(std::span<const TransactionRecord> records);

}  // namespace rfmseg
