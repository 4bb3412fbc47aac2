#include <gtest/gtest.h>

#include <sstream>

#include "rfmseg/dataio.hpp"
#include "rfmseg/error.hpp"

using namespace rfmseg;

namespace {

const char* kHeader = "InvoiceNo,StockCode,Description,Quantity,InvoiceDate,UnitPrice,CustomerID,Country\n";

std::vector<TransactionRecord> parse(const std::string& body, const ParseConfig& cfg = {}) {
    std::istringstream in(kHeader + body);
    return parse_transactions(in, cfg);
}

TransactionRecord line(std::string invoice, std::int64_t qty, const char* price, std::optional<std::string> customer) {
    TransactionRecord r;
    r.invoice_no = std::move(invoice);
    r.stock_code = "85123A";
    r.description = "ITEM";
    r.quantity = qty;
    r.invoice_date = Timestamp::from_civil(2010, 12, 1, 8, 26);
    r.unit_price = Money::parse(price);
    r.customer_id = std::move(customer);
    r.country = "United Kingdom";
    return r;
}

}  // namespace

TEST(Money, ParsesAndPrintsExactly) {
    EXPECT_EQ(Money::parse("2.55").micros(), 2'550'000);
    EXPECT_EQ(Money::parse("0.001").micros(), 1'000);
    EXPECT_EQ(Money::parse("-11062.06").micros(), -11'062'060'000);
    EXPECT_EQ(Money::parse("2,55", ',').micros(), 2'550'000);
    EXPECT_EQ(Money::parse("0.001").to_exact_string(), "0.001");
    EXPECT_EQ(Money::parse("6").to_exact_string(), "6");
    EXPECT_EQ(Money::parse("139.122").to_string(), "139.12");
    EXPECT_THROW(Money::parse("abc"), std::invalid_argument);
    EXPECT_THROW(Money::parse(""), std::invalid_argument);
}

TEST(Money, SumsStayExact) {
    // 0.1 + 0.2 drifts in binary floating point but not here
    Money m = Money::parse("0.1") + Money::parse("0.2");
    EXPECT_EQ(m, Money::parse("0.3"));
    EXPECT_EQ((Money::parse("2.00") * 3).to_string(), "6.00");
}

TEST(Timestamp, DefaultPatternRoundTrips) {
    const DatePattern p;
    const Timestamp t = p.parse("12/1/2010 8:26");
    EXPECT_EQ(t, Timestamp::from_civil(2010, 12, 1, 8, 26));
    EXPECT_EQ(t.iso(), "2010-12-01 08:26");
    EXPECT_EQ(p.format(t), "12/1/2010 8:26");
    EXPECT_THROW(p.parse("13/40/2010 8:26"), std::invalid_argument);
    EXPECT_THROW(p.parse("yesterday"), std::invalid_argument);
}

TEST(Timestamp, IsoPatternWithSeconds) {
    const DatePattern p("%Y-%m-%d %H:%M:%S");
    EXPECT_EQ(p.parse("2011-12-09 12:50:00"), Timestamp::from_civil(2011, 12, 9, 12, 50));
}

TEST(ParseTransactions, FirstLedgerRow) {
    const auto rows = parse("536365,85123A,WHITE HANGING HEART T-LIGHT HOLDER,6,12/1/2010 8:26,2.55,17850,United Kingdom\n");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].invoice_no, "536365");
    EXPECT_EQ(rows[0].stock_code, "85123A");
    EXPECT_EQ(rows[0].quantity, 6);
    EXPECT_EQ(rows[0].unit_price, Money::from_cents(255));
    EXPECT_EQ(rows[0].customer_id, "17850");
    EXPECT_EQ(rows[0].country, "United Kingdom");
    EXPECT_EQ(rows[0].invoice_date, Timestamp::from_civil(2010, 12, 1, 8, 26));
}

TEST(ParseTransactions, HeaderOnlyGivesNoRecords) { EXPECT_TRUE(parse("").empty()); }

TEST(ParseTransactions, EmptyCustomerIsAbsent) {
    const auto rows = parse("536414,22139,,56,12/1/2010 11:52,0,,United Kingdom\n");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_FALSE(rows[0].customer_id.has_value());
    EXPECT_FALSE(rows[0].description.has_value());
}

TEST(ParseTransactions, QuotedFieldsAndColumnOrder) {
    std::istringstream in(
        "Country,CustomerID,UnitPrice,InvoiceDate,Quantity,Description,StockCode,InvoiceNo\n"
        "France,12583,3.75,12/1/2010 8:45,24,\"SET/2 RED, \"\"RETROSPOT\"\"\",21724,536370\n");
    const auto rows = parse_transactions(in);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].description, "SET/2 RED, \"RETROSPOT\"");
    EXPECT_EQ(rows[0].invoice_no, "536370");
    EXPECT_EQ(rows[0].country, "France");
}

TEST(ParseTransactions, CancellationsKeepNegativeQuantity) {
    const auto rows = parse("C536379,D,Discount,-1,12/1/2010 9:41,27.5,14527,United Kingdom\n");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(rows[0].is_cancellation());
    EXPECT_EQ(rows[0].quantity, -1);
}

TEST(ParseTransactions, MalformedRowNamesLineAndColumn) {
    try {
        parse("536365,85123A,X,6,12/1/2010 8:26,2.55,17850,United Kingdom\n536366,22633,Y,abc,12/1/2010 8:28,1.85,17850,UK\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), "Quantity");
    }
}

TEST(ParseTransactions, BadDateNamesTheValue) {
    try {
        parse("536365,85123A,X,6,31/31/2010 8:26,2.55,17850,United Kingdom\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), "InvoiceDate");
        EXPECT_NE(std::string(e.what()).find("31/31/2010 8:26"), std::string::npos) << e.what();
    }
}

TEST(ParseTransactions, WrongFieldCountIsAParseError) {
    EXPECT_THROW(parse("536365,85123A,X,6\n"), ParseError);
}

TEST(ParseTransactions, MissingColumnIsAConfigError) {
    std::istringstream in("InvoiceNo,StockCode,Description,Quantity,InvoiceDate,UnitPrice,Country\n");
    EXPECT_THROW(parse_transactions(in), ConfigError);
}

TEST(ParseTransactions, WriteThenReadRoundTrips) {
    std::vector<TransactionRecord> rows = {line("536365", 6, "2.55", "17850"), line("C536379", -1, "0.001", std::nullopt)};
    rows[1].description = "with, comma";
    for (char sep : {'.', ','}) {
        ParseConfig cfg;
        cfg.decimal_separator = sep;
        cfg.delimiter = sep == ',' ? ';' : ',';
        std::ostringstream out;
        write_transactions(out, rows, cfg);
        std::istringstream in(out.str());
        EXPECT_EQ(parse_transactions(in, cfg), rows) << out.str();
    }
}

TEST(Clean, EachFilterFiresOnce) {
    const std::vector<TransactionRecord> rows = {line("1", 1, "1.00", std::nullopt), line("2", -2, "1.00", "12346"),
                                                 line("3", 1, "1.00", "12347")};
    const auto r = clean(rows);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].invoice_no, "3");
    EXPECT_EQ(r.report.rows_in, 3u);
    EXPECT_EQ(r.report.nulls_removed(), 1u);
    EXPECT_EQ(r.report.negatives_removed, 1u);
    EXPECT_EQ(r.report.duplicates_removed, 0u);
    EXPECT_EQ(r.report.rows_after_dedup, 1u);
}

TEST(Clean, ZeroQuantityIsDroppedAndDuplicatesKeepFirst) {
    auto a = line("1", 2, "1.00", "12346");
    auto b = a;
    auto c = a;
    c.country = "France";  // differs in one field, so not a duplicate
    const std::vector<TransactionRecord> rows = {a, line("2", 0, "1.00", "12346"), b, c};
    const auto r = clean(rows);
    EXPECT_EQ(r.report.negatives_removed, 1u);
    EXPECT_EQ(r.report.duplicates_removed, 1u);
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.records[1].country, "France");
}

TEST(Clean, DisabledStagesPassCountsThrough) {
    const std::vector<TransactionRecord> rows = {line("1", 1, "1.00", std::nullopt), line("1", 1, "1.00", std::nullopt)};
    CleanConfig cfg;
    cfg.drop_missing_customer = false;
    cfg.deduplicate = false;
    const auto r = clean(rows, cfg);
    EXPECT_EQ(r.report.rows_after_null_drop, 2u);
    EXPECT_EQ(r.report.rows_after_dedup, 2u);
    EXPECT_EQ(r.records.size(), 2u);
}

TEST(AggregateInvoices, OneLineInvoice) {
    const std::vector<TransactionRecord> rows = {line("536369", 3, "2.00", "13047")};
    const auto inv = aggregate_invoices(rows);
    ASSERT_EQ(inv.size(), 1u);
    EXPECT_EQ(inv[0].line_count, 1u);
    EXPECT_EQ(inv[0].invoice_total.to_string(), "6.00");
}

TEST(AggregateInvoices, GroupsAndSortsByInvoice) {
    const std::vector<TransactionRecord> rows = {line("536366", 6, "1.85", "17850"), line("536365", 6, "2.55", "17850"),
                                                 line("536366", 6, "1.85", "17850"), line("536365", 8, "2.75", "17850")};
    const auto inv = aggregate_invoices(rows);
    ASSERT_EQ(inv.size(), 2u);
    EXPECT_EQ(inv[0].invoice_no, "536365");
    EXPECT_EQ(inv[0].line_count, 2u);
    EXPECT_EQ(inv[0].invoice_total, Money::parse("37.30"));
    EXPECT_EQ(inv[1].invoice_total, Money::parse("22.20"));
}
