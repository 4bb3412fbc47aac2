#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rfmseg/dataio.hpp"
#include "rfmseg/matrix.hpp"

namespace rfmseg {

enum class Segment { Top, HighValue, MediumValue, LowValue, Lost };

inline constexpr Segment kAllSegments[] = {Segment::Top, Segment::HighValue, Segment::MediumValue, Segment::LowValue,
                                           Segment::Lost};

std::string_view to_string(Segment s);
std::optional<Segment> parse_segment(std::string_view name);

/// How purchase frequency is counted per customer.
enum class FrequencyMode {
    Lines,          ///< number of ledger lines
    DistinctDates,  ///< number of distinct invoice calendar dates
};

/// How whole days of recency are measured against the reference time.
enum class RecencyMode {
    ElapsedDays,   ///< floor((reference - last purchase) / 24h)
    CalendarDays,  ///< difference of calendar dates
};

struct RfmConfig {
    FrequencyMode frequency = FrequencyMode::Lines;
    RecencyMode recency = RecencyMode::ElapsedDays;
    /// Defaults to the latest invoice timestamp in the data.
    std::optional<Timestamp> reference;
};

struct CustomerRFM {
    std::string customer_id;
    std::int64_t recency = 0;
    std::size_t frequency = 0;
    Money monetary;
    double r_score = 0.0;
    double f_score = 0.0;
    double m_score = 0.0;
    /// Weighted score rounded to two decimals.
    double rfm_score = 0.0;
    Segment segment = Segment::Lost;
};

/// Segment-score weights; the weighted sum of (0,100] ranks is divided by
/// `scale_divisor` to land on a 0-5 scale.
struct RfmWeights {
    double recency = 0.15;
    double frequency = 0.28;
    double monetary = 0.57;
    double scale_divisor = 20.0;

    /// Throws ConfigError unless weights are non-negative with a positive
    /// sum and the divisor is positive.
    void validate() const;
};

/// Strict lower bounds: a score above `top` is Top, above `high` HighValue,
/// and so on; anything at or below `low` is Lost.
struct SegmentThresholds {
    double top = 4.5;
    double high = 4.0;
    double medium = 3.0;
    double low = 1.6;

    void validate() const;
};

Timestamp latest_invoice_date(std::span<const TransactionRecord> records);

/// Recency, frequency and monetary value per customer, ascending by id.
/// Records without a customer id are ignored. Throws ConfigError when the
/// reference time precedes an invoice.
std::vector<CustomerRFM> compute_rfm(std::span<const TransactionRecord> records, const RfmConfig& cfg = {});

enum class RankDirection { LowerIsBetter, HigherIsBetter };

/// Average-rank scores rank / max_rank * 100 in (0, 100]. The best value
/// gets the top rank. Throws std::invalid_argument on empty input.
std::vector<double> rank_normalize(std::span<const double> values, RankDirection direction);

/// Weighted score from populated r/f/m scores, unrounded.
double weighted_rfm_score(const CustomerRFM& c, const RfmWeights& w);
/// Weighted score rounded to two decimals.
double rfm_score(const CustomerRFM& c, const RfmWeights& w);

Segment assign_segment(double score, const SegmentThresholds& t = {});

/// Fills rank scores, rfm_score and segment for every customer.
void score_customers(std::vector<CustomerRFM>& customers, const RfmWeights& w = {}, const SegmentThresholds& t = {});

struct SegmentShare {
    Segment segment;
    std::size_t count = 0;
    double percent = 0.0;
    /// Largest-remainder rounding; the five values sum to exactly 100.
    int rounded_percent = 0;
};

/// One entry per segment in Top..Lost order. Throws std::invalid_argument
/// on empty input.
std::vector<SegmentShare> segment_distribution(std::span<const Segment> segments);

struct CalibrationRow {
    std::string customer_id;
    double expected = 0.0;
    std::optional<double> actual;
    double deviation = 0.0;
};

/// Compares scored customers against reference (id, score) pairs.
std::vector<CalibrationRow> calibrate_scores(std::span<const CustomerRFM> customers,
                                             std::span<const std::pair<std::string, double>> reference);

/// Column selection for build_feature_matrix. Customer-level names:
/// recency, frequency, monetary, r_score, f_score, m_score, rfm_score.
/// Invoice-level names: line_count, invoice_total.
struct FeatureSpec {
    std::vector<std::string> columns;
};

bool is_customer_feature(std::string_view name);
bool is_invoice_feature(std::string_view name);

/// Rows in ascending customer id order. Throws ConfigError for unknown or
/// invoice-level names.
FeatureMatrix build_feature_matrix(std::span<const CustomerRFM> customers, const FeatureSpec& spec);
/// Rows in ascending invoice number order.
FeatureMatrix build_feature_matrix(std::span<const InvoiceSummary> invoices, const FeatureSpec& spec);

struct RowSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded random split of row indices; both halves are returned ascending.
RowSplit train_test_split(std::size_t n, double test_fraction, std::uint64_t seed);

}  // namespace rfmseg
