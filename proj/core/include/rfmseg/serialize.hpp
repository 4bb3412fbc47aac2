#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rfmseg/agglomerative.hpp"
#include "rfmseg/birch.hpp"
#include "rfmseg/dataio.hpp"
#include "rfmseg/features.hpp"
#include "rfmseg/gmm.hpp"
#include "rfmseg/kmeans.hpp"
#include "rfmseg/matrix.hpp"
#include "rfmseg/numeric.hpp"

namespace rfmseg {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// customer_id,recency,frequency,monetary,r_score,f_score,m_score,rfm_score,segment
void write_customers_csv(std::ostream& out, std::span<const CustomerRFM> customers);
/// invoice_no,line_count,invoice_total
void write_invoices_csv(std::ostream& out, std::span<const InvoiceSummary> invoices);
/// id,label
void write_labels_csv(std::ostream& out, std::span<const std::string> row_ids, std::span<const int> labels);
/// id followed by one column per feature.
void write_matrix_csv(std::ostream& out, const FeatureMatrix& m);

/// Reads what write_matrix_csv wrote (scaling metadata is not stored).
/// Throws DataError on malformed input.
FeatureMatrix read_matrix_csv(std::istream& in);
/// Reads what write_labels_csv wrote.
std::vector<int> read_labels_csv(std::istream& in, std::vector<std::string>* row_ids = nullptr);

/// Pretty-printed JSON documents.
std::string to_json(const CleaningReport& r);
std::string to_json(std::span<const SegmentShare> shares);
std::string to_json(const KMeansModel& m);
std::string to_json(const GmmModel& m);
std::string to_json(const BirchFit& f);
std::string to_json(const AgglomerativeFit& f);
std::string to_json(const PcaModel& m);
std::string to_json(const Scaling& s);

}  // namespace rfmseg
