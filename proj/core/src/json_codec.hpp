#pragma once

// nlohmann::json builders shared by serialize.cpp and pipeline.cpp. Kept out
// of the public headers so consumers do not need the JSON library.

#include <nlohmann/json.hpp>

#include "rfmseg/serialize.hpp"

namespace rfmseg::detail {

using Json = nlohmann::ordered_json;

Json json_of(const Matrix& m);
Json json_of(const CleaningReport& r);
Json json_of(std::span<const SegmentShare> shares);
Json json_of(const KMeansModel& m);
Json json_of(const GmmModel& m);
Json json_of(const BirchFit& f);
Json json_of(const AgglomerativeFit& f);
Json json_of(const PcaModel& m);
Json json_of(const Scaling& s);

}  // namespace rfmseg::detail
