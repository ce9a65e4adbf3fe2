#pragma once

#include <json.hpp>

#include <string>

#include "affdim/core_ifs.hpp"
#include "affdim/interval_union.hpp"

namespace affdim {

/// System definition file: {"maps":[{"alpha":"1/2","beta":"1/4","u":"0","v":"3/4"}, ...]}.
/// Parameters are strings ("p/q" or exact decimals) or JSON integers; floats
/// are rejected because they are not exact. Violations of the generator
/// invariants raise ValidationError naming the inequality and the map.
IFSSystem system_from_json(const nlohmann::json& doc);
IFSSystem load_system(const std::string& path);

nlohmann::json system_to_json(const IFSSystem& system);

/// Fibre approximant export: {"prefix":[1,3], "depth":4, "intervals":[["0","7/16"],["3/4","1"]]}.
nlohmann::json fibre_to_json(const Word& prefix, std::size_t depth, const IntervalUnion& set);

nlohmann::json word_to_json(const Word& word);  // 1-based
Word word_from_json(const nlohmann::json& doc);  // 1-based input

}  // namespace affdim
