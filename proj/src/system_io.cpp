#include "affdim/system_io.hpp"

#include <fstream>

namespace affdim {

namespace {

Rational field(const nlohmann::json& entry, const char* key, std::size_t index) {
  const std::string where = "map " + std::to_string(index + 1) + ": ";
  if (!entry.contains(key)) throw ValidationError(where + "missing field '" + key + "'");
  const auto& value = entry.at(key);
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(where + "field '" + key + "': " + e.what());
    }
  }
  if (value.is_number_integer()) return Rational(Integer(std::to_string(value.get<long long>())));
  throw ValidationError(where + "field '" + key + "' must be a rational string such as \"1/3\" or \"0.25\"");
}

}  // namespace

IFSSystem system_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("maps") || !doc.at("maps").is_array())
    throw ValidationError("system file must be an object with a \"maps\" array");
  std::vector<AffineMap2D> maps;
  const auto& list = doc.at("maps");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& entry = list[i];
    if (!entry.is_object()) throw ValidationError("map " + std::to_string(i + 1) + ": expected an object");
    Rational alpha = field(entry, "alpha", i), beta = field(entry, "beta", i);
    Rational u = field(entry, "u", i), v = field(entry, "v", i);
    if (auto msg = generator_violation(alpha, beta, u, v); !msg.empty())
      throw ValidationError("map " + std::to_string(i + 1) + ": " + msg);
    maps.push_back(AffineMap2D::make(alpha, beta, u, v));
  }
  return IFSSystem(std::move(maps));
}

IFSSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open system file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid JSON in '" + path + "': " + e.what());
  }
  return system_from_json(doc);
}

nlohmann::json system_to_json(const IFSSystem& system) {
  nlohmann::json maps = nlohmann::json::array();
  for (const auto& m : system.maps())
    maps.push_back({{"alpha", to_string(m.alpha)}, {"beta", to_string(m.beta)}, {"u", to_string(m.u)},
                    {"v", to_string(m.v)}});
  return {{"maps", maps}};
}

nlohmann::json word_to_json(const Word& word) {
  nlohmann::json out = nlohmann::json::array();
  for (auto i : word) out.push_back(i + 1);
  return out;
}

Word word_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ValidationError("word must be an array of 1-based indices");
  Word w;
  for (const auto& x : doc) {
    if (!x.is_number_integer() || x.get<long long>() < 1) throw ValidationError("word indices are 1-based integers");
    w.push_back(static_cast<std::uint32_t>(x.get<long long>() - 1));
  }
  return w;
}

nlohmann::json fibre_to_json(const Word& prefix, std::size_t depth, const IntervalUnion& set) {
  nlohmann::json intervals = nlohmann::json::array();
  for (const auto& iv : set.intervals()) intervals.push_back({to_string(iv.lo), to_string(iv.hi)});
  return {{"prefix", word_to_json(prefix)}, {"depth", depth}, {"intervals", intervals}};
}

}  // namespace affdim
