#include "chaosrng/map_json.hpp"

#include <json.hpp>

#include "chaosrng/error.hpp"

namespace chaosrng {

using nlohmann::json;

PiecewiseMap map_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("map definition is not valid JSON: ") + e.what());
  }
  try {
    const std::string label = doc.value("label", std::string("custom"));
    const auto& items = doc.at("branches");
    if (!items.is_array()) throw ConfigError("map definition: \"branches\" must be an array");
    std::vector<Branch> branches;
    for (const auto& item : items) {
      const auto kind = item.at("kind").get<std::string>();
      const auto domain = item.at("domain").get<std::vector<double>>();
      if (domain.size() != 2) throw ConfigError("map definition: domain must be [a, b]");
      const Interval dom{domain[0], domain[1]};
      if (kind == "affine") {
        branches.push_back(
            Branch::affine(dom, item.at("slope").get<double>(), item.at("intercept").get<double>()));
      } else if (kind == "log2-affine") {
        branches.push_back(Branch::log2_affine(dom, item.at("scale").get<double>(),
                                               item.at("shift").get<double>(),
                                               item.at("offset").get<double>()));
      } else {
        throw ConfigError("map definition: unknown branch kind '" + kind + "'");
      }
    }
    std::map<std::string, double> params;
    if (doc.contains("params")) params = doc.at("params").get<std::map<std::string, double>>();
    return PiecewiseMap(label, std::move(branches), std::move(params));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("map definition: ") + e.what());
  }
}

std::string map_to_json(const PiecewiseMap& map) {
  json doc;
  doc["label"] = map.label();
  json branches = json::array();
  for (const auto& b : map.branches()) {
    json item;
    item["domain"] = {b.domain().lo, b.domain().hi};
    if (const auto* a = std::get_if<AffineForm>(&b.form())) {
      item["kind"] = "affine";
      item["slope"] = a->slope;
      item["intercept"] = a->intercept;
    } else {
      const auto& l = std::get<Log2AffineForm>(b.form());
      item["kind"] = "log2-affine";
      item["scale"] = l.scale;
      item["shift"] = l.shift;
      item["offset"] = l.offset;
    }
    branches.push_back(std::move(item));
  }
  doc["branches"] = std::move(branches);
  if (!map.params().empty()) doc["params"] = map.params();
  return doc.dump(2);
}

}  // namespace chaosrng
