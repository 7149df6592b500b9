#include "flame/presets.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "presets_data.hpp"

namespace flame {

namespace {

const std::map<std::string, std::string>& preset_map() {
  static const std::map<std::string, std::string> presets{
      {"flame2_on_res", detail::kPresetFlame2OnRes},
      {"flame2_off_res", detail::kPresetFlame2OffRes},
      {"flame2_no_dressing", detail::kPresetFlame2NoDressing},
      {"flame1_off_res", detail::kPresetFlame1OffRes},
  };
  return presets;
}

void flatten(const nlohmann::json& node, const std::string& path,
             std::set<std::string>& leaves) {
  if (!node.is_object()) {
    leaves.insert(path);
    return;
  }
  for (auto it = node.begin(); it != node.end(); ++it)
    flatten(*it, path.empty() ? it.key() : path + "." + it.key(), leaves);
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, text] : preset_map()) v.push_back(name);
    return v;
  }();
  return names;
}

bool is_preset(const std::string& name) {
  return preset_map().count(name) > 0;
}

const std::string& preset_json(const std::string& name) {
  auto it = preset_map().find(name);
  if (it == preset_map().end())
    throw std::out_of_range("unknown preset '" + name + "'");
  return it->second;
}

std::vector<std::string> lint_presets() {
  std::vector<std::string> problems;
  for (const auto& [name, text] : preset_map()) {
    nlohmann::json root;
    try {
      root = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
      problems.push_back(name + ": " + e.what());
      continue;
    }
    std::set<std::string> leaves;
    for (auto it = root.begin(); it != root.end(); ++it) {
      if (it.key() == "provenance" || it.key() == "name") continue;
      flatten(*it, it.key(), leaves);
    }
    if (!root.contains("provenance") || !root["provenance"].is_object()) {
      problems.push_back(name + ": missing provenance block");
      continue;
    }
    const auto& prov = root["provenance"];
    for (const auto& leaf : leaves) {
      auto it = prov.find(leaf);
      if (it == prov.end())
        problems.push_back(name + ": no provenance note for " + leaf);
      else if (!it->is_string() || it->get<std::string>().empty())
        problems.push_back(name + ": empty provenance note for " + leaf);
    }
    for (auto it = prov.begin(); it != prov.end(); ++it)
      if (leaves.count(it.key()) == 0)
        problems.push_back(name + ": provenance note for unknown key " +
                           it.key());
  }
  return problems;
}

}  // namespace flame
