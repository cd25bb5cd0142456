#include "cli/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace curvflow::cli {

namespace {

std::string scalar_text(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    return s.str();
  }
  throw UsageError("config key '" + key + "' has an unsupported value type");
}

}  // namespace

void apply_json_config(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");

  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("unknown config key '" + key + "' for " + sub.get_name());
    if (opt->count() > 0) continue;  // the command line wins
    std::vector<std::string> results;
    if (value.is_array()) {
      for (const auto& item : value) results.push_back(scalar_text(item, key));
    } else {
      results.push_back(scalar_text(value, key));
    }
    try {
      opt->clear();
      for (const auto& r : results) opt->add_result(r);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
}

}  // namespace curvflow::cli
