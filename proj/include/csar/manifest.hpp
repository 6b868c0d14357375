#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "csar/corpus.hpp"
#include "csar/rng.hpp"

namespace csar {

inline constexpr const char* kVersion = "0.1.0";

/// Stable hash of effective settings, independent of flag order.
inline std::string fingerprint(
    std::vector<std::pair<std::string, std::string>> settings) {
  std::sort(settings.begin(), settings.end());
  std::string canon;
  for (const auto& [k, v] : settings) {
    canon += k;
    canon += '=';
    canon += v;
    canon += '\n';
  }
  const std::uint64_t h = fnv1a64(canon);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunManifest {
  std::string command;
  std::string fingerprint;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::string>> settings;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, std::string>> outputs;
  double duration_seconds = 0.0;
  std::string status = "ok";
  std::string error;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["fingerprint"] = fingerprint;
    j["seeds"] = seeds;
    auto kv = [](const std::vector<std::pair<std::string, std::string>>& pairs) {
      nlohmann::ordered_json o = nlohmann::ordered_json::object();
      for (const auto& [k, v] : pairs) o[k] = v;
      return o;
    };
    j["settings"] = kv(settings);
    j["inputs"] = kv(inputs);
    j["outputs"] = kv(outputs);
    j["version"] = kVersion;
    j["duration_seconds"] = duration_seconds;
    j["status"] = status;
    if (!error.empty()) j["error"] = error;
    return j;
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write manifest: " + path);
    out << to_json().dump(2) << '\n';
  }
};

}  // namespace csar
