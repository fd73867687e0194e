#pragma once

// JSON envelope and disk cache used by the command-line tool.  All numbers
// cross the serialization boundary as exact strings; field order is fixed so
// identical invocations are byte-identical.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "gravity/arnold.hpp"
#include "gravity/exact_linalg.hpp"

namespace gravity {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "gravity";
inline constexpr const char* kToolVersion = "0.1.0";

inline Json json_envelope(const std::string& command, Json params, Json result) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["params"] = std::move(params);
  j["result"] = std::move(result);
  return j;
}

inline std::string rat_to_string(const Rat& v) {
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
  Rat v;
  if (v.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  v.canonicalize();
  return v;
}

inline Json matrix_to_json(const RationalMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json entries = Json::array();
  m.forEach([&](int r, int c, const Rat& v) {
    entries.push_back(Json::array({r, c, rat_to_string(v)}));
  });
  j["entries"] = std::move(entries);
  return j;
}

// --------------------------------------------------------------------------
// Disk cache: one JSON file per (module, n, k) under a configurable
// directory; writes are atomic (temp file + rename).  Cached payloads are
// revalidated on load.

class DiskCache {
 public:
  explicit DiskCache(std::string dir) : dir_(std::move(dir)) {}

  bool enabled() const { return !dir_.empty(); }

  std::optional<Json> load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    std::filesystem::path p = std::filesystem::path(dir_) / (key + ".json");
    std::ifstream in(p);
    if (!in) return std::nullopt;
    try {
      Json j;
      in >> j;
      if (j.value("version", "") != kToolVersion) return std::nullopt;
      return j;
    } catch (...) {
      return std::nullopt;
    }
  }

  void store(const std::string& key, const Json& payload) const {
    if (!enabled()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    std::filesystem::path final = std::filesystem::path(dir_) / (key + ".json");
    std::filesystem::path tmp = final;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
      Json j = payload;
      j["version"] = kToolVersion;
      out << j.dump(1) << "\n";
    }
    std::filesystem::rename(tmp, final, ec);
    if (ec) throw std::runtime_error("cache: rename failed for " + final.string());
  }

  // nbc bases per degree for one arrangement
  std::string nbcKey(int n, const std::string& conventions) const {
    return "nbc_n" + std::to_string(n) + "_" + conventions;
  }

 private:
  std::string dir_;
};

}  // namespace gravity
