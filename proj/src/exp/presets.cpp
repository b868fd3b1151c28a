#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "minfo/experiment.hpp"

namespace minfo {

std::string preset_directory() {
  if (const char* env = std::getenv("MINFO_PRESET_DIR")) return env;
#ifdef MINFO_PRESET_SOURCE_DIR
  if (std::filesystem::is_directory(MINFO_PRESET_SOURCE_DIR)) return MINFO_PRESET_SOURCE_DIR;
#endif
  return "presets";
}

std::vector<std::string> bundled_preset_names() {
  namespace fs = std::filesystem;
  std::vector<std::string> names;
  const fs::path dir = preset_directory();
  if (!fs::is_directory(dir)) return names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      names.push_back(entry.path().stem().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string bundled_preset_path(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path candidate = fs::path(preset_directory()) / (name + ".json");
  if (!fs::is_regular_file(candidate)) {
    std::string available;
    for (const auto& n : bundled_preset_names()) {
      if (!available.empty()) available += ", ";
      available += n;
    }
    throw ConfigError("unknown preset '" + name + "' (available: " + available + ")");
  }
  return candidate.string();
}

}  // namespace minfo
