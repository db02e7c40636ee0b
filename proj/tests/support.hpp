#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>
#include <string>

#include "netforge/core.hpp"

namespace test {

inline std::string source_path(const std::string& rel) { return std::string(NETFORGE_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("netforge_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name = "") const { return name.empty() ? path_.string() : (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline netforge::ComponentRef resistor(std::vector<netforge::NetRef> ports = {1, "GND"}) {
  return netforge::make_component("res", std::move(ports), {{"R", 1e3}}, "R");
}

inline netforge::ComponentRef nmos(std::vector<netforge::NetRef> ports = {1, "INPUT", 3, "GND"}) {
  return netforge::make_component("nmos", std::move(ports), {{"w", 0.135}}, "M");
}

}  // namespace test
