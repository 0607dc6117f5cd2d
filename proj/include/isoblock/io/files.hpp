#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "isoblock/core/common.hpp"

namespace isoblock {
namespace io {

/// Writes `content` to `path` atomically: the bytes land in a sibling
/// temporary file first and are moved into place with a rename, so a crash
/// mid-write never leaves a truncated output file.
inline void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw config_error("cannot create directory " + target.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw config_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw config_error("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

/// Reads an entire text file; throws config_error if it cannot be opened.
inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

}  // namespace io
}  // namespace isoblock
