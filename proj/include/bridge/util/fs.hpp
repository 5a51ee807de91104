#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace bridge::fs {

std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Creates a fresh, uniquely named directory below `parent` (mkdtemp semantics).
std::filesystem::path make_unique_dir(const std::filesystem::path& parent, std::string_view prefix);

/// Owns a directory tree and removes it on destruction.
class ScopedDir {
 public:
  explicit ScopedDir(std::filesystem::path path) : path_(std::move(path)) {}
  ScopedDir(const ScopedDir&) = delete;
  ScopedDir& operator=(const ScopedDir&) = delete;
  ScopedDir(ScopedDir&& other) noexcept : path_(std::move(other.path_)) { other.path_.clear(); }
  ~ScopedDir();

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace bridge::fs
