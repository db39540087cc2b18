// csv.hpp
// Small CSV writer used by every experiment output: RFC-4180 style rows,
// '#'-prefixed comment headers, and whole-file atomic writes (temp file +
// rename) so concurrent experiment fan-out never exposes partial files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <type_traits>

namespace harperent::csv {

/// Shortest round-trip decimal form of v ("0.05", not "0.050000000000000003").
/// Deterministic, so identical runs produce byte-identical files.
std::string format_double(double v);

/// Quotes a field if it contains a comma, quote, or newline.
std::string escape_field(std::string_view field);

class Table {
 public:
  explicit Table(std::filesystem::path path) : path_(std::move(path)) {}

  /// Appends a "# text" comment line.
  void comment(std::string_view text);

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    (append_field(to_field(fields), first), ...);
    buffer_ += '\n';
  }

  /// Writes the buffered content to a temp file and renames it into place.
  void write() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  static std::string to_field(double v) { return format_double(v); }
  static std::string to_field(bool v) { return v ? "1" : "0"; }
  static std::string to_field(int v) { return std::to_string(v); }
  static std::string to_field(std::int64_t v) { return std::to_string(v); }
  static std::string to_field(std::uint64_t v) { return std::to_string(v); }
  static std::string to_field(std::string_view v) {
    return escape_field(v);
  }
  static std::string to_field(const std::string& v) { return escape_field(v); }
  static std::string to_field(const char* v) { return escape_field(v); }

  void append_field(const std::string& field, bool& first) {
    if (!first) buffer_ += ',';
    buffer_ += field;
    first = false;
  }

  std::filesystem::path path_;
  std::string buffer_;
};

/// Writes content to path atomically (temp file in the same directory,
/// then rename).
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace harperent::csv
