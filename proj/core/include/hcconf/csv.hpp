#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hcconf::csv {

using Record = std::vector<std::string>;

/// RFC 4180-style parsing: quoted fields, doubled quotes, CRLF or LF.
std::vector<Record> parse(std::string_view text);
std::vector<Record> read_file(const std::filesystem::path& path);

/// Quotes a field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);
std::string join(const Record& fields);

/// Fixed notation with 6 fractional digits, '.' separator, no locale.
std::string fixed6(double v);
/// Shortest representation that round-trips exactly.
std::string exact(double v);
/// Empty string for nullopt.
std::string fixed6(const std::optional<double>& v);

/// Whole-field decimal parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);

/// Header-name lookup for one parsed file.
class Columns {
 public:
  explicit Columns(const Record& header);
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws Error(MissingColumn).
  std::size_t require(std::string_view name) const;

 private:
  Record names_;
};

}  // namespace hcconf::csv
