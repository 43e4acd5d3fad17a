#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shearlab {

/// Round-trip exact text for a double (17 significant digits).
std::string format_double(double value);
std::string format_double(const std::optional<double>& value);

/// A homogeneous table: every row has one cell per header column.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  /// Throws std::invalid_argument when the cell count differs from the header.
  void add_row(std::vector<std::string> cells);

  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary file and renames it over `path`, so a
/// reader never sees a partial file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

inline void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  write_file_atomic(path, table.str());
}

}  // namespace shearlab
