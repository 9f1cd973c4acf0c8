#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace osskg::analytics {

/// Rectangular result with a header row; every analytic renders to one.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  friend bool operator==(const Table&, const Table&) = default;
};

/// RFC 4180 quoting, '\n' line ends, header first.
std::string to_csv(const Table& table);

/// Space-aligned columns for terminals.
std::string to_text(const Table& table);

void write_csv(const std::filesystem::path& path, const Table& table);

/// Fixed-point rendering, e.g. fixed(2.5, 2) == "2.50".
std::string fixed(double value, int decimals);

}  // namespace osskg::analytics
