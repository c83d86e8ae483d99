#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace qsplit {

inline constexpr int kSchemaVersion = 1;

/// %.17g: enough digits to round-trip every double.
std::string fmt17(double v);

/// Comma-separated table with a header row; '.' decimal point.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t width_;
};

/// JSON text with every float printed through fmt17. Object keys come out
/// sorted, so equal documents give equal bytes.
void dump_json(std::ostream& os, const nlohmann::json& j, int indent = 2);

/// Adds schema_version and writes the document.
void write_json(const std::filesystem::path& path, nlohmann::json j);

}  // namespace qsplit
