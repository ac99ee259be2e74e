#pragma once

// Plot-ready series and the writer that turns them into CSV files or one
// JSON document per command.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace kzk::cli {

enum class Format { csv, json };

struct Series {
  std::string name;  // file stem for CSV output
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  nlohmann::json meta = nlohmann::json::object();

  void add_row(std::vector<nlohmann::json> row);
};

class Sink {
 public:
  Sink(std::filesystem::path dir, Format format);

  void add(Series series);
  /// Writes everything collected and returns the paths written.
  std::vector<std::filesystem::path> finish(const std::string& command, const nlohmann::json& config);

 private:
  std::filesystem::path dir_;
  Format format_;
  std::vector<Series> series_;
};

/// Shortest round-trippable text for a double, used for CSV cells.
std::string format_number(double x);

}  // namespace kzk::cli
