#include "output.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace kzk::cli {

void Series::add_row(std::vector<nlohmann::json> row) {
  if (row.size() != columns.size())
    throw std::logic_error("series " + name + ": row width does not match the columns");
  rows.push_back(std::move(row));
}

Sink::Sink(std::filesystem::path dir, Format format) : dir_(std::move(dir)), format_(format) {}

void Sink::add(Series series) { series_.push_back(std::move(series)); }

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_null()) return "";
  return v.dump();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

}  // namespace

std::vector<std::filesystem::path> Sink::finish(const std::string& command, const nlohmann::json& config) {
  std::filesystem::create_directories(dir_);
  std::vector<std::filesystem::path> written;
  if (format_ == Format::csv) {
    for (const Series& s : series_) {
      const auto path = dir_ / (s.name + ".csv");
      std::ofstream os = open_out(path);
      if (!s.meta.empty()) os << "# " << s.meta.dump() << '\n';
      for (std::size_t c = 0; c < s.columns.size(); ++c) os << (c ? "," : "") << s.columns[c];
      os << '\n';
      for (const auto& row : s.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
        os << '\n';
      }
      written.push_back(path);
    }
  } else {
    nlohmann::json doc;
    doc["command"] = command;
    doc["config"] = config;
    auto& arr = doc["series"] = nlohmann::json::array();
    for (const Series& s : series_) {
      nlohmann::json j;
      j["name"] = s.name;
      j["meta"] = s.meta;
      j["columns"] = s.columns;
      j["rows"] = s.rows;
      arr.push_back(std::move(j));
    }
    const auto path = dir_ / (command + ".json");
    std::ofstream os = open_out(path);
    os << doc.dump(1) << '\n';
    written.push_back(path);
  }
  series_.clear();
  return written;
}

}  // namespace kzk::cli
