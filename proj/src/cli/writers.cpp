#include "writers.hpp"

#include <charconv>
#include <cmath>

namespace gausskey::cli {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  // to_chars ignores the C locale, unlike printf.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  return std::get<std::string>(cell);
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string text;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) text += ',';
    text += table.columns[i];
  }
  text += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) text += ',';
      text += cell_text(row[i]);
    }
    text += '\n';
  }
  return text;
}

nlohmann::json to_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, cell);
}

nlohmann::json rows_to_json(const Table& table) {
  auto rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

Table key_value_table(const std::vector<std::pair<std::string, Cell>>& entries) {
  Table t{{"key", "value"}, {}};
  for (const auto& [key, value] : entries) t.rows.push_back({key, value});
  return t;
}

nlohmann::json key_value_json(const std::vector<std::pair<std::string, Cell>>& entries) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [key, value] : entries) obj[key] = to_json(value);
  return obj;
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace gausskey::cli
