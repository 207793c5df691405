#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace gausskey::cli {

using Cell = std::variant<double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_real(double value);

std::string to_csv(const Table& table);
nlohmann::json to_json(const Cell& cell);
nlohmann::json rows_to_json(const Table& table);  ///< array of objects keyed by column

/// Two-column key,value table from an ordered list of pairs.
Table key_value_table(const std::vector<std::pair<std::string, Cell>>& entries);
nlohmann::json key_value_json(const std::vector<std::pair<std::string, Cell>>& entries);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const nlohmann::json& doc);

}  // namespace gausskey::cli
