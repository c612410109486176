#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace dtmech {

using Json = nlohmann::ordered_json;

// One table cell. Doubles are printed shortest round-trip.
using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

// What a subcommand produces: a table for CSV, and a JSON tree for the data section.
// When tree is null, the table is converted (list of row objects).
struct Payload {
  Table table;
  Json tree;
  Json summary = Json::object();  // extra results that are not rows (fits, flags)
};

std::string format_number(double v);
std::string to_csv(const Table& table);
Json table_to_json(const Table& table);

// Replaces path atomically: writes a sibling temp file, then renames it over the target.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace dtmech
