#pragma once

// Row buffer shared by all subcommands, written as CSV or as a single JSON
// object {config, columns, rows[, summary]}. Floating values always use %.17g.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cli {

using Cell = std::variant<double, long, std::string>;
using Row = std::vector<Cell>;
using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  KeyValues summary;

  void write_csv(std::ostream& os, const KeyValues& config) const {
    for (const auto& [k, v] : config) os << "# " << k << " = " << v << '\n';
    for (const auto& [k, v] : summary) os << "# summary " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const Row& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) os << ',';
        if (const double* d = std::get_if<double>(&r[i]))
          os << format_double(*d);
        else if (const long* l = std::get_if<long>(&r[i]))
          os << *l;
        else
          os << std::get<std::string>(r[i]);
      }
      os << '\n';
    }
  }

  // Numbers are emitted by hand so the 17-digit format holds in JSON too;
  // non-finite values become null.
  void write_json(std::ostream& os, const KeyValues& config) const {
    auto str = [](const std::string& s) { return nlohmann::json(s).dump(); };
    auto obj = [&](const KeyValues& kv) {
      std::string out = "{";
      for (std::size_t i = 0; i < kv.size(); ++i)
        out += (i ? "," : "") + str(kv[i].first) + ":" + str(kv[i].second);
      return out + "}";
    };
    os << "{\"config\":" << obj(config) << ",\"columns\":[";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << str(columns[i]);
    os << "],\"rows\":[";
    for (std::size_t j = 0; j < rows.size(); ++j) {
      os << (j ? ",\n" : "\n") << '[';
      const Row& r = rows[j];
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) os << ',';
        if (const double* d = std::get_if<double>(&r[i]))
          os << (std::isfinite(*d) ? format_double(*d) : "null");
        else if (const long* l = std::get_if<long>(&r[i]))
          os << *l;
        else
          os << str(std::get<std::string>(r[i]));
      }
      os << ']';
    }
    os << "\n]";
    if (!summary.empty()) os << ",\"summary\":" << obj(summary);
    os << "}\n";
  }
};

}  // namespace cli
