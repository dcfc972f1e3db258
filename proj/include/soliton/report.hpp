#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace soliton::report {

/// Numeric table. Cells are written with %.17g so output is bit-reproducible.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::string> units;  // same length as columns
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  /// First line "# units: col=unit, ...", then the header row, then data.
  void write_csv(const std::filesystem::path& path) const;
  std::string to_csv() const;
};

std::string format_number(double v);

/// Pretty-printed with sorted keys and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal SVG line chart: axes box, tick labels at the data extremes, one
/// polyline per series and a legend. Non-finite points are skipped.
std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace soliton::report
