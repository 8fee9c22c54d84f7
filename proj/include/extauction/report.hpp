#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace extauction {

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<std::string, std::int64_t, double, bool>;

/// Tabular experiment output plus a small summary block.
struct ExperimentReport
{
  std::string name;
  std::uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;

  void add_row(std::vector<Cell> row);
  void set_summary(const std::string &key, Cell value);
};

enum class ReportFormat
{
  Csv,
  Json,
};

/// 12 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

std::string format_cell(const Cell &cell);

/// Header line followed by one line per row, in column order.
std::string to_csv(const ExperimentReport &report);

/// Summary document with schema version, seed, name, row count and summary entries.
std::string to_json(const ExperimentReport &report);

/// Writes the report; throws std::runtime_error naming the path on IO failure.
void emit_report(const ExperimentReport &report, ReportFormat format, const std::filesystem::path &path);

}  // namespace extauction
