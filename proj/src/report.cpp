#include "extauction/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace extauction {

namespace {

std::string csv_escape(const std::string &text)
{
  if (text.find_first_of(",\"\n") == std::string::npos)
  {
    return text;
  }
  std::string out = "\"";
  for (char ch : text)
  {
    if (ch == '"')
    {
      out += '"';
    }
    out += ch;
  }
  out += '"';
  return out;
}

nlohmann::ordered_json cell_to_json(const Cell &cell)
{
  return std::visit(
      [](const auto &v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>)
        {
          if (!std::isfinite(v))
          {
            return format_number(v);
          }
          // round-trip through the 12-digit rendering so JSON and CSV agree
          return std::stod(format_number(v));
        }
        else
        {
          return v;
        }
      },
      cell);
}

}  // namespace

void ExperimentReport::add_row(std::vector<Cell> row)
{
  if (row.size() != columns.size())
  {
    throw std::invalid_argument("report row has " + std::to_string(row.size()) + " cells, expected " +
                                std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void ExperimentReport::set_summary(const std::string &key, Cell value)
{
  for (auto &[k, v] : summary)
  {
    if (k == key)
    {
      v = std::move(value);
      return;
    }
  }
  summary.emplace_back(key, std::move(value));
}

std::string format_number(double x)
{
  if (std::isnan(x))
  {
    return "nan";
  }
  if (std::isinf(x))
  {
    return x > 0 ? "inf" : "-inf";
  }
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

std::string format_cell(const Cell &cell)
{
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>)
        {
          return v;
        }
        else if constexpr (std::is_same_v<T, double>)
        {
          return format_number(v);
        }
        else if constexpr (std::is_same_v<T, bool>)
        {
          return v ? "true" : "false";
        }
        else
        {
          return std::to_string(v);
        }
      },
      cell);
}

std::string to_csv(const ExperimentReport &report)
{
  std::string out;
  for (std::size_t j = 0; j < report.columns.size(); ++j)
  {
    out += (j ? "," : "") + csv_escape(report.columns[j]);
  }
  out += '\n';
  for (const auto &row : report.rows)
  {
    for (std::size_t j = 0; j < row.size(); ++j)
    {
      out += (j ? "," : "") + csv_escape(format_cell(row[j]));
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ExperimentReport &report)
{
  nlohmann::ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["name"] = report.name;
  doc["seed"] = report.seed;
  doc["rows"] = report.rows.size();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto &[key, value] : report.summary)
  {
    summary[key] = cell_to_json(value);
  }
  doc["summary"] = summary;
  return doc.dump(2) + "\n";
}

void emit_report(const ExperimentReport &report, ReportFormat format, const std::filesystem::path &path)
{
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
  {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  file << (format == ReportFormat::Csv ? to_csv(report) : to_json(report));
  file.flush();
  if (!file)
  {
    throw std::runtime_error("failed writing '" + path.string() + "'");
  }
}

}  // namespace extauction
