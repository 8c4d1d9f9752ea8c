#include "wcoh/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <vector>

#include "wcoh/errors.hpp"

namespace wcoh {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    // trim blanks and optional surrounding quotes
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = (b == std::string::npos) ? "" : f.substr(b, e - b + 1);
    if (f.size() >= 2 && f.front() == '"' && f.back() == '"') f = f.substr(1, f.size() - 2);
  }
  return out;
}

double parse_value(const std::string& field, const std::filesystem::path& path, std::size_t row) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw data_error(path.string() + ": row " + std::to_string(row) + ": unparseable value '" +
                     field + "'");
  return v;
}

struct RawColumn {
  std::vector<std::pair<Date, double>> rows;  // sorted by date after load
  std::string value_column;
};

RawColumn read_rows(const std::filesystem::path& path, const std::string& date_column,
                    const std::string& value_column) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw data_error(path.string() + ": empty file");
  const auto header = split_fields(line);
  auto find_col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw data_error(path.string() + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t date_idx = find_col(date_column);
  const std::size_t value_idx = find_col(value_column);

  RawColumn out;
  out.value_column = value_column;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() <= std::max(date_idx, value_idx))
      throw data_error(path.string() + ": row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    Date d;
    try {
      d = Date::parse(fields[date_idx]);
    } catch (const data_error& e) {
      throw data_error(path.string() + ": row " + std::to_string(row) + ": " + e.what());
    }
    out.rows.emplace_back(d, parse_value(fields[value_idx], path, row));
  }
  if (out.rows.size() < 2)
    throw data_error(path.string() + ": need at least 2 data rows, got " +
                     std::to_string(out.rows.size()));

  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < out.rows.size(); ++i)
    if (out.rows[i].first == out.rows[i - 1].first)
      throw data_error(path.string() + ": duplicate date " + out.rows[i].first.iso());
  return out;
}

std::vector<double> to_daily(const RawColumn& raw, const std::filesystem::path& path,
                             FillPolicy fill) {
  std::vector<double> values;
  values.reserve(raw.rows.size());
  values.push_back(raw.rows.front().second);
  for (std::size_t i = 1; i < raw.rows.size(); ++i) {
    const std::int32_t gap = raw.rows[i].first - raw.rows[i - 1].first;
    if (gap > 1) {
      if (fill == FillPolicy::none)
        throw data_error(path.string() + ": gap in date range: missing " +
                         (raw.rows[i - 1].first + 1).iso() +
                         (gap > 2 ? " (and " + std::to_string(gap - 2) + " more)" : ""));
      for (std::int32_t k = 1; k < gap; ++k) values.push_back(raw.rows[i - 1].second);
    }
    values.push_back(raw.rows[i].second);
  }
  return values;
}

}  // namespace

TimeSeries load_csv(const std::filesystem::path& path, const std::string& date_column,
                    const std::string& value_column, FillPolicy fill) {
  const RawColumn raw = read_rows(path, date_column, value_column);
  TimeSeries ts{value_column, raw.rows.front().first, 1.0, to_daily(raw, path, fill)};
  ts.validate();
  return ts;
}

TrendsBlock load_trends_block(const std::filesystem::path& path, const std::string& date_column,
                              const std::string& value_column) {
  const RawColumn raw = read_rows(path, date_column, value_column);
  return TrendsBlock{raw.rows.front().first, 1.0, to_daily(raw, path, FillPolicy::none)};
}

void write_csv(const TimeSeries& ts, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write file: " + path.string());
  out << "date," << (ts.name.empty() ? "value" : ts.name) << "\n";
  char buf[32];
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto res = std::to_chars(buf, buf + sizeof buf, ts.values[i]);
    out << ts.date_at(i).iso() << ',' << std::string_view(buf, res.ptr - buf) << "\n";
  }
  if (!out) throw data_error("write failed: " + path.string());
}

}  // namespace wcoh
