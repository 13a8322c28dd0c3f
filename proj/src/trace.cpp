// SPDX-License-Identifier: Apache-2.0
#include "wnls/trace.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "wnls/error.hpp"

namespace wnls {

void DiagnosticsTrace::Row::set(const std::string& name, double value) {
  for (auto& [k, v] : entries_) {
    if (k == name) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(name, value);
}

std::optional<double> DiagnosticsTrace::Row::get(const std::string& name) const {
  for (const auto& [k, v] : entries_)
    if (k == name) return v;
  return std::nullopt;
}

std::size_t DiagnosticsTrace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  return columns_.size();
}

bool DiagnosticsTrace::has_column(const std::string& name) const { return index_of(name) < columns_.size(); }

void DiagnosticsTrace::append(const Row& row) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [name, value] : row.entries()) {
    (void)value;
    if (!has_column(name)) {
      columns_.push_back(name);
      for (auto& r : data_) r.push_back(nan);
    }
  }
  std::vector<double> values(columns_.size(), nan);
  for (const auto& [name, value] : row.entries()) values[index_of(name)] = value;
  data_.push_back(std::move(values));
}

std::vector<double> DiagnosticsTrace::column(const std::string& name) const {
  const std::size_t idx = index_of(name);
  if (idx == columns_.size()) throw InvalidArgument("trace has no column '" + name + "'");
  std::vector<double> out;
  out.reserve(data_.size());
  for (const auto& r : data_) out.push_back(r[idx]);
  return out;
}

double DiagnosticsTrace::at(std::size_t row, const std::string& name) const {
  const std::size_t idx = index_of(name);
  if (idx == columns_.size()) throw InvalidArgument("trace has no column '" + name + "'");
  return data_.at(row)[idx];
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void DiagnosticsTrace::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& r : data_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
}

void DiagnosticsTrace::write_json(std::ostream& os) const {
  os << "{\"schema_version\":" << kSchemaVersion << ",\"columns\":[";
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << '"' << columns_[i] << '"';
  os << "],\"rows\":[";
  for (std::size_t j = 0; j < data_.size(); ++j) {
    os << (j ? "," : "") << '[';
    for (std::size_t i = 0; i < data_[j].size(); ++i) {
      const double x = data_[j][i];
      os << (i ? "," : "") << (std::isfinite(x) ? format_double(x) : "null");
    }
    os << ']';
  }
  os << "]}\n";
}

}  // namespace wnls
