// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wnls {

/// Time series of named scalar diagnostics. The column set is fixed by the
/// first row; later rows may add columns (earlier rows read NaN there).
class DiagnosticsTrace {
 public:
  static constexpr int kSchemaVersion = 1;

  /// Ordered name/value pairs produced for one sample.
  class Row {
   public:
    void set(const std::string& name, double value);
    std::optional<double> get(const std::string& name) const;
    const std::vector<std::pair<std::string, double>>& entries() const noexcept { return entries_; }

   private:
    std::vector<std::pair<std::string, double>> entries_;
  };

  void append(const Row& row);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return data_.size(); }
  bool has_column(const std::string& name) const;
  /// Throws InvalidArgument for an unknown column.
  std::vector<double> column(const std::string& name) const;
  double at(std::size_t row, const std::string& name) const;

  /// Header line then one line per row; numbers in shortest round-trip form.
  void write_csv(std::ostream& os) const;
  /// {"schema_version":1,"columns":[...],"rows":[[...],...]}; NaN/Inf as null.
  void write_json(std::ostream& os) const;

 private:
  std::size_t index_of(const std::string& name) const;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> data_;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

}  // namespace wnls
