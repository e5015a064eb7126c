#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "smallcal/audit.hpp"
#include "smallcal/conformal.hpp"
#include "smallcal/errors.hpp"

namespace smallcal::cli {

/// Malformed CSV input. `line` is 1-based and counts the header; `column`
/// is the header name of the offending field, empty for row-level errors.
class CsvError : public DomainError {
 public:
  CsvError(std::string source, std::size_t line, std::string column, const std::string& what);

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string column_;
};

/// Header `y_true,y_pred[,u][,group]` in any order. A missing or empty `u`
/// is 0; an empty `group` cell means no group.
std::vector<CalibrationRecord> read_calibration_csv(std::istream& in, const std::string& source = "<input>");

/// Header `y_true,lo,hi` in any order.
std::vector<AuditRow> read_audit_csv(std::istream& in, const std::string& source = "<input>");

}  // namespace smallcal::cli
