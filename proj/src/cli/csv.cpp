#include "smallcal/cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string_view>

namespace smallcal::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Reads the header and data rows, handing each row's fields (in the order of
// `columns`) to `emit`. Columns absent from the header are reported as
// nullopt when optional.
class Table {
 public:
  Table(std::istream& in, std::string source, std::vector<std::string> required,
        std::vector<std::string> optional)
      : in_(in), source_(std::move(source)) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) {
      throw CsvError(source_, std::max<std::size_t>(line_no_, 1), "", "empty input, expected a header row");
    }
    const auto names = split(line);
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string name(names[i]);
      const bool known = std::find(required.begin(), required.end(), name) != required.end() ||
                         std::find(optional.begin(), optional.end(), name) != optional.end();
      if (!known) throw CsvError(source_, line_no_, name, "unknown column");
      if (!index_.emplace(name, i).second) throw CsvError(source_, line_no_, name, "duplicate column");
    }
    for (const auto& r : required) {
      if (!index_.contains(r)) throw CsvError(source_, line_no_, r, "missing required column");
    }
    width_ = names.size();
  }

  bool next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (trim(line).empty()) continue;
      row_ = line;
      fields_ = split(row_);
      if (fields_.size() != width_) {
        throw CsvError(source_, line_no_, "",
                       "expected " + std::to_string(width_) + " fields, found " + std::to_string(fields_.size()));
      }
      ++rows_;
      return true;
    }
    return false;
  }

  std::optional<std::string_view> text(const std::string& column) const {
    const auto it = index_.find(column);
    if (it == index_.end()) return std::nullopt;
    return fields_[it->second];
  }

  std::optional<double> number(const std::string& column, bool allow_infinite = false) const {
    const auto field = text(column);
    if (!field) return std::nullopt;
    if (field->empty()) return std::nullopt;
    double v = 0.0;
    const char* end = field->data() + field->size();
    const auto [ptr, ec] = std::from_chars(field->data(), end, v);
    if (ec != std::errc() || ptr != end) {
      throw CsvError(source_, line_no_, column, "cannot parse '" + std::string(*field) + "' as a number");
    }
    if (std::isnan(v) || (!allow_infinite && std::isinf(v))) throw CsvError(source_, line_no_, column, "value must be finite");
    return v;
  }

  double required_number(const std::string& column, bool allow_infinite = false) const {
    const auto v = number(column, allow_infinite);
    if (!v) throw CsvError(source_, line_no_, column, "empty value");
    return *v;
  }

  void fail(const std::string& column, const std::string& what) const {
    throw CsvError(source_, line_no_, column, what);
  }

  std::size_t rows() const { return rows_; }
  std::size_t line_no() const { return line_no_; }
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
  std::size_t line_no_ = 0;
  std::size_t rows_ = 0;
  std::string row_;
  std::vector<std::string_view> fields_;
};

}  // namespace

CsvError::CsvError(std::string source, std::size_t line, std::string column, const std::string& what)
    : DomainError(source + ":" + std::to_string(line) + (column.empty() ? "" : " column '" + column + "'") +
                  ": " + what),
      source_(std::move(source)),
      line_(line),
      column_(std::move(column)) {}

std::vector<CalibrationRecord> read_calibration_csv(std::istream& in, const std::string& source) {
  Table t(in, source, {"y_true", "y_pred"}, {"u", "group"});
  std::vector<CalibrationRecord> out;
  while (t.next()) {
    CalibrationRecord r;
    r.y_true = t.required_number("y_true");
    r.y_pred = t.required_number("y_pred");
    r.u_heuristic = t.number("u").value_or(0.0);
    if (r.u_heuristic < 0.0) t.fail("u", "heuristic width must be >= 0");
    if (const auto g = t.text("group"); g && !g->empty()) r.group = std::string(*g);
    out.push_back(std::move(r));
  }
  if (out.empty()) throw CsvError(t.source(), t.line_no(), "", "no data rows");
  return out;
}

std::vector<AuditRow> read_audit_csv(std::istream& in, const std::string& source) {
  Table t(in, source, {"y_true", "lo", "hi"}, {});
  std::vector<AuditRow> out;
  while (t.next()) {
    // Unbounded predictors write infinite interval ends.
    AuditRow r{t.required_number("y_true"), t.required_number("lo", true), t.required_number("hi", true)};
    if (r.lo > r.hi) t.fail("hi", "interval upper bound is below its lower bound");
    out.push_back(r);
  }
  if (out.empty()) throw CsvError(t.source(), t.line_no(), "", "no data rows");
  return out;
}

}  // namespace smallcal::cli
