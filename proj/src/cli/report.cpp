#include "smallcal/cli/report.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <utility>

#include "smallcal/errors.hpp"

namespace smallcal::cli {
namespace {

using Lines = std::vector<std::pair<std::string, std::string>>;

void flatten(const Json& j, const std::string& prefix, Lines& out) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array() && !j.empty()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

void write_section(std::ostringstream& os, const std::string& title, const Json& j) {
  Lines lines;
  flatten(j, "", lines);
  if (lines.empty()) return;
  os << title << '\n';
  std::size_t width = 0;
  for (const auto& [k, v] : lines) width = std::max(width, k.size());
  for (const auto& [k, v] : lines) {
    os << "  " << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  }
}

template <typename T>
T field(const Json& j, const char* name) {
  if (!j.contains(name)) throw DomainError(std::string("predictor JSON: missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("predictor JSON: field '") + name + "' has the wrong type");
  }
}

}  // namespace

Json to_json(const ReportEnvelope& report) {
  return Json{{"command", report.command},
              {"inputs", report.inputs},
              {"results", report.results},
              {"warnings", report.warnings}};
}

std::string render_json_line(const ReportEnvelope& report) { return to_json(report).dump() + "\n"; }

std::string render_text(const ReportEnvelope& report) {
  std::ostringstream os;
  os << report.command << '\n';
  write_section(os, "inputs", report.inputs);
  write_section(os, "results", report.results);
  if (!report.warnings.empty()) {
    os << "warnings\n";
    for (const auto& w : report.warnings) os << "  - " << w << '\n';
  }
  return os.str();
}

Json guarantee_to_json(const GuaranteeSpec& spec) {
  if (const auto* c = std::get_if<ClassicGuarantee>(&spec)) {
    return Json{{"kind", "classic"}, {"c_nom", c->c_nom}};
  }
  const auto& s = std::get<SmallSampleGuarantee>(spec);
  return Json{{"kind", "small_sample"}, {"c_min", s.c_min}, {"alpha", s.alpha}};
}

GuaranteeSpec guarantee_from_json(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  GuaranteeSpec spec;
  if (kind == "classic") {
    spec = ClassicGuarantee{field<double>(j, "c_nom")};
  } else if (kind == "small_sample") {
    spec = SmallSampleGuarantee{field<double>(j, "c_min"), field<double>(j, "alpha")};
  } else {
    throw DomainError("predictor JSON: unknown guarantee kind '" + kind + "'");
  }
  validate(spec);
  return spec;
}

Json predictor_to_json(const ConformalPredictor& p) {
  Json j{{"m", p.m},
         {"n_cal", p.n_cal},
         {"quantile_level", p.quantile_level},
         {"unbounded", p.unbounded},
         {"guarantee", guarantee_to_json(p.guarantee)},
         {"group", p.group ? Json(*p.group) : Json(nullptr)}};
  j["correction"] = p.unbounded ? Json(nullptr) : Json(p.correction);
  return j;
}

ConformalPredictor predictor_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("predictor JSON: expected an object");
  ConformalPredictor p;
  p.m = field<std::int64_t>(j, "m");
  p.n_cal = field<std::int64_t>(j, "n_cal");
  p.quantile_level = field<double>(j, "quantile_level");
  p.unbounded = field<bool>(j, "unbounded");
  p.guarantee = guarantee_from_json(j.at("guarantee"));
  if (p.unbounded) {
    p.correction = std::numeric_limits<double>::infinity();
  } else {
    p.correction = field<double>(j, "correction");
  }
  if (j.contains("group") && !j.at("group").is_null()) p.group = field<std::string>(j, "group");
  return p;
}

}  // namespace smallcal::cli
