#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "smallcal/conformal.hpp"

namespace smallcal::cli {

using Json = nlohmann::json;

/// Output of one subcommand. Objects keep their keys sorted, so rendering
/// is deterministic.
struct ReportEnvelope {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  std::vector<std::string> warnings;
};

Json to_json(const ReportEnvelope& report);

/// The report as one JSON line, newline-terminated.
std::string render_json_line(const ReportEnvelope& report);

/// Aligned `key  value` text; nested values use dotted keys.
std::string render_text(const ReportEnvelope& report);

Json guarantee_to_json(const GuaranteeSpec& spec);
GuaranteeSpec guarantee_from_json(const Json& j);

/// An unbounded predictor's correction is written as null.
Json predictor_to_json(const ConformalPredictor& p);

/// Inverse of predictor_to_json. Throws DomainError on missing or
/// mistyped fields.
ConformalPredictor predictor_from_json(const Json& j);

}  // namespace smallcal::cli
