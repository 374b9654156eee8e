#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "mil/identities.hpp"
#include "mil/montecarlo.hpp"

namespace mil {

/// Serialization of reports for the CLI and for regression fixtures. Exact
/// values never pass through floats: rationals are rendered as "num/den"
/// strings and pi-graded values as [[half_exponent, "num/den"], ...] arrays;
/// separate approx_* fields carry doubles for human convenience.

nlohmann::json graded_to_json(const PiGradedValue &value);
PiGradedValue graded_from_json(const nlohmann::json &j);

nlohmann::json report_to_json(const IdentityReport &report);
IdentityReport report_from_json(const nlohmann::json &j);

/// The series tally rendered in the identity-report shape: lhs is the exact
/// rational partial sum scaled back by the target content, rhs is the exact
/// pi-graded target, and "equal" is the proven tail-bound bracket.
nlohmann::json tally_to_json(const SeriesTally &tally);

nlohmann::json sample_to_json(const SampleStats &stats);

/// CSV with one row per report and the same fields as the JSON records;
/// pi-graded values appear as quoted JSON arrays.
std::string report_csv_header();
std::string report_to_csv_row(const nlohmann::json &record);

}  // namespace mil
