#pragma once

// Serialization of verification reports: JSON (one object per report,
// versioned) and flat CSV (one row per report point). Numbers carry 12
// significant digits; files are written to a temporary name and renamed.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hesscap/capacity_lab.hpp"

namespace hesscap {

inline constexpr const char* kSchemaVersion = "1.0";

/// %.12g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

/// A JSON value holding v rounded to 12 significant digits; non-finite values
/// become the strings of format_number.
nlohmann::json json_number(double v);

nlohmann::json report_to_json(const VerificationReport& rep, const nlohmann::json& config = nlohmann::json::object());

/// Header `label,<param_names...>,ratio,checked`.
std::string report_to_csv(const VerificationReport& rep);

/// CSV table from a header and numeric rows.
std::string table_to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Pretty-printed JSON followed by a newline.
std::string dump_json(const nlohmann::json& j);

/// Writes `content` to `path.tmp` in the same directory, then renames it over
/// `path`. Creates the parent directory if needed.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace hesscap
