#include "hesscap/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <system_error>

namespace hesscap {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return std::strtod(format_number(v).c_str(), nullptr);
}

nlohmann::json report_to_json(const VerificationReport& rep, const nlohmann::json& config) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = rep.id;
  j["pass"] = rep.pass;
  j["worst_ratio"] = json_number(rep.worst_ratio);
  j["empirical_constant"] = json_number(rep.empirical_constant);
  j["slack"] = json_number(rep.slack);
  j["param_names"] = rep.param_names;
  auto points = nlohmann::json::array();
  for (const auto& pt : rep.points) {
    nlohmann::json p;
    p["label"] = pt.label;
    auto params = nlohmann::json::array();
    for (double v : pt.params) params.push_back(json_number(v));
    p["params"] = std::move(params);
    p["ratio"] = json_number(pt.ratio);
    p["checked"] = pt.checked;
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  j["notes"] = rep.notes;
  auto extras = nlohmann::json::object();
  for (const auto& [key, value] : rep.extras) extras[key] = json_number(value);
  j["extras"] = std::move(extras);
  j["config"] = config;
  return j;
}

std::string report_to_csv(const VerificationReport& rep) {
  std::string out = "label";
  for (const auto& name : rep.param_names) out += "," + csv_field(name);
  out += ",ratio,checked\n";
  for (const auto& pt : rep.points) {
    out += csv_field(pt.label);
    for (std::size_t i = 0; i < rep.param_names.size(); ++i) {
      out += ",";
      if (i < pt.params.size()) out += format_number(pt.params[i]);
    }
    out += "," + format_number(pt.ratio) + (pt.checked ? ",1\n" : ",0\n");
  }
  return out;
}

std::string table_to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_field(header[i]);
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += "\n";
  }
  return out;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace hesscap
