#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace primeseries::cli {

// Hex SHA-1 of the content in git blob framing ("blob <size>\0" + content).
std::string git_blob_hash(const std::string& content);

// Report skeleton: schema_version, command, config echo, and a content hash
// over the sorted key=value lines of the echo.  Results are attached by the
// caller before emission.
nlohmann::json make_report(const std::string& command,
                           const std::map<std::string, std::string>& echo);

// Emits the report to stdout and, when out_dir is nonempty, to
// out_dir/<command>.json.  Creates the directory if needed.
void emit_json(const nlohmann::json& report, const std::string& command,
               const std::string& out_dir, bool to_stdout);

// Writes header + rows to out_dir/<command>.csv, or stdout if out_dir empty.
void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows, const std::string& command,
              const std::string& out_dir);

std::string csv_number(double value);

} // namespace primeseries::cli
