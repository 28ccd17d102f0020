#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lexichron {

// Round-trip exact, locale independent ("%.17g"). All numeric CSV output
// goes through this so reruns are byte identical.
std::string fmt_double(double value);

// Missing values serialize as NA.
std::string fmt_optional(const std::optional<double>& value);

// Writes via a temp file in the same directory plus rename, so readers
// never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Square matrix serialization shared by overlap and time matrices:
//   # schema: <schema>
//   language,<label>,...
//   <label>,<v>,...
// NaN entries serialize as NA.
std::string matrix_csv(const std::string& schema,
                       const std::vector<std::string>& labels,
                       const std::vector<double>& values);

std::string matrix_csv(const std::string& schema,
                       const std::vector<std::string>& labels,
                       const std::vector<std::size_t>& values);

} // namespace lexichron
