/*
 * Copyright 2026 The cxrlt Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <vector>

namespace cxrlt::csv {

/// Splits one CSV line. Supports double-quoted fields with "" escapes.
std::vector<std::string> parse_line(const std::string& line);

/// Joins fields into one CSV line, quoting only when needed.
std::string format_line(const std::vector<std::string>& fields);

/// Reads a whole CSV file into rows of fields. Skips a trailing empty line.
std::vector<std::vector<std::string>> read_file(const std::string& path);

/// Writes rows as a CSV file with '\n' line endings.
void write_file(const std::string& path,
                const std::vector<std::vector<std::string>>& rows);

/// Trims ASCII whitespace from both ends.
std::string trim(const std::string& s);

}  // namespace cxrlt::csv
