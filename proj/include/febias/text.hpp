// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEBIAS_TEXT_HPP
#define FEBIAS_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace febias {

// Unquoted CSV: fields may not contain comma, quote, CR or LF. Ingestion
// validates tokens so files stay greppable and byte-reproducible.
std::vector<std::string> split_csv_line(std::string_view line);
bool valid_token(std::string_view token);

// Shortest round-trip decimal for a double (deterministic output).
std::string format_double(double v);
double parse_double_strict(std::string_view text, const std::string& context);

// Paper-style percent: value * 100, two decimals.
std::string format_percent2(double v);

// One name per line, '#' comments, order significant.
std::vector<std::string> load_name_list(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

std::string path_stem(std::string_view path);

}  // namespace febias

#endif  // FEBIAS_TEXT_HPP
