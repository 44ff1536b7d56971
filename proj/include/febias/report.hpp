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

#ifndef FEBIAS_REPORT_HPP
#define FEBIAS_REPORT_HPP

#include <string>
#include <vector>

#include "febias/serialize.hpp"

namespace febias {

// Bias-direction cell: the reference group, then the groups without a
// statistically significant disparity joined by "/", then "→" and the
// significant ones (parenthesized when several). Groups render in entry
// order. Examples: "F/M", "M → F", "W/I/A → B", "B/A → (W, I)".
std::string bias_direction_cell(const BiasFinding& finding);

// Validated values of the significant groups as percentages at two
// decimals; "0" when nothing is significant.
std::string validated_values_cell(const BiasFinding& finding);

// Markdown report over one or more findings files (typically one per
// sensitive attribute), matching the tabular notation used for published
// bias audits.
std::string render_report(const std::vector<FindingsFile>& files);

}  // namespace febias

#endif  // FEBIAS_REPORT_HPP
