// SPDX-License-Identifier: Apache-2.0
//
// mmwmob - low complexity fading and mobility simulation for beamformed networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent helpers for the CSV formats used throughout the project.
namespace mmwmob::csv {

// Shortest decimal representation that parses back to the same double.
std::string format(double value);

// Fixed notation with the given number of decimals.
std::string format_fixed(double value, int decimals);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

// Throws ValidationError naming `what` when the field is not a complete number.
double parse_double(std::string_view field, const std::string &what);
long long parse_int(std::string_view field, const std::string &what);

// Next line with trailing '\r' stripped; false at end of stream.
bool next_line(std::istream &in, std::string &line);

} // namespace mmwmob::csv
