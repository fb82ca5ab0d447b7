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

#include <stdexcept>
#include <string>

namespace mmwmob {

// Invalid input or configuration. The CLI maps this to exit status 1.
class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string &message)
{
    if (!condition)
        throw ValidationError(message);
}

inline void require(bool condition, const char *message)
{
    if (!condition)
        throw ValidationError(message);
}

} // namespace mmwmob
