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

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "mmwmob/random.hpp"

using namespace mmwmob;

TEST_CASE("same seed gives the same stream")
{
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived seeds separate streams and indices")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4; ++s)
        for (std::uint64_t a = 0; a < 16; ++a)
            seen.insert(derive_seed(7, s, a));
    CHECK(seen.size() == 64);
    CHECK(derive_seed(7, 1, 2, 3) == derive_seed(7, 1, 2, 3));
    CHECK(derive_seed(7, 1, 2, 3) != derive_seed(7, 1, 3, 2));
}

TEST_CASE("uniform draws stay in range with the right mean")
{
    Rng r(1);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        const double u = r.uniform(-3.0, 5.0);
        REQUIRE(u >= -3.0);
        REQUIRE(u < 5.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("index is unbiased and bounded")
{
    Rng r(3);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i)
        ++counts.at(r.index(7));
    for (int c : counts)
        CHECK(std::abs(c - n / 7) < 400); // about 4 sigma
    CHECK(r.index(1) == 0);
    CHECK(r.index(0) == 0);
}

TEST_CASE("normal draws have unit variance")
{
    Rng r(9);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    CHECK(std::abs(mean) < 0.01);
    CHECK(s2 / n - mean * mean == doctest::Approx(1.0).epsilon(0.01));
}
