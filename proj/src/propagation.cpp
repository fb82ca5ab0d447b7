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

#include "mmwmob/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "mmwmob/error.hpp"
#include "mmwmob/fading.hpp"

namespace mmwmob::sim {

double UmiStreetCanyon::breakpoint_distance_m(const LinkGeometry &link)
{
    // effective antenna heights use a 1 m environment height
    const double hb = link.bs_height_m - 1.0;
    const double hu = link.ut_height_m - 1.0;
    return 4.0 * hb * hu * link.carrier_hz / fading::kSpeedOfLight;
}

double UmiStreetCanyon::path_loss_db(const LinkGeometry &link, Condition condition) const
{
    require(link.carrier_hz > 0.0, "carrier frequency must be positive");
    const double d2 = std::max(link.distance_2d_m, 10.0);
    const double dh = link.bs_height_m - link.ut_height_m;
    const double d3 = std::sqrt(d2 * d2 + dh * dh);
    const double fc_ghz = link.carrier_hz * 1e-9;
    const double bp = breakpoint_distance_m(link);

    double los;
    if (d2 <= bp)
        los = 32.4 + 21.0 * std::log10(d3) + 20.0 * std::log10(fc_ghz);
    else
        los = 32.4 + 40.0 * std::log10(d3) + 20.0 * std::log10(fc_ghz) - 9.5 * std::log10(bp * bp + dh * dh);
    if (condition == Condition::Los)
        return los;
    const double nlos = 35.3 * std::log10(d3) + 22.4 + 21.3 * std::log10(fc_ghz) - 0.3 * (link.ut_height_m - 1.5);
    return std::max(los, nlos);
}

namespace {

// Liang-Barsky clip of a-b against the open rectangle shrunk by eps.
bool crosses_interior(Point a, Point b, const Rect &r)
{
    constexpr double eps = 1e-6;
    const double x0 = r.x0 + eps, x1 = r.x1 - eps, y0 = r.y0 + eps, y1 = r.y1 - eps;
    const double dx = b.x - a.x, dy = b.y - a.y;
    double t0 = 0.0, t1 = 1.0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - x0, x1 - a.x, a.y - y0, y1 - a.y};
    for (int k = 0; k < 4; ++k)
    {
        if (p[k] == 0.0)
        {
            if (q[k] <= 0.0)
                return false;
            continue;
        }
        const double t = q[k] / p[k];
        if (p[k] < 0.0)
            t0 = std::max(t0, t);
        else
            t1 = std::min(t1, t);
        if (t0 >= t1)
            return false;
    }
    return true;
}

} // namespace

bool line_of_sight(Point a, Point b, std::span<const Rect> buildings)
{
    for (const auto &r : buildings)
        if (crosses_interior(a, b, r))
            return false;
    return true;
}

ShadowingProcess::ShadowingProcess(std::uint64_t seed) : rng_(seed)
{
    state_ = rng_.normal();
}

double ShadowingProcess::advance(double moved_m, Condition condition, const ShadowingConfig &config)
{
    if (moved_m > 0.0)
    {
        const double dcorr = condition == Condition::Los ? config.decorrelation_los_m : config.decorrelation_nlos_m;
        const double rho = std::exp(-moved_m / dcorr);
        state_ = rho * state_ + std::sqrt(1.0 - rho * rho) * rng_.normal();
    }
    return current_db(condition, config);
}

double ShadowingProcess::current_db(Condition condition, const ShadowingConfig &config) const
{
    if (!config.enabled)
        return 0.0;
    return (condition == Condition::Los ? config.sigma_los_db : config.sigma_nlos_db) * state_;
}

} // namespace mmwmob::sim
