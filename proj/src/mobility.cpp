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

#include "mmwmob/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmwmob/error.hpp"

namespace mmwmob::sim {

UeMotion UeMotion::street(const StreetGrid &grid, double speed_mps, std::uint64_t seed)
{
    require(speed_mps >= 0.0, "UE speed must be non-negative");
    UeMotion m(MobilityPattern::Street, speed_mps, seed);
    const auto vs = grid.vertical_streets();
    const auto hs = grid.horizontal_streets();
    require(!vs.empty() || !hs.empty(), "street UEs need at least one street");

    // pick a street with probability proportional to its length
    const double total = vs.size() * grid.height() + hs.size() * grid.width();
    double u = m.rng_.uniform(0.0, total);
    if (u < vs.size() * grid.height())
    {
        m.vertical_ = true;
        m.fixed_ = vs[std::min<std::size_t>(static_cast<std::size_t>(u / grid.height()), vs.size() - 1)];
    }
    else
    {
        u -= vs.size() * grid.height();
        m.vertical_ = false;
        m.fixed_ = hs[std::min<std::size_t>(static_cast<std::size_t>(u / grid.width()), hs.size() - 1)];
    }
    m.crossings_v_ = hs;
    m.crossings_h_ = vs;
    m.extent_ = m.vertical_ ? grid.height() : grid.width();
    m.other_extent_ = m.vertical_ ? grid.width() : grid.height();
    m.along_ = m.rng_.uniform(0.0, m.extent_);
    m.dir_ = m.rng_.uniform01() < 0.5 ? -1 : 1;
    m.sync_street_position();
    return m;
}

UeMotion UeMotion::waypoint(const Rect &region, double speed_mps, std::uint64_t seed)
{
    require(speed_mps >= 0.0, "UE speed must be non-negative");
    require(region.width() > 0.0 && region.height() > 0.0, "waypoint region must have positive area");
    UeMotion m(MobilityPattern::RandomWaypoint, speed_mps, seed);
    m.region_ = region;
    m.pos_ = {m.rng_.uniform(region.x0, region.x1), m.rng_.uniform(region.y0, region.y1)};
    m.target_ = {m.rng_.uniform(region.x0, region.x1), m.rng_.uniform(region.y0, region.y1)};
    return m;
}

void UeMotion::sync_street_position()
{
    pos_ = vertical_ ? Point{fixed_, along_} : Point{along_, fixed_};
}

double UeMotion::step(double dt)
{
    const double dist = speed_ * dt;
    if (dist <= 0.0)
        return 0.0;
    if (pattern_ == MobilityPattern::Street)
        street_step(dist);
    else
        waypoint_step(dist);
    return dist;
}

void UeMotion::street_step(double dist)
{
    constexpr double eps = 1e-9;
    while (dist > 0.0)
    {
        const auto &cross = vertical_ ? crossings_v_ : crossings_h_;
        // next crossing strictly ahead, or the end of the street
        double next = dir_ > 0 ? extent_ : 0.0;
        bool at_crossing = false;
        for (double c : cross)
        {
            if (dir_ > 0 && c > along_ + eps && c < next)
                next = c, at_crossing = true;
            if (dir_ < 0 && c < along_ - eps && c > next)
                next = c, at_crossing = true;
        }
        const double gap = std::abs(next - along_);
        if (dist < gap)
        {
            along_ += dir_ * dist;
            break;
        }
        along_ = next;
        dist -= gap;
        if (!at_crossing)
        {
            dir_ = -dir_; // dead end at the boundary
            continue;
        }
        const double u = rng_.uniform01();
        if (u < kStraightProbability)
            continue;
        // turn onto the crossing street; left and right relative to travel
        const bool left = u < kStraightProbability + 0.5 * (1.0 - kStraightProbability);
        const int new_dir = vertical_ ? (left ? -dir_ : dir_) : (left ? dir_ : -dir_);
        const double here = fixed_;
        fixed_ = along_;
        along_ = here;
        dir_ = new_dir;
        vertical_ = !vertical_;
        std::swap(extent_, other_extent_);
    }
    along_ = std::clamp(along_, 0.0, extent_);
    sync_street_position();
}

void UeMotion::waypoint_step(double dist)
{
    while (dist > 0.0)
    {
        const double dx = target_.x - pos_.x, dy = target_.y - pos_.y;
        const double gap = std::hypot(dx, dy);
        if (dist < gap)
        {
            pos_.x += dx / gap * dist;
            pos_.y += dy / gap * dist;
            break;
        }
        pos_ = target_;
        dist -= gap;
        target_ = {rng_.uniform(region_.x0, region_.x1), rng_.uniform(region_.y0, region_.y1)};
    }
    pos_.x = std::clamp(pos_.x, region_.x0, region_.x1);
    pos_.y = std::clamp(pos_.y, region_.y0, region_.y1);
}

} // namespace mmwmob::sim
