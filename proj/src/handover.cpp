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

#include "mmwmob/handover.hpp"

#include <algorithm>
#include <cmath>

#include "mmwmob/error.hpp"

namespace mmwmob::sim {

std::optional<int> A3Tracker::check(std::span<const double> l3_db, int serving, const A3Config &config,
                                    double tick_s)
{
    require(l3_db.size() == timers_.size(), "A3 tracker and measurement sizes differ");
    require(serving >= 0 && static_cast<std::size_t>(serving) < timers_.size(), "serving cell out of range");
    const double s = l3_db[static_cast<std::size_t>(serving)];
    std::optional<int> best;
    for (std::size_t c = 0; c < timers_.size(); ++c)
    {
        if (static_cast<int>(c) == serving)
            continue;
        const double q = l3_db[c];
        const bool entered = !std::isnan(s) && !std::isnan(q) && q > s + config.offset_db;
        if (entered)
            timers_[c] += tick_s;
        else
            timers_[c] = 0.0;
        if (entered && timers_[c] >= config.time_to_trigger_s - kTimeEps &&
            (!best || q > l3_db[static_cast<std::size_t>(*best)]))
            best = static_cast<int>(c);
    }
    if (best)
        reset();
    return best;
}

void A3Tracker::reset()
{
    std::fill(timers_.begin(), timers_.end(), 0.0);
}

HoEvent handover_progress(std::optional<PendingHandover> &pending, double sinr_serving_db, double sinr_target_db,
                          const LinkThresholds &thresholds, double t_ho_s, double tick_s)
{
    require(pending.has_value(), "no pending handover");
    if (pending->phase == HoPhase::Command)
    {
        if (sinr_serving_db > thresholds.gamma_out_db)
        {
            pending->phase = HoPhase::RandomAccess;
            pending->timer_s = 0.0;
            return HoEvent::RandomAccessStarted;
        }
        pending.reset();
        return HoEvent::CommandFailed;
    }
    if (!(sinr_target_db > thresholds.gamma_out_db))
    {
        pending.reset();
        return HoEvent::RandomAccessFailed;
    }
    pending->timer_s += tick_s;
    if (pending->timer_s >= t_ho_s - kTimeEps)
    {
        pending.reset();
        return HoEvent::Succeeded;
    }
    return HoEvent::None;
}

RlfEvent RlfTracker::update(double sinr_db, const LinkThresholds &thresholds, double t310_s, double tick_s)
{
    if (!elapsed_)
    {
        if (sinr_db < thresholds.gamma_out_db)
        {
            elapsed_ = 0.0;
            return RlfEvent::T310Start;
        }
        return RlfEvent::None;
    }
    if (sinr_db > thresholds.gamma_in_db)
    {
        elapsed_.reset();
        return RlfEvent::T310Stop;
    }
    *elapsed_ += tick_s;
    if (*elapsed_ >= t310_s - kTimeEps)
    {
        elapsed_.reset();
        return RlfEvent::Rlf;
    }
    return RlfEvent::None;
}

} // namespace mmwmob::sim
