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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mmwmob::sim {

// Timing comparisons tolerate accumulated floating point error of the tick sum.
inline constexpr double kTimeEps = 1e-9;

struct A3Config
{
    double offset_db = 3.0;
    double time_to_trigger_s = 0.08;
};

// Per-UE A3 entry condition timers.
class A3Tracker
{
  public:
    explicit A3Tracker(std::size_t cells = 0) : timers_(cells, 0.0) {}

    // Evaluates one tick. NaN entries mean "not yet measured" and never
    // satisfy the condition. Returns the reported target cell, if any.
    std::optional<int> check(std::span<const double> l3_db, int serving, const A3Config &config, double tick_s);
    void reset();
    double timer(int cell) const { return timers_.at(static_cast<std::size_t>(cell)); }

  private:
    std::vector<double> timers_;
};

struct LinkThresholds
{
    double gamma_out_db = -8.0;
    double gamma_in_db = -6.0;
};

enum class HoPhase
{
    Command,
    RandomAccess
};

struct PendingHandover
{
    int target = -1;
    HoPhase phase = HoPhase::Command;
    double timer_s = 0.0;
};

enum class HoEvent
{
    None,
    CommandFailed,
    RandomAccessStarted,
    RandomAccessFailed,
    Succeeded
};

// Advances a pending handover by one step. In the command phase the serving
// SINR decides delivery; in random access each tick needs target SINR above
// gamma_out until t_ho_s has elapsed. `pending` is cleared on completion.
HoEvent handover_progress(std::optional<PendingHandover> &pending, double sinr_serving_db, double sinr_target_db,
                          const LinkThresholds &thresholds, double t_ho_s, double tick_s);

enum class RlfEvent
{
    None,
    T310Start,
    T310Stop,
    Rlf
};

class RlfTracker
{
  public:
    RlfEvent update(double sinr_db, const LinkThresholds &thresholds, double t310_s, double tick_s);
    bool running() const { return elapsed_.has_value(); }
    double elapsed_s() const { return elapsed_.value_or(0.0); }
    void reset() { elapsed_.reset(); }

  private:
    std::optional<double> elapsed_;
};

} // namespace mmwmob::sim
