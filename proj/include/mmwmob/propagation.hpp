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

#include <span>

#include "mmwmob/channel_stats.hpp"
#include "mmwmob/random.hpp"
#include "mmwmob/scenario.hpp"

namespace mmwmob::sim {

using channel::Condition;

struct LinkGeometry
{
    double distance_2d_m = 0.0;
    double bs_height_m = 10.0;
    double ut_height_m = 1.5;
    double carrier_hz = 28e9;
};

class PathLossModel
{
  public:
    virtual ~PathLossModel() = default;
    virtual double path_loss_db(const LinkGeometry &link, Condition condition) const = 0;
};

// 38.901 UMi street canyon. Distances below 10 m are clamped to 10 m.
class UmiStreetCanyon final : public PathLossModel
{
  public:
    double path_loss_db(const LinkGeometry &link, Condition condition) const override;
    static double breakpoint_distance_m(const LinkGeometry &link);
};

// True when the straight segment a-b does not pass through the interior of
// any building. Grazing a wall or corner still counts as line of sight.
bool line_of_sight(Point a, Point b, std::span<const Rect> buildings);

struct ShadowingConfig
{
    bool enabled = true;
    double sigma_los_db = 4.0;
    double sigma_nlos_db = 7.82;
    double decorrelation_los_m = 10.0;
    double decorrelation_nlos_m = 13.0;
};

// Log-normal shadowing with exponential correlation over travelled distance.
// The normalised state is shared by both conditions so a LOS/NLOS switch
// changes the spread but not the draw sequence.
class ShadowingProcess
{
  public:
    explicit ShadowingProcess(std::uint64_t seed);

    // Advance by `moved_m` metres and return the shadowing loss in dB.
    double advance(double moved_m, Condition condition, const ShadowingConfig &config);
    double current_db(Condition condition, const ShadowingConfig &config) const;

  private:
    Rng rng_;
    double state_ = 0.0;
};

} // namespace mmwmob::sim
