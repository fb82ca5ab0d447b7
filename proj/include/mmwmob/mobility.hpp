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

#include "mmwmob/random.hpp"
#include "mmwmob/scenario.hpp"

namespace mmwmob::sim {

// Straight-on probability at a crossing; the rest splits evenly between
// left and right turns.
inline constexpr double kStraightProbability = 0.5;

class UeMotion
{
  public:
    // Street walker starting at a uniformly random point of the street
    // network, in a random direction.
    static UeMotion street(const StreetGrid &grid, double speed_mps, std::uint64_t seed);
    // Random waypoint walk inside `region`.
    static UeMotion waypoint(const Rect &region, double speed_mps, std::uint64_t seed);

    Point position() const { return pos_; }
    double speed_mps() const { return speed_; }
    MobilityPattern pattern() const { return pattern_; }

    // Moves the UE by speed * dt and returns the distance travelled.
    double step(double dt);

  private:
    UeMotion(MobilityPattern p, double speed, std::uint64_t seed) : pattern_(p), speed_(speed), rng_(seed) {}

    void street_step(double dist);
    void waypoint_step(double dist);
    void sync_street_position();

    MobilityPattern pattern_;
    double speed_;
    Rng rng_;
    Point pos_;

    // street state: travelling along a vertical (x fixed) or horizontal street
    bool vertical_ = true;
    double fixed_ = 0.0;
    double along_ = 0.0;
    int dir_ = 1;
    double extent_ = 0.0;
    std::vector<double> crossings_v_; // y of horizontal streets, crossed while on a vertical street
    std::vector<double> crossings_h_; // x of vertical streets
    double other_extent_ = 0.0;

    Rect region_;
    Point target_;
};

} // namespace mmwmob::sim
