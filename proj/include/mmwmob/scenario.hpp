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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mmwmob::sim {

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

struct Rect
{
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

// Manhattan layout: blocks_x x blocks_y square blocks separated by streets.
// There are no streets along the outer boundary, so vertical street k
// (1 <= k < blocks_x) is centred at x = k (block + street) - street / 2.
struct StreetGrid
{
    int blocks_x = 3;
    int blocks_y = 3;
    double block_m = 80.0;
    double street_m = 20.0;

    double width() const { return blocks_x * block_m + (blocks_x - 1) * street_m; }
    double height() const { return blocks_y * block_m + (blocks_y - 1) * street_m; }
    Rect block(int i, int j) const;
    std::vector<double> vertical_streets() const;   // centre x of each vertical street
    std::vector<double> horizontal_streets() const; // centre y of each horizontal street
};

enum class AreaKind
{
    Square,
    Pedestrian
};

// An open (building-free) block where UEs walk.
struct Area
{
    std::string name;
    AreaKind kind = AreaKind::Square;
    int block_i = 0;
    int block_j = 0;
};

struct Site
{
    Point position;
    double height_m = 10.0;
    std::vector<double> sector_azimuths_deg; // math convention, CCW from +x
};

struct Cell
{
    int id = 0;
    int site = 0;
    Point position;
    double height_m = 10.0;
    double azimuth_deg = 0.0;
};

enum class MobilityPattern
{
    Street,        // along street centre lines, random turns at crossings
    RandomWaypoint // inside an open area
};

struct UeGroup
{
    std::string name;
    int count = 0;
    double speed_mps = 0.0;
    MobilityPattern pattern = MobilityPattern::Street;
    std::string area; // open-area name for RandomWaypoint
};

struct SimSettings
{
    double duration_s = 60.0;
    double tick_s = 0.01;
    std::uint64_t seed = 1;
};

struct Scenario
{
    std::string name = "scenario";
    double carrier_hz = 28e9;
    double ue_height_m = 1.5;
    StreetGrid grid;
    std::vector<Area> areas;
    std::vector<Site> sites;
    std::vector<UeGroup> ue_groups;
    SimSettings sim;

    std::vector<Rect> buildings() const; // every block that is not an open area
    std::vector<Cell> cells() const;     // one per site sector, in site order
    const Area &area(const std::string &name) const;
    int total_ues() const;
    double fastest_speed_mps() const;
};

// Throws ValidationError when the scenario is inconsistent.
void validate(const Scenario &scenario);

// JSON scenario file (see README for the schema).
Scenario load_scenario(std::istream &in);
Scenario load_scenario_file(const std::filesystem::path &path);
void save_scenario(std::ostream &out, const Scenario &scenario);

// 3x3 blocks, 4 rooftop sites x 3 sectors around a central square, 20 UEs.
Scenario desk_scenario();

// 33 three-sector cells, 200 street UEs at 30 km/h, 40 square and 80
// pedestrian UEs at 3 km/h.
Scenario full_scenario();

} // namespace mmwmob::sim
