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

#include "mmwmob/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "mmwmob/error.hpp"

namespace mmwmob::sim {

using nlohmann::json;
using nlohmann::ordered_json;

Rect StreetGrid::block(int i, int j) const
{
    const double x0 = i * (block_m + street_m);
    const double y0 = j * (block_m + street_m);
    return {x0, y0, x0 + block_m, y0 + block_m};
}

std::vector<double> StreetGrid::vertical_streets() const
{
    std::vector<double> out;
    for (int k = 1; k < blocks_x; ++k)
        out.push_back(k * (block_m + street_m) - 0.5 * street_m);
    return out;
}

std::vector<double> StreetGrid::horizontal_streets() const
{
    std::vector<double> out;
    for (int k = 1; k < blocks_y; ++k)
        out.push_back(k * (block_m + street_m) - 0.5 * street_m);
    return out;
}

std::vector<Rect> Scenario::buildings() const
{
    std::vector<Rect> out;
    for (int j = 0; j < grid.blocks_y; ++j)
        for (int i = 0; i < grid.blocks_x; ++i)
        {
            const bool open = std::any_of(areas.begin(), areas.end(),
                                          [&](const Area &a) { return a.block_i == i && a.block_j == j; });
            if (!open)
                out.push_back(grid.block(i, j));
        }
    return out;
}

std::vector<Cell> Scenario::cells() const
{
    std::vector<Cell> out;
    for (std::size_t s = 0; s < sites.size(); ++s)
        for (double az : sites[s].sector_azimuths_deg)
            out.push_back({static_cast<int>(out.size()), static_cast<int>(s), sites[s].position, sites[s].height_m, az});
    return out;
}

const Area &Scenario::area(const std::string &area_name) const
{
    for (const auto &a : areas)
        if (a.name == area_name)
            return a;
    throw ValidationError("unknown area '" + area_name + "'");
}

int Scenario::total_ues() const
{
    int n = 0;
    for (const auto &g : ue_groups)
        n += g.count;
    return n;
}

double Scenario::fastest_speed_mps() const
{
    double v = 0.0;
    for (const auto &g : ue_groups)
        if (g.count > 0)
            v = std::max(v, g.speed_mps);
    return v;
}

void validate(const Scenario &s)
{
    require(s.carrier_hz > 0.0, "carrier frequency must be positive");
    require(s.ue_height_m > 0.0, "UE height must be positive");
    require(s.grid.blocks_x >= 1 && s.grid.blocks_y >= 1, "grid needs at least one block");
    require(s.grid.blocks_x >= 2 || s.grid.blocks_y >= 2, "grid needs at least one street");
    require(s.grid.block_m > 0.0 && s.grid.street_m > 0.0, "block and street sizes must be positive");
    for (const auto &a : s.areas)
    {
        require(!a.name.empty() && a.name != "street", "area names must be non-empty and not 'street'");
        require(a.block_i >= 0 && a.block_i < s.grid.blocks_x && a.block_j >= 0 && a.block_j < s.grid.blocks_y,
                "area '" + a.name + "' lies outside the grid");
        require(std::count_if(s.areas.begin(), s.areas.end(), [&](const Area &b) { return b.name == a.name; }) == 1,
                "duplicate area name '" + a.name + "'");
    }
    require(!s.sites.empty(), "scenario needs at least one site");
    for (const auto &site : s.sites)
    {
        require(site.height_m > s.ue_height_m, "site antennas must be above UE height");
        require(!site.sector_azimuths_deg.empty(), "every site needs at least one sector");
    }
    require(s.total_ues() >= 1, "scenario needs at least one UE");
    for (const auto &g : s.ue_groups)
    {
        require(g.count >= 0, "UE group '" + g.name + "' has a negative count");
        require(g.speed_mps >= 0.0, "UE group '" + g.name + "' has a negative speed");
        if (g.pattern == MobilityPattern::RandomWaypoint)
            (void)s.area(g.area);
    }
    require(s.sim.tick_s > 0.0, "tick must be positive");
    require(s.sim.duration_s >= s.sim.tick_s, "duration must cover at least one tick");
}

namespace {

std::string area_kind_name(AreaKind k)
{
    return k == AreaKind::Square ? "square" : "pedestrian";
}

// Default sectors for a site on a building corner point into the three
// free quadrants.
std::vector<double> corner_sectors(const std::string &corner)
{
    if (corner == "NE")
        return {-45.0, 45.0, 135.0};
    if (corner == "NW")
        return {45.0, 135.0, 225.0};
    if (corner == "SE")
        return {-135.0, -45.0, 45.0};
    if (corner == "SW")
        return {135.0, 225.0, 315.0};
    throw ValidationError("unknown building corner '" + corner + "' (expected NE, NW, SE or SW)");
}

Point corner_point(const StreetGrid &g, int i, int j, const std::string &corner)
{
    const Rect b = g.block(i, j);
    if (corner == "NE")
        return {b.x1, b.y1};
    if (corner == "NW")
        return {b.x0, b.y1};
    if (corner == "SE")
        return {b.x1, b.y0};
    if (corner == "SW")
        return {b.x0, b.y0};
    throw ValidationError("unknown building corner '" + corner + "'");
}

Site corner_site(const StreetGrid &g, int i, int j, const std::string &corner, double height = 10.0)
{
    return {corner_point(g, i, j, corner), height, corner_sectors(corner)};
}

} // namespace

Scenario load_scenario(std::istream &in)
{
    json j;
    try
    {
        j = json::parse(in, nullptr, true, true);
    }
    catch (const json::exception &e)
    {
        throw ValidationError(std::string("malformed scenario JSON: ") + e.what());
    }
    try
    {
        Scenario s;
        s.name = j.value("name", "scenario");
        s.carrier_hz = j.value("carrier_hz", 28e9);
        s.ue_height_m = j.value("ue_height_m", 1.5);
        const auto &g = j.at("grid");
        s.grid.blocks_x = g.at("blocks_x").get<int>();
        s.grid.blocks_y = g.at("blocks_y").get<int>();
        s.grid.block_m = g.value("block_m", 80.0);
        s.grid.street_m = g.value("street_m", 20.0);
        for (const auto &a : j.value("areas", json::array()))
        {
            Area area;
            area.name = a.at("name").get<std::string>();
            const auto kind = a.value("kind", "square");
            require(kind == "square" || kind == "pedestrian", "area kind must be 'square' or 'pedestrian'");
            area.kind = kind == "square" ? AreaKind::Square : AreaKind::Pedestrian;
            const auto blk = a.at("block").get<std::vector<int>>();
            require(blk.size() == 2, "area block must be [i, j]");
            area.block_i = blk[0];
            area.block_j = blk[1];
            s.areas.push_back(area);
        }
        for (const auto &st : j.at("sites"))
        {
            Site site;
            site.height_m = st.value("height_m", 10.0);
            if (st.contains("corner"))
            {
                const auto blk = st.at("block").get<std::vector<int>>();
                require(blk.size() == 2, "site block must be [i, j]");
                const auto corner = st.at("corner").get<std::string>();
                site.position = corner_point(s.grid, blk[0], blk[1], corner);
                site.sector_azimuths_deg = corner_sectors(corner);
            }
            else
                site.position = {st.at("x").get<double>(), st.at("y").get<double>()};
            if (st.contains("sector_azimuths_deg"))
                site.sector_azimuths_deg = st.at("sector_azimuths_deg").get<std::vector<double>>();
            s.sites.push_back(site);
        }
        for (const auto &ug : j.at("ue_groups"))
        {
            UeGroup grp;
            grp.name = ug.value("name", "group");
            grp.count = ug.at("count").get<int>();
            if (ug.contains("speed_mps"))
                grp.speed_mps = ug.at("speed_mps").get<double>();
            else
                grp.speed_mps = ug.at("speed_kmh").get<double>() / 3.6;
            grp.area = ug.value("area", "street");
            grp.pattern = grp.area == "street" ? MobilityPattern::Street : MobilityPattern::RandomWaypoint;
            s.ue_groups.push_back(grp);
        }
        if (j.contains("sim"))
        {
            const auto &sim = j.at("sim");
            s.sim.duration_s = sim.value("duration_s", s.sim.duration_s);
            s.sim.tick_s = sim.value("tick_s", s.sim.tick_s);
            s.sim.seed = sim.value("seed", s.sim.seed);
        }
        validate(s);
        return s;
    }
    catch (const json::exception &e)
    {
        throw ValidationError(std::string("invalid scenario: ") + e.what());
    }
}

Scenario load_scenario_file(const std::filesystem::path &path)
{
    std::ifstream f(path);
    require(static_cast<bool>(f), "cannot open scenario file " + path.string());
    return load_scenario(f);
}

void save_scenario(std::ostream &out, const Scenario &s)
{
    ordered_json j;
    j["name"] = s.name;
    j["carrier_hz"] = s.carrier_hz;
    j["ue_height_m"] = s.ue_height_m;
    j["grid"] = {{"blocks_x", s.grid.blocks_x},
                 {"blocks_y", s.grid.blocks_y},
                 {"block_m", s.grid.block_m},
                 {"street_m", s.grid.street_m}};
    auto areas = ordered_json::array();
    for (const auto &a : s.areas)
        areas.push_back({{"name", a.name}, {"kind", area_kind_name(a.kind)}, {"block", {a.block_i, a.block_j}}});
    j["areas"] = areas;
    auto sites = ordered_json::array();
    for (const auto &st : s.sites)
        sites.push_back({{"x", st.position.x},
                         {"y", st.position.y},
                         {"height_m", st.height_m},
                         {"sector_azimuths_deg", st.sector_azimuths_deg}});
    j["sites"] = sites;
    auto groups = ordered_json::array();
    for (const auto &g : s.ue_groups)
        groups.push_back({{"name", g.name}, {"count", g.count}, {"speed_mps", g.speed_mps}, {"area", g.area}});
    j["ue_groups"] = groups;
    j["sim"] = {{"duration_s", s.sim.duration_s}, {"tick_s", s.sim.tick_s}, {"seed", s.sim.seed}};
    out << j.dump(2) << '\n';
}

Scenario desk_scenario()
{
    Scenario s;
    s.name = "desk";
    s.grid = {3, 3, 80.0, 20.0};
    s.areas = {{"square", AreaKind::Square, 1, 1}, {"pedestrian", AreaKind::Pedestrian, 1, 0}};
    s.sites = {corner_site(s.grid, 0, 0, "NE"), corner_site(s.grid, 2, 0, "NW"), corner_site(s.grid, 0, 2, "SE"),
               corner_site(s.grid, 2, 2, "SW")};
    s.ue_groups = {{"street", 12, 30.0 / 3.6, MobilityPattern::Street, "street"},
                   {"square", 4, 3.0 / 3.6, MobilityPattern::RandomWaypoint, "square"},
                   {"pedestrian", 4, 3.0 / 3.6, MobilityPattern::RandomWaypoint, "pedestrian"}};
    s.sim = {60.0, 0.01, 1};
    validate(s);
    return s;
}

Scenario full_scenario()
{
    Scenario s;
    s.name = "full";
    s.grid = {6, 5, 80.0, 20.0};
    s.areas = {{"square", AreaKind::Square, 2, 2}, {"pedestrian", AreaKind::Pedestrian, 4, 1}};
    const std::vector<std::tuple<int, int, const char *>> corners = {
        {0, 0, "NE"}, {2, 0, "NE"}, {5, 0, "NW"}, {1, 1, "NE"}, {3, 1, "NE"}, {0, 2, "NE"},
        {4, 2, "NE"}, {1, 3, "NE"}, {3, 3, "NE"}, {0, 4, "SE"}, {5, 4, "SW"}};
    for (const auto &[i, j, c] : corners)
        s.sites.push_back(corner_site(s.grid, i, j, c));
    s.ue_groups = {{"street", 200, 30.0 / 3.6, MobilityPattern::Street, "street"},
                   {"square", 40, 3.0 / 3.6, MobilityPattern::RandomWaypoint, "square"},
                   {"pedestrian", 80, 3.0 / 3.6, MobilityPattern::RandomWaypoint, "pedestrian"}};
    s.sim = {60.0, 0.01, 1};
    validate(s);
    return s;
}

} // namespace mmwmob::sim
