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
#include <sstream>

#include "mmwmob/error.hpp"
#include "mmwmob/mobility.hpp"
#include "mmwmob/propagation.hpp"
#include "mmwmob/scenario.hpp"

using namespace mmwmob;
using namespace mmwmob::sim;

namespace {

bool on_street(const StreetGrid &g, Point p)
{
    for (double x : g.vertical_streets())
        if (std::abs(p.x - x) < 1e-9)
            return true;
    for (double y : g.horizontal_streets())
        if (std::abs(p.y - y) < 1e-9)
            return true;
    return false;
}

} // namespace

TEST_CASE("street grid layout")
{
    const StreetGrid g{3, 3, 80.0, 20.0};
    CHECK(g.width() == 280.0);
    CHECK(g.vertical_streets() == std::vector<double>{90.0, 190.0});
    const Rect b = g.block(1, 2);
    CHECK(b.x0 == 100.0);
    CHECK(b.y0 == 200.0);
    CHECK(b.x1 == 180.0);
}

TEST_CASE("desk scenario shape")
{
    const auto s = desk_scenario();
    CHECK(s.cells().size() == 12);
    CHECK(s.total_ues() == 20);
    CHECK(s.buildings().size() == 7);
    CHECK(s.fastest_speed_mps() == doctest::Approx(30.0 / 3.6));
    const auto cells = s.cells();
    CHECK(cells[4].site == 1);
    CHECK(cells[4].azimuth_deg == 135.0);
}

TEST_CASE("full scenario matches the published population")
{
    const auto s = full_scenario();
    CHECK(s.cells().size() == 33);
    CHECK(s.total_ues() == 320);
    CHECK(s.ue_groups[0].count == 200);
    CHECK(s.ue_groups[1].count == 40);
    CHECK(s.ue_groups[2].count == 80);
}

TEST_CASE("scenario JSON round trip and corner sites")
{
    const auto s = desk_scenario();
    std::stringstream ss;
    save_scenario(ss, s);
    const auto back = load_scenario(ss);
    CHECK(back.cells().size() == s.cells().size());
    CHECK(back.sites[2].position.x == s.sites[2].position.x);
    CHECK(back.ue_groups[1].pattern == MobilityPattern::RandomWaypoint);

    std::istringstream corner(R"({"grid":{"blocks_x":2,"blocks_y":2},
        "sites":[{"block":[0,0],"corner":"NE"}],
        "ue_groups":[{"count":1,"speed_kmh":36}]})");
    const auto c = load_scenario(corner);
    CHECK(c.sites[0].position.x == 80.0);
    CHECK(c.sites[0].position.y == 80.0);
    CHECK(c.sites[0].sector_azimuths_deg.size() == 3);
    CHECK(c.ue_groups[0].speed_mps == doctest::Approx(10.0));
}

TEST_CASE("invalid scenarios are rejected")
{
    for (const char *text : {
             R"({"grid":{"blocks_x":2,"blocks_y":2},"sites":[],"ue_groups":[{"count":1,"speed_kmh":3}]})",
             R"({"grid":{"blocks_x":2,"blocks_y":2},"sites":[{"x":0,"y":0}],"ue_groups":[{"count":1,"speed_kmh":3,"area":"nowhere"}]})",
             R"({"grid":{"blocks_x":2,"blocks_y":2},"sites":[{"x":0,"y":0}],"ue_groups":[{"count":1,"speed_kmh":3}],"sim":{"tick_s":0}})",
             R"({"grid":{"blocks_x":2,"blocks_y":2},"sites":[{"block":[0,0],"corner":"XX"}],"ue_groups":[{"count":1,"speed_kmh":3}]})",
             R"({"grid":{"blocks_x":2,"blocks_y":2},)"})
    {
        std::istringstream in(text);
        CHECK_THROWS_AS(load_scenario(in), ValidationError);
    }
}

TEST_CASE("UMi street canyon path loss")
{
    const UmiStreetCanyon pl;
    const LinkGeometry near{100.0, 10.0, 1.5, 28e9};
    const double d3 = std::sqrt(100.0 * 100.0 + 8.5 * 8.5);
    const double los = 32.4 + 21 * std::log10(d3) + 20 * std::log10(28.0);
    CHECK(pl.path_loss_db(near, Condition::Los) == doctest::Approx(los));
    const double nlos = 35.3 * std::log10(d3) + 22.4 + 21.3 * std::log10(28.0);
    CHECK(pl.path_loss_db(near, Condition::Nlos) == doctest::Approx(std::max(los, nlos)));

    // breakpoint 4 (h_bs - 1)(h_ut - 1) f / c
    const double bp = 4 * 9 * 0.5 * 28e9 / 299792458.0;
    CHECK(UmiStreetCanyon::breakpoint_distance_m(near) == doctest::Approx(bp));
    const LinkGeometry far{2 * bp, 10.0, 1.5, 28e9};
    const double d3f = std::sqrt(4 * bp * bp + 8.5 * 8.5);
    CHECK(pl.path_loss_db(far, Condition::Los) ==
          doctest::Approx(32.4 + 40 * std::log10(d3f) + 20 * std::log10(28.0) - 9.5 * std::log10(bp * bp + 8.5 * 8.5)));

    // clamped below 10 m
    CHECK(pl.path_loss_db({1.0, 10.0, 1.5, 28e9}, Condition::Los) ==
          pl.path_loss_db({10.0, 10.0, 1.5, 28e9}, Condition::Los));
}

TEST_CASE("line of sight through the grid")
{
    const std::vector<Rect> b{{0, 0, 80, 80}, {100, 0, 180, 80}};
    CHECK(line_of_sight({90, -10}, {90, 200}, b));    // along the street
    CHECK_FALSE(line_of_sight({50, -10}, {50, 100}, b)); // through a block
    CHECK(line_of_sight({80, 80}, {200, 200}, b));   // from a corner outward
    CHECK(line_of_sight({80, 80}, {80, 200}, b));    // grazing a wall
    CHECK_FALSE(line_of_sight({-10, 40}, {200, 40}, b));
    CHECK(line_of_sight({0, 0}, {0, 0}, b));
}

TEST_CASE("shadowing statistics and correlation")
{
    ShadowingConfig cfg;
    double s2 = 0.0, cross = 0.0;
    const int n = 20000;
    for (int k = 0; k < n; ++k)
    {
        ShadowingProcess p(1000 + k);
        const double a = p.current_db(Condition::Nlos, cfg);
        const double b = p.advance(cfg.decorrelation_nlos_m, Condition::Nlos, cfg);
        s2 += a * a;
        cross += a * b;
    }
    CHECK(std::sqrt(s2 / n) == doctest::Approx(7.82).epsilon(0.03));
    CHECK(cross / s2 == doctest::Approx(std::exp(-1.0)).epsilon(0.05));

    cfg.enabled = false;
    ShadowingProcess p(3);
    CHECK(p.advance(5.0, Condition::Los, cfg) == 0.0);
    ShadowingConfig on;
    ShadowingProcess q(3);
    const double v = q.current_db(Condition::Los, on);
    CHECK(q.advance(0.0, Condition::Los, on) == v);
}

TEST_CASE("street UE moves v dt along the axis")
{
    const StreetGrid g{3, 3, 80.0, 20.0};
    auto m = UeMotion::street(g, 30.0 / 3.6, 7);
    CHECK(on_street(g, m.position()));
    int straight = 0;
    for (int k = 0; k < 2000; ++k)
    {
        const Point a = m.position();
        CHECK(m.step(0.01) == doctest::Approx(30.0 / 3.6 * 0.01));
        const Point b = m.position();
        const double d = std::hypot(b.x - a.x, b.y - a.y);
        if (std::abs(d - 0.08333333333) < 1e-6)
            ++straight;
        CHECK(on_street(g, b));
        CHECK(b.x >= 0.0);
        CHECK(b.x <= g.width());
        CHECK(b.y >= 0.0);
        CHECK(b.y <= g.height());
    }
    CHECK(straight > 1900); // only turns and reversals deviate
}

TEST_CASE("street UE reverses at the boundary")
{
    const StreetGrid g{2, 1, 80.0, 20.0}; // one vertical street, no crossings
    auto m = UeMotion::street(g, 10.0, 1);
    double max_y = 0.0, min_y = 1e9;
    for (int k = 0; k < 5000; ++k)
    {
        m.step(0.01);
        max_y = std::max(max_y, m.position().y);
        min_y = std::min(min_y, m.position().y);
        CHECK(m.position().x == 90.0);
    }
    // within one 0.1 m step of each end
    CHECK(max_y <= 80.0);
    CHECK(max_y >= 79.9);
    CHECK(min_y >= 0.0);
    CHECK(min_y <= 0.1);
}

TEST_CASE("zero-speed UE stays put")
{
    const StreetGrid g{3, 3, 80.0, 20.0};
    auto m = UeMotion::street(g, 0.0, 2);
    const Point p = m.position();
    CHECK(m.step(0.01) == 0.0);
    CHECK(m.position().x == p.x);
    CHECK(m.position().y == p.y);
}

TEST_CASE("random waypoint stays inside its region")
{
    const Rect r{100, 0, 180, 80};
    auto m = UeMotion::waypoint(r, 3.0 / 3.6, 5);
    Point prev = m.position();
    for (int k = 0; k < 20000; ++k)
    {
        m.step(0.05);
        const Point p = m.position();
        CHECK(r.contains(p));
        CHECK(std::hypot(p.x - prev.x, p.y - prev.y) <= 3.0 / 3.6 * 0.05 + 1e-9);
        prev = p;
    }
}

TEST_CASE("motion is reproducible per seed")
{
    const StreetGrid g{3, 3, 80.0, 20.0};
    auto a = UeMotion::street(g, 8.0, 11);
    auto b = UeMotion::street(g, 8.0, 11);
    for (int k = 0; k < 3000; ++k)
    {
        a.step(0.01);
        b.step(0.01);
    }
    CHECK(a.position().x == b.position().x);
    CHECK(a.position().y == b.position().y);
}
