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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mmwmob/campaign.hpp"
#include "mmwmob/error.hpp"

using namespace mmwmob;
using namespace mmwmob::sim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char *kSmall = R"({
  "scenario": "desk",
  "duration_s": 3,
  "cases": ["Reference", {"name": "fast L3", "ff": true, "me": true, "l3": true, "t_alpha_ms": 20}],
  "models": ["jakes-2", "jakes-2:fitting"],
  "seeds": [1, 2],
  "workers": 2
})";

} // namespace

TEST_CASE("campaign defaults")
{
    const auto c = parse_campaign("{}");
    CHECK(c.cases.size() == 10);
    REQUIRE(c.models.size() == 1);
    CHECK(c.models[0].kind == ChannelKind::Simplified);
    CHECK(c.seeds.size() == 1);
    CHECK(c.scenario.name == desk_scenario().name);
}

TEST_CASE("campaign parsing")
{
    const auto c = parse_campaign(kSmall);
    CHECK(c.scenario.sim.duration_s == 3.0);
    REQUIRE(c.cases.size() == 2);
    CHECK(c.cases[1].name == "fast L3");
    CHECK(c.cases[1].t_alpha_s == doctest::Approx(0.02));
    CHECK(c.cases[1].l3_filter);
    CHECK(c.models[1].gain == GainKind::Fitting);
    CHECK(c.workers == 2);

    const auto p = parse_campaign(R"({"params": {"a3_offset_db": 2, "time_to_trigger_s": 0.16,
        "shadowing": {"enabled": false}, "element_pattern": "isotropic"}})");
    CHECK(p.params.a3.offset_db == 2.0);
    CHECK(p.params.a3.time_to_trigger_s == doctest::Approx(0.16));
    CHECK_FALSE(p.params.shadowing.enabled);
    CHECK(p.params.element.isotropic);
}

TEST_CASE("campaign errors")
{
    CHECK_THROWS_AS(parse_campaign("{"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"sedes": [1]})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"cases": ["Reference", "Reference"]})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"cases": ["Nope"]})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"models": ["jakes-4", "jakes-4"]})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"seeds": [3, 3]})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"seeds": []})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"tuples": "no/such/file.csv"})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"scenario": "no_such_scenario.json"})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"duration_s": -1})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"params": {"gamma_in_db": -9}})"), ValidationError);
    CHECK_THROWS_AS(parse_campaign(R"({"params": {"element_pattern": "dipole"}})"), ValidationError);
}

TEST_CASE("event log names are filesystem safe")
{
    RunResult r{"ME+FF+L3 5 ms", "jakes-4:fitting", 7, {}};
    const auto name = event_log_name(r);
    CHECK(name.find(' ') == std::string::npos);
    CHECK(name.find(':') == std::string::npos);
    CHECK(name.find('/') == std::string::npos);
}

TEST_CASE("aggregation over seeds")
{
    std::vector<RunResult> rs(3);
    for (int k = 0; k < 3; ++k)
    {
        rs[k].case_name = "A";
        rs[k].model_name = "m";
        rs[k].seed = k;
        rs[k].kpi.n_ho = 10 + 2 * k; // 10, 12, 14
        rs[k].kpi.ues = 1;
        rs[k].kpi.sim_time_s = 60.0;
    }
    const auto agg = aggregate(rs);
    REQUIRE(agg.size() == 1);
    CHECK(agg[0].runs == 3);
    CHECK(agg[0].n_ho_mean == doctest::Approx(12.0));
    CHECK(agg[0].n_ho_std == doctest::Approx(2.0));
    CHECK(agg[0].ho_rate_mean == doctest::Approx(12.0));
}

TEST_CASE("campaign outputs are reproducible")
{
    const auto cfg = parse_campaign(kSmall);
    const auto res = prepare_resources(cfg);
    const fs::path base = fs::temp_directory_path() / "mmwmob_test_campaign";
    fs::remove_all(base);
    for (const char *sub : {"a", "b"})
    {
        const auto out = base / sub;
        fs::create_directories(out);
        std::size_t calls = 0;
        const auto results = run_campaign(cfg, res, out, [&](const RunResult &, std::size_t, std::size_t total) {
            ++calls;
            CHECK(total == 8);
        });
        CHECK(calls == 8);
        REQUIRE(results.size() == 8);
        CHECK(results[0].case_name == "Reference");
        CHECK(results[0].model_name == "jakes-2:single");
        CHECK(results[1].seed == 2);
        CHECK(results[7].case_name == "fast L3");
        write_campaign_outputs(out, cfg, results);
    }
    for (const char *f : {"kpi_runs.csv", "kpi_summary.csv", "bars_n_ho.csv", "bars_n_rlf.csv", "bars_outage.csv"})
    {
        REQUIRE(fs::exists(base / "a" / f));
        CHECK(slurp(base / "a" / f) == slurp(base / "b" / f));
    }
    std::size_t logs = 0;
    for (const auto &e : fs::directory_iterator(base / "a" / "events"))
    {
        ++logs;
        CHECK(slurp(e.path()) == slurp(base / "b" / "events" / e.path().filename()));
    }
    CHECK(logs == 8);
    // kpi_runs has a header plus one row per cell
    std::istringstream runs(slurp(base / "a" / "kpi_runs.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(runs, line))
        ++rows;
    CHECK(rows == 9);
    fs::remove_all(base);
}
