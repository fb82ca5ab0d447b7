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

// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mmwmob/beamforming.hpp"
#include "mmwmob/campaign.hpp"
#include "mmwmob/channel_stats.hpp"
#include "mmwmob/fading.hpp"
#include "mmwmob/handover.hpp"

using namespace mmwmob;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string &what)
    {
        if (!detail.empty())
            detail += "; ";
        detail += what + (ok ? "" : " [x]");
        pass = pass && ok;
    }
};

std::string fmt(const char *f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char *f, double a, double b)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

constexpr double kRefDoppler = 25.93; // 28 GHz at 1 km/h

fading::FadingProcess envelope(int L, std::size_t samples, double dt, std::uint64_t seed)
{
    fading::EnvelopeConfig c;
    c.path_diversity = L;
    c.sinusoids = 512;
    c.max_doppler_hz = kRefDoppler;
    c.sample_period_s = dt;
    c.duration_s = static_cast<double>(samples) * dt;
    c.seed = seed;
    return fading::generate_multipath_envelope(c);
}

Outcome envelope_statistics()
{
    Outcome o;
    const auto t0 = Clock::now();
    for (int L : {1, 2, 4, 8, 16})
    {
        const auto e = envelope(L, 1000000, 1e-3, 100 + L);
        double s = 0.0, s2 = 0.0;
        for (double p : e.samples)
        {
            s += p;
            s2 += p * p;
        }
        const double n = static_cast<double>(e.size());
        const double mean = s / n;
        const double var = s2 / n - mean * mean;
        o.expect(e.size() == 1000000 && std::abs(mean - 1.0) <= 0.02 && std::abs(var - 1.0 / L) <= 0.05 / L,
                 "L=" + std::to_string(L) + fmt(" mean=%.4f", mean) + fmt(" var=%.4f", var));
    }
    const double dt = seconds_since(t0);
    o.expect(dt <= 30.0, fmt("%.1f s", dt));
    return o;
}

Outcome autocorrelation()
{
    Outcome o;
    const double dt = 1e-4;
    const auto e = envelope(1, 1000000, dt, 21);
    const double first_zero = 2.404825557695773 / (2.0 * fading::kPi * kRefDoppler);
    const auto max_lag = static_cast<std::size_t>(std::floor(first_zero / dt));
    const auto r = fading::empirical_autocorrelation(e, max_lag);
    double se = 0.0;
    for (std::size_t k = 0; k <= max_lag; ++k)
    {
        const double d = r[k] - fading::theoretical_autocorrelation(kRefDoppler, static_cast<double>(k) * dt);
        se += d * d;
    }
    const double rmse = std::sqrt(se / static_cast<double>(max_lag + 1));
    o.expect(rmse <= 0.05, fmt("RMSE=%.4f over %.2f ms", rmse, first_zero * 1e3));
    return o;
}

Outcome coherence_time()
{
    Outcome o;
    const double tc = fading::coherence_time_jakes(kRefDoppler);
    const auto st = fading::estimate_envelope_stats(envelope(1, 1000000, 1e-4, 31));
    const double rel = std::abs(st.estimated_coherence_time_s - tc) / tc;
    o.expect(rel <= 0.15, fmt("Tc=%.3f ms vs %.3f ms", st.estimated_coherence_time_s * 1e3, tc * 1e3));

    const double v1 = 1.0 / 3.6, v30 = 30.0 / 3.6, fc = 28e9;
    const double scaled = channel::scale_coherence_time(tc, fc, v1, fc, v30);
    // 30x the speed at the same carrier: Jakes Tc at 30 x 25.93 Hz
    const double direct = fading::coherence_time_jakes(30.0 * kRefDoppler);
    o.expect(std::abs(scaled - direct) <= 1e-12 * direct && std::abs(scaled - 0.2302e-3) < 0.00005e-3,
             fmt("30 km/h Tc=%.6f ms (direct %.6f ms)", scaled * 1e3, direct * 1e3));
    return o;
}

Outcome diversity_round_trip()
{
    Outcome o;
    for (int L : {1, 2, 4, 8})
    {
        const auto st = fading::estimate_envelope_stats(envelope(L, 100000, 1e-3, 40 + L));
        o.expect(st.estimated_path_diversity == L,
                 "L=" + std::to_string(L) + " -> " + std::to_string(st.estimated_path_diversity));
    }
    return o;
}

Outcome beamforming()
{
    Outcome o;
    // coherent sum over a 16x8 panel (0.7 / 0.5 wavelength) for a boresight ray
    const double u[3] = {1.0, 0.0, 0.0};
    std::complex<double> sum = 0.0;
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 8; ++c)
        {
            const double phase = 2.0 * fading::kPi * (0.5 * c * u[1] + 0.7 * r * u[2]);
            sum += std::polar(1.0, phase) * std::polar(1.0, -phase);
        }
    const double oracle = 10.0 * std::log10(std::norm(sum) / 128.0);

    beam::Beam b;
    b.geometry = beam::ArrayGeometry::planar(16, 8);
    beam::ElementPattern iso;
    iso.isotropic = true;
    const double g = beam::single_ray_gain(b, beam::Direction{90.0, 0.0}, iso);
    o.expect(std::abs(g - 21.07) <= 0.01 && std::abs(g - oracle) <= 1e-9, fmt("boresight %.4f dB", g));

    const auto beams = beam::default_beam_set();
    bool table = beams.size() == 12;
    const double az[12] = {-52.5, -37.5, -22.5, -7.5, 7.5, 22.5, 37.5, 52.5, -45.0, -15.0, 15.0, 45.0};
    for (std::size_t k = 0; table && k < 12; ++k)
    {
        const auto &s = beams[k].steer;
        const bool far = k < 8;
        table = s.azimuth_deg == az[k] && s.zenith_deg == (far ? 90.0 : 97.0) &&
                beams[k].geometry.rows() == (far ? 16 : 8) && beams[k].geometry.cols() == (far ? 8 : 4);
    }
    o.expect(table, "12-beam table");
    return o;
}

Outcome gain_fit()
{
    Outcome o;
    std::vector<beam::GainSample> s;
    for (int k = 0; k < 40; ++k)
    {
        const double g = -10.0 + 0.75 * k;
        s.push_back({beam::Condition::Los, g, 0.83 * g - 2.4});
    }
    const auto m = beam::fit_gain_model(s, beam::Condition::Los);
    o.expect(std::abs(m.slope - 0.83) <= 1e-6 * 0.83 && std::abs(m.intercept_db + 2.4) <= 1e-6 * 2.4,
             fmt("slope=%.9f intercept=%.9f", m.slope, m.intercept_db));
    o.expect(m.floor_db == -20.0 && beam::apply_gain_model(m, -40.0) == -20.0, "LOS floor -20 dB");
    for (auto &x : s)
        x.condition = beam::Condition::Nlos;
    const auto n = beam::fit_gain_model(s, beam::Condition::Nlos);
    o.expect(n.floor_db == 0.0 && beam::apply_gain_model(n, -5.0) == 0.0 &&
                 beam::apply_gain_model(n, 20.0) == n.slope * 20.0 + n.intercept_db,
             "NLOS floor 0 dB");
    return o;
}


Outcome state_machines()
{
    Outcome o;
    const auto t0 = Clock::now();
    const double tick = 0.01;
    const sim::A3Config a3{3.0, 0.08};

    sim::A3Tracker above(2);
    const std::vector<double> l3{-80.0, -76.5};
    int fired_at = -1;
    for (int k = 1; k <= 20 && fired_at < 0; ++k)
        if (above.check(l3, 0, a3, tick))
            fired_at = k;
    o.expect(fired_at == 8, "A3 after " + std::to_string(fired_at) + " ticks");

    sim::A3Tracker equal(2);
    const std::vector<double> eq{-80.0, -77.0};
    bool fired = false;
    for (int k = 0; k < 200; ++k)
        fired = fired || equal.check(eq, 0, a3, tick).has_value();
    o.expect(!fired, "no A3 at equality");

    const sim::LinkThresholds th;
    sim::RlfTracker rlf;
    rlf.update(-8.5, th, 0.6, tick);
    int ticks = 0;
    auto ev = sim::RlfEvent::None;
    while (ev == sim::RlfEvent::None && ticks < 1000)
    {
        ev = rlf.update(-8.5, th, 0.6, tick);
        ++ticks;
    }
    o.expect(ev == sim::RlfEvent::Rlf && ticks == 60, "RLF after " + std::to_string(ticks * 10) + " ms");

    sim::RlfTracker cancel;
    cancel.update(-8.5, th, 0.6, tick);
    for (int k = 0; k < 50; ++k)
        cancel.update(-7.0, th, 0.6, tick);
    const auto stop = cancel.update(-5.5, th, 0.6, tick);
    bool late_rlf = false;
    for (int k = 0; k < 100; ++k)
        late_rlf = late_rlf || cancel.update(-7.0, th, 0.6, tick) == sim::RlfEvent::Rlf;
    o.expect(stop == sim::RlfEvent::T310Stop && !late_rlf, "gamma_in cancels T310");

    const double dt = seconds_since(t0);
    o.expect(dt < 1.0, fmt("%.3f s", dt));
    return o;
}

using Means = std::map<std::pair<std::string, std::string>, std::pair<double, double>>; // n_ho, n_rlf

Means run_group(const sim::CampaignConfig &base, const sim::SimResources &res, std::vector<std::string> cases,
                std::vector<std::string> models)
{
    sim::CampaignConfig c = base;
    const auto all = sim::standard_cases();
    c.cases.clear();
    for (const auto &n : cases)
        c.cases.push_back(sim::find_case(all, n));
    c.models.clear();
    for (const auto &m : models)
        c.models.push_back(sim::parse_channel_model(m));
    Means out;
    for (const auto &a : sim::aggregate(sim::run_campaign(c, res)))
        out[{a.case_name, a.model_name}] = {a.n_ho_mean, a.n_rlf_mean};
    return out;
}

Outcome kpi_trends()
{
    Outcome o;
    const auto t0 = Clock::now();
    sim::CampaignConfig base;
    base.scenario = sim::desk_scenario();
    base.scenario.sim.duration_s = 60.0;
    base.seeds = {1, 2, 3, 4, 5};
    base.workers = 0;
    base.event_logs = false;
    base.models = {sim::parse_channel_model("simplified"), sim::parse_channel_model("jakes-2"),
                   sim::parse_channel_model("jakes-4"), sim::parse_channel_model("jakes-8"),
                   sim::parse_channel_model("jakes-16")};
    base.cases = sim::standard_cases();
    const auto res = sim::prepare_resources(base);

    const std::string simp = "simplified:single";
    const auto g1 = run_group(base, res, {"Reference", "FF", "L3"}, {simp, "simplified:fitting"});
    const auto g2 = run_group(base, res, {"FF"}, {"jakes-2", "jakes-4", "jakes-8", "jakes-16"});
    const std::vector<std::string> talpha{"ME+FF+L3 100 ms", "ME+FF+L3 50 ms", "ME+FF+L3 20 ms", "ME+FF+L3 10 ms",
                                          "ME+FF+L3 5 ms"};
    const auto g3 = run_group(base, res, talpha, {simp});

    auto ho = [](const Means &m, const std::string &c, const std::string &model) { return m.at({c, model}).first; };
    auto rlf = [](const Means &m, const std::string &c, const std::string &model) { return m.at({c, model}).second; };

    o.expect(ho(g1, "FF", simp) > ho(g1, "Reference", simp),
             fmt("(a) N_HO FF %.1f > Reference %.1f", ho(g1, "FF", simp), ho(g1, "Reference", simp)));

    std::vector<double> jakes;
    for (int L : {2, 4, 8, 16})
        jakes.push_back(ho(g2, "FF", "jakes-" + std::to_string(L) + ":single"));
    bool non_increasing = true;
    std::string seq;
    for (std::size_t k = 0; k < jakes.size(); ++k)
    {
        if (k > 0)
            non_increasing = non_increasing && jakes[k] <= jakes[k - 1];
        seq += (k ? " " : "") + fmt("%.1f", jakes[k]);
    }
    o.expect(non_increasing, "(b) N_HO over L=2,4,8,16: " + seq);

    const double s = ho(g1, "FF", simp);
    const double lo = std::min(jakes[2], jakes[3]), hi = std::max(jakes[2], jakes[3]);
    o.expect(s >= lo && s <= hi, fmt("(c) simplified N_HO %.1f", s) + fmt(" in [%.1f, %.1f]", lo, hi));

    o.expect(rlf(g1, "FF", "simplified:fitting") > rlf(g1, "FF", simp),
             fmt("(d) N_RLF fitting %.1f > single %.1f", rlf(g1, "FF", "simplified:fitting"), rlf(g1, "FF", simp)));

    o.expect(rlf(g1, "L3", simp) > rlf(g1, "Reference", simp),
             fmt("(e) N_RLF L3 %.1f > Reference %.1f", rlf(g1, "L3", simp), rlf(g1, "Reference", simp)));

    bool increasing = true;
    seq.clear();
    for (std::size_t k = 0; k < talpha.size(); ++k)
    {
        if (k > 0)
            increasing = increasing && ho(g3, talpha[k], simp) > ho(g3, talpha[k - 1], simp);
        seq += (k ? " " : "") + fmt("%.1f", ho(g3, talpha[k], simp));
    }
    o.expect(increasing, "(f) N_HO over T_alpha=100..5 ms: " + seq);

    const double dt = seconds_since(t0);
    o.expect(dt <= 600.0, fmt("%.0f s", dt));
    return o;
}

std::string slurp(const fs::path &p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    Outcome o;
    const auto cfg = sim::parse_campaign(R"({
      "scenario": "desk", "duration_s": 10,
      "cases": ["Reference", "ME+FF+L3 20 ms"],
      "models": ["jakes-4", "jakes-4:fitting"],
      "seeds": [11, 12], "event_logs": true
    })");
    const fs::path base = fs::temp_directory_path() / "mmwmob_acceptance_determinism";
    fs::remove_all(base);
    for (const char *sub : {"a", "b"})
    {
        const auto res = sim::prepare_resources(cfg);
        const auto out = base / sub;
        fs::create_directories(out);
        sim::write_campaign_outputs(out, cfg, sim::run_campaign(cfg, res, out));
    }
    int files = 0, same = 0;
    for (const auto &e : fs::recursive_directory_iterator(base / "a"))
    {
        if (!e.is_regular_file())
            continue;
        ++files;
        const auto twin = base / "b" / fs::relative(e.path(), base / "a");
        same += fs::exists(twin) && slurp(e.path()) == slurp(twin);
    }
    o.expect(files == 13 && same == files, std::to_string(same) + "/" + std::to_string(files) + " files identical");
    fs::remove_all(base);
    return o;
}

} // namespace

int main()
{
    struct Criterion
    {
        const char *name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"envelope statistics", envelope_statistics},
        {"autocorrelation", autocorrelation},
        {"coherence time", coherence_time},
        {"path diversity round trip", diversity_round_trip},
        {"beamforming gain and beam table", beamforming},
        {"gain fit", gain_fit},
        {"state machines", state_machines},
        {"KPI trends", kpi_trends},
        {"determinism", determinism},
    };
    int failed = 0, k = 0;
    for (const auto &c : criteria)
    {
        ++k;
        Outcome r;
        try
        {
            r = c.run();
        }
        catch (const std::exception &e)
        {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        failed += !r.pass;
        std::printf("%s criterion %d (%s): %s\n", r.pass ? "PASS" : "FAIL", k, c.name, r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", k - failed, k);
    return failed == 0 ? 0 : 1;
}
