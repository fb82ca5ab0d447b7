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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmwmob/beamforming.hpp"
#include "mmwmob/campaign.hpp"
#include "mmwmob/channel_stats.hpp"
#include "mmwmob/csv.hpp"
#include "mmwmob/error.hpp"
#include "mmwmob/fading.hpp"

namespace fs = std::filesystem;
using namespace mmwmob;

namespace {

struct Globals
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    bool verbose = false;
};

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void write_file(const fs::path &path, const std::string &content)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content))
        throw std::runtime_error("cannot write " + path.string());
}

std::ifstream open_input(const std::string &path)
{
    std::ifstream f(path);
    require(static_cast<bool>(f), "cannot open " + path);
    return f;
}

void print_tuple_summary(const channel::TupleLibrary &lib)
{
    const double tc_jakes = fading::coherence_time_jakes(
        fading::DopplerParams(lib.ref_carrier_hz, lib.ref_speed_mps).max_doppler_hz());
    std::cout << "reference: carrier " << csv::format(lib.ref_carrier_hz) << " Hz, speed "
              << csv::format(lib.ref_speed_mps) << " m/s, Jakes Tc " << csv::format_fixed(tc_jakes * 1e3, 3)
              << " ms\n";
    std::cout << "condition,beam_rank,median_tc_ms,median_path_diversity\n";
    for (auto cond : {channel::Condition::Los, channel::Condition::Nlos})
    {
        const auto &tuples = lib.tuples(cond);
        if (tuples.empty())
            continue;
        for (int b = 0; b < lib.beams; ++b)
        {
            std::vector<double> tc, l;
            for (const auto &t : tuples)
            {
                tc.push_back(t.rows[static_cast<std::size_t>(b)].coherence_time_s * 1e3);
                l.push_back(t.rows[static_cast<std::size_t>(b)].path_diversity);
            }
            std::cout << channel::to_string(cond) << ',' << b + 1 << ',' << csv::format_fixed(median(tc), 3) << ','
                      << csv::format(median(l)) << '\n';
        }
    }
}

int cmd_gen_tuples(const Globals &g, bool synthetic, const std::string &input, int m, int b)
{
    require(synthetic != !input.empty(), "gen-tuples needs exactly one of --synthetic or --input");
    channel::TupleLibrary lib;
    if (synthetic)
        lib = channel::synthesize_tuple_library(m, b, g.seed.value_or(1));
    else
    {
        auto f = open_input(input);
        lib = channel::ingest_tuples(f);
    }
    std::ostringstream os;
    channel::export_tuples(os, lib);
    const fs::path path = fs::path(g.out) / "tuples.csv";
    write_file(path, os.str());
    print_tuple_summary(lib);
    if (g.verbose)
        std::cerr << "wrote " << path.string() << '\n';
    return 0;
}

int cmd_build_lut(const Globals &g, double carrier, double speed_kmh)
{
    double fastest = speed_kmh / 3.6;
    if (!g.config.empty())
    {
        const auto campaign = sim::load_campaign(g.config);
        carrier = campaign.scenario.carrier_hz;
        fastest = campaign.scenario.fastest_speed_mps();
    }
    const auto cfg = channel::default_lut_config(carrier, fastest, g.seed.value_or(1));
    if (g.verbose)
        std::cerr << "building " << cfg.diversity_grid.size() << " x " << cfg.coherence_grid.size()
                  << " LUT, sample period " << csv::format(cfg.sample_period_s) << " s\n";
    const auto lut = channel::build_fading_lut(cfg);
    const fs::path dir = fs::path(g.out) / "lut";
    channel::save_lut(lut, dir);
    std::cout << "wrote " << dir.string() << " (" << lut.diversity_grid().size() * lut.coherence_grid().size()
              << " envelopes of " << lut.envelope_length() << " samples)\n";
    return 0;
}

int cmd_fit_gain(const Globals &g, const std::string &samples_path)
{
    auto f = open_input(samples_path);
    const auto samples = beam::read_gain_samples(f);
    require(!samples.empty(), "gain sample file holds no samples");
    std::ostringstream plot;
    plot << "condition,g_single_db,g_multipath_db,g_fit_db\n";
    for (auto cond : {channel::Condition::Los, channel::Condition::Nlos})
    {
        std::vector<beam::GainSample> subset;
        for (const auto &s : samples)
            if (s.condition == cond)
                subset.push_back(s);
        if (subset.empty())
        {
            std::cerr << "no " << channel::to_string(cond) << " samples, skipping\n";
            continue;
        }
        const auto model = beam::fit_gain_model(subset, cond);
        std::ostringstream os;
        beam::write_gain_model(os, model);
        const std::string name = cond == channel::Condition::Los ? "gain_los.json" : "gain_nlos.json";
        write_file(fs::path(g.out) / name, os.str());
        std::cout << channel::to_string(cond) << ": slope " << csv::format(model.slope) << ", intercept "
                  << csv::format(model.intercept_db) << " dB, floor " << csv::format(model.floor_db) << " dB ("
                  << subset.size() << " samples)\n";
        std::stable_sort(subset.begin(), subset.end(),
                         [](const auto &a, const auto &b) { return a.g_single_db < b.g_single_db; });
        for (const auto &s : subset)
            plot << channel::to_string(cond) << ',' << csv::format(s.g_single_db) << ','
                 << csv::format(s.g_multipath_db) << ',' << csv::format(beam::apply_gain_model(model, s.g_single_db))
                 << '\n';
    }
    write_file(fs::path(g.out) / "gain_fit_plot.csv", plot.str());
    return 0;
}

int cmd_run(const Globals &g, double duration, int workers)
{
    auto campaign = g.config.empty() ? sim::parse_campaign("{}") : sim::load_campaign(g.config);
    if (g.seed)
        campaign.seeds = {*g.seed};
    if (duration > 0.0)
        campaign.scenario.sim.duration_s = duration;
    if (workers > 0)
        campaign.workers = workers;
    sim::validate(campaign);
    if (g.verbose)
        std::cerr << "preparing shared channel resources\n";
    const auto res = sim::prepare_resources(campaign);
    sim::ProgressFn progress;
    if (g.verbose)
        progress = [](const sim::RunResult &r, std::size_t done, std::size_t total) {
            std::cerr << '[' << done << '/' << total << "] " << r.case_name << " / " << r.model_name << " / seed "
                      << r.seed << ": n_ho " << r.kpi.n_ho << ", n_rlf " << r.kpi.n_rlf << '\n';
        };
    const fs::path out(g.out);
    const auto results = sim::run_campaign(campaign, res, out, progress);
    sim::write_campaign_outputs(out, campaign, results);
    std::cout << "case,model,n_ho_mean,n_rlf_mean,outage_percent_mean\n";
    for (const auto &a : sim::aggregate(results))
        std::cout << a.case_name << ',' << a.model_name << ',' << csv::format_fixed(a.n_ho_mean, 2) << ','
                  << csv::format_fixed(a.n_rlf_mean, 2) << ',' << csv::format_fixed(a.outage_mean, 3) << '\n';
    return 0;
}

int cmd_analyze(const Globals &g, const std::string &log_path, int ues, double duration)
{
    if (!g.config.empty())
    {
        const auto campaign = sim::load_campaign(g.config);
        if (ues <= 0)
            ues = campaign.scenario.total_ues();
        if (duration <= 0.0)
            duration = std::floor(campaign.scenario.sim.duration_s / campaign.scenario.sim.tick_s + 1e-9) *
                       campaign.scenario.sim.tick_s;
    }
    require(ues > 0 && duration > 0.0, "analyze needs --ues and --duration (or --config)");
    auto f = open_input(log_path);
    const auto k = sim::analyze_event_log(f, ues, duration);
    std::ostringstream os;
    os << "n_ho,n_rlf,outage_percent,ho_per_ue_per_min,rlf_per_ue_per_min,n_a3_reports,n_ho_cmd_fail,n_ho_ra_fail\n"
       << k.n_ho << ',' << k.n_rlf << ',' << csv::format(k.outage_percent) << ','
       << csv::format(k.ho_per_ue_per_min()) << ',' << csv::format(k.rlf_per_ue_per_min()) << ',' << k.n_a3_reports
       << ',' << k.n_ho_command_fail << ',' << k.n_ho_access_fail << '\n';
    std::cout << os.str();
    write_file(fs::path(g.out) / "analysis.csv", os.str());
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mmwmob: fading, beamforming and mobility simulation for mmWave networks"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed = 1;
    app.add_option("--config", g.config, "Campaign configuration (JSON)")->check(CLI::ExistingFile);
    auto *seed_opt = app.add_option("--seed", seed, "Random seed");
    app.add_option("--out", g.out, "Output directory");
    app.add_flag("--verbose", g.verbose, "Progress on stderr");

    auto *gen = app.add_subcommand("gen-tuples", "Synthesize or ingest a per-beam tuple library");
    bool synthetic = false;
    std::string input;
    int m = 100, b = 12;
    gen->add_flag("--synthetic", synthetic, "Draw tuples from the built-in distributions");
    gen->add_option("--input", input, "Tuple CSV to ingest and re-export")->check(CLI::ExistingFile);
    gen->add_option("--m", m, "Tuples per condition")->check(CLI::PositiveNumber);
    gen->add_option("--b", b, "Beams per tuple")->check(CLI::PositiveNumber);

    auto *lut = app.add_subcommand("build-lut", "Pre-generate the fading look-up table");
    double carrier = 28e9, speed_kmh = 30.0;
    lut->add_option("--carrier", carrier, "Carrier frequency in Hz")->check(CLI::PositiveNumber);
    lut->add_option("--speed-kmh", speed_kmh, "Fastest UE speed in km/h")->check(CLI::PositiveNumber);

    auto *fit = app.add_subcommand("fit-gain", "Fit clamped-linear beamforming gain models");
    std::string samples;
    fit->add_option("--samples", samples, "CSV condition,g_single_db,g_multipath_db")->required();

    auto *run = app.add_subcommand("run", "Run a simulation campaign");
    double duration = 0.0;
    int workers = 0;
    run->add_option("--duration", duration, "Override simulated seconds")->check(CLI::PositiveNumber);
    run->add_option("--workers", workers, "Parallel runs (0: all cores)")->check(CLI::NonNegativeNumber);

    auto *analyze = app.add_subcommand("analyze", "Recompute KPIs from an event log");
    std::string log_path;
    int ues = 0;
    double analyze_duration = 0.0;
    analyze->add_option("--log", log_path, "Event log CSV")->required()->check(CLI::ExistingFile);
    analyze->add_option("--ues", ues, "Number of UEs in the run");
    analyze->add_option("--duration", analyze_duration, "Simulated seconds of the run");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 1;
    }
    if (seed_opt->count() > 0)
        g.seed = seed;

    try
    {
        if (gen->parsed())
            return cmd_gen_tuples(g, synthetic, input, m, b);
        if (lut->parsed())
            return cmd_build_lut(g, carrier, speed_kmh);
        if (fit->parsed())
            return cmd_fit_gain(g, samples);
        if (run->parsed())
            return cmd_run(g, duration, workers);
        if (analyze->parsed())
            return cmd_analyze(g, log_path, ues, analyze_duration);
    }
    catch (const ValidationError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
