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

#include "mmwmob/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mmwmob/csv.hpp"
#include "mmwmob/error.hpp"
#include "mmwmob/random.hpp"

namespace mmwmob::sim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kStreamLut = 0x4c5554;
constexpr std::uint64_t kStreamJakes = 0x4a414b;
constexpr std::uint64_t kStreamTuples = 0x545550;

void check_keys(const json &j, const std::set<std::string> &allowed, const std::string &where)
{
    require(j.is_object(), where + " must be a JSON object");
    for (const auto &[k, v] : j.items())
        require(allowed.count(k) == 1, "unknown key '" + k + "' in " + where);
}

fs::path resolve(const fs::path &base, const std::string &p)
{
    const fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

CaseConfig parse_case(const json &j)
{
    if (j.is_string())
        return find_case(standard_cases(), j.get<std::string>());
    check_keys(j, {"name", "ff", "me", "l3", "t_alpha_ms"}, "case definition");
    CaseConfig c;
    c.name = j.at("name").get<std::string>();
    c.fast_fading = j.value("ff", false);
    c.measurement_error = j.value("me", false);
    c.l3_filter = j.value("l3", false);
    c.t_alpha_s = j.value("t_alpha_ms", 100.0) * 1e-3;
    return c;
}

void parse_params(const json &j, SimParams &p)
{
    check_keys(j,
               {"tx_power_dbm", "noise_dbm", "a3_offset_db", "time_to_trigger_s", "gamma_out_db", "gamma_in_db",
                "t_ho_s", "t310_s", "reestablish_s", "l1_period_s", "l1_window_s", "me_sigma_db", "shadowing",
                "element_pattern"},
               "params");
    p.tx_power_dbm = j.value("tx_power_dbm", p.tx_power_dbm);
    p.noise_dbm = j.value("noise_dbm", p.noise_dbm);
    p.a3.offset_db = j.value("a3_offset_db", p.a3.offset_db);
    p.a3.time_to_trigger_s = j.value("time_to_trigger_s", p.a3.time_to_trigger_s);
    p.thresholds.gamma_out_db = j.value("gamma_out_db", p.thresholds.gamma_out_db);
    p.thresholds.gamma_in_db = j.value("gamma_in_db", p.thresholds.gamma_in_db);
    p.t_ho_s = j.value("t_ho_s", p.t_ho_s);
    p.t310_s = j.value("t310_s", p.t310_s);
    p.reestablish_s = j.value("reestablish_s", p.reestablish_s);
    p.l1_period_s = j.value("l1_period_s", p.l1_period_s);
    p.l1_window_s = j.value("l1_window_s", p.l1_window_s);
    p.me_sigma_db = j.value("me_sigma_db", p.me_sigma_db);
    if (j.contains("shadowing"))
    {
        const auto &s = j.at("shadowing");
        check_keys(s, {"enabled", "sigma_los_db", "sigma_nlos_db", "decorrelation_los_m", "decorrelation_nlos_m"},
                   "params.shadowing");
        p.shadowing.enabled = s.value("enabled", p.shadowing.enabled);
        p.shadowing.sigma_los_db = s.value("sigma_los_db", p.shadowing.sigma_los_db);
        p.shadowing.sigma_nlos_db = s.value("sigma_nlos_db", p.shadowing.sigma_nlos_db);
        p.shadowing.decorrelation_los_m = s.value("decorrelation_los_m", p.shadowing.decorrelation_los_m);
        p.shadowing.decorrelation_nlos_m = s.value("decorrelation_nlos_m", p.shadowing.decorrelation_nlos_m);
    }
    if (j.contains("element_pattern"))
    {
        const auto e = j.at("element_pattern").get<std::string>();
        require(e == "3gpp" || e == "isotropic", "element_pattern must be '3gpp' or 'isotropic'");
        p.element.isotropic = e == "isotropic";
    }
}

std::string sanitize(std::string s)
{
    for (auto &ch : s)
        if (ch == ' ' || ch == ':' || ch == '/' || ch == '\\')
            ch = '_';
    return s;
}

void write_atomically(const fs::path &path, const std::string &content)
{
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + tmp.string());
        f << content;
        if (!f)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

double mean_of(const std::vector<double> &v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double> &v)
{
    if (v.size() < 2)
        return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

} // namespace

CampaignConfig parse_campaign(const std::string &json_text, const fs::path &base_dir)
{
    json j;
    try
    {
        j = json::parse(json_text, nullptr, true, true);
    }
    catch (const json::exception &e)
    {
        throw ValidationError(std::string("malformed campaign JSON: ") + e.what());
    }
    try
    {
        check_keys(j,
                   {"scenario", "duration_s", "cases", "models", "seeds", "params", "tuples", "lut", "gain_models",
                    "tuples_per_condition", "resource_seed", "workers", "event_logs"},
                   "campaign");
        CampaignConfig c;
        if (j.contains("scenario"))
        {
            const auto &s = j.at("scenario");
            if (s.is_object())
            {
                std::istringstream in(s.dump());
                c.scenario = load_scenario(in);
            }
            else
            {
                const auto name = s.get<std::string>();
                if (name == "desk")
                    c.scenario = desk_scenario();
                else if (name == "full")
                    c.scenario = full_scenario();
                else
                    c.scenario = load_scenario_file(resolve(base_dir, name));
            }
        }
        if (j.contains("duration_s"))
            c.scenario.sim.duration_s = j.at("duration_s").get<double>();
        if (j.contains("cases"))
            for (const auto &cj : j.at("cases"))
                c.cases.push_back(parse_case(cj));
        else
            c.cases = standard_cases();
        if (j.contains("models"))
            for (const auto &m : j.at("models"))
                c.models.push_back(parse_channel_model(m.get<std::string>()));
        else
            c.models = {parse_channel_model("simplified")};
        if (j.contains("seeds"))
            c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        else
            c.seeds = {c.scenario.sim.seed};
        if (j.contains("params"))
            parse_params(j.at("params"), c.params);
        if (j.contains("tuples"))
            c.tuples_file = resolve(base_dir, j.at("tuples").get<std::string>());
        if (j.contains("lut"))
            c.lut_dir = resolve(base_dir, j.at("lut").get<std::string>());
        if (j.contains("gain_models"))
        {
            const auto &g = j.at("gain_models");
            check_keys(g, {"los", "nlos"}, "gain_models");
            if (g.contains("los"))
                c.los_gain_file = resolve(base_dir, g.at("los").get<std::string>());
            if (g.contains("nlos"))
                c.nlos_gain_file = resolve(base_dir, g.at("nlos").get<std::string>());
        }
        c.tuples_per_condition = j.value("tuples_per_condition", c.tuples_per_condition);
        c.resource_seed = j.value("resource_seed", c.resource_seed);
        c.workers = j.value("workers", c.workers);
        c.event_logs = j.value("event_logs", c.event_logs);
        validate(c);
        return c;
    }
    catch (const json::exception &e)
    {
        throw ValidationError(std::string("invalid campaign: ") + e.what());
    }
}

CampaignConfig load_campaign(const fs::path &path)
{
    std::ifstream f(path);
    require(static_cast<bool>(f), "cannot open campaign file " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_campaign(ss.str(), path.parent_path());
}

void validate(const CampaignConfig &c)
{
    validate(c.scenario);
    validate(c.params, c.scenario.sim.tick_s);
    require(!c.cases.empty(), "campaign needs at least one case");
    require(!c.models.empty(), "campaign needs at least one channel model");
    require(!c.seeds.empty(), "campaign needs at least one seed");
    std::set<std::string> names;
    for (const auto &k : c.cases)
        require(names.insert(k.name).second, "duplicate case name '" + k.name + "'");
    std::set<std::string> models;
    for (const auto &m : c.models)
    {
        require(models.insert(m.name).second, "duplicate channel model '" + m.name + "'");
        if (m.kind == ChannelKind::Jakes)
            require(m.path_diversity >= 1, "jakes(L) requires L >= 1");
    }
    require(std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() == c.seeds.size(), "duplicate seeds");
    require(c.tuples_per_condition >= 1, "tuples_per_condition must be at least 1");
    require(c.workers >= 0, "workers must be non-negative");
    for (const auto &p : {c.tuples_file, c.los_gain_file, c.nlos_gain_file})
        if (p)
            require(fs::is_regular_file(*p), "file not found: " + p->string());
    if (c.lut_dir)
        require(fs::is_regular_file(*c.lut_dir / "manifest.json"), "LUT manifest not found in " + c.lut_dir->string());
}

SimResources prepare_resources(const CampaignConfig &c)
{
    SimResources r;
    const bool simplified = std::any_of(c.models.begin(), c.models.end(),
                                        [](const ChannelModel &m) { return m.kind == ChannelKind::Simplified; });
    std::vector<int> jakes;
    for (const auto &m : c.models)
        if (m.kind == ChannelKind::Jakes)
            jakes.push_back(m.path_diversity);

    if (simplified)
    {
        if (c.tuples_file)
        {
            std::ifstream f(*c.tuples_file);
            r.library = std::make_shared<channel::TupleLibrary>(channel::ingest_tuples(f));
        }
        else
            r.library = std::make_shared<channel::TupleLibrary>(channel::synthesize_tuple_library(
                c.tuples_per_condition, static_cast<int>(r.beams.size()), derive_seed(c.resource_seed, kStreamTuples)));
        if (c.lut_dir)
            r.lut = std::make_shared<channel::FadingLut>(channel::load_lut(*c.lut_dir));
        else
            r.lut = std::make_shared<channel::FadingLut>(channel::build_fading_lut(channel::default_lut_config(
                c.scenario.carrier_hz, c.scenario.fastest_speed_mps(), derive_seed(c.resource_seed, kStreamLut))));
    }
    if (!jakes.empty())
        r.jakes_lut = std::make_shared<channel::FadingLut>(
            build_jakes_lut(c.scenario, jakes, derive_seed(c.resource_seed, kStreamJakes)));
    if (c.los_gain_file)
    {
        std::ifstream f(*c.los_gain_file);
        r.los_fit = beam::read_gain_model(f);
        require(r.los_fit.condition == Condition::Los, "LOS gain model file holds an NLOS model");
    }
    if (c.nlos_gain_file)
    {
        std::ifstream f(*c.nlos_gain_file);
        r.nlos_fit = beam::read_gain_model(f);
        require(r.nlos_fit.condition == Condition::Nlos, "NLOS gain model file holds a LOS model");
    }
    return r;
}

std::string event_log_name(const RunResult &r)
{
    return sanitize(r.case_name) + "__" + sanitize(r.model_name) + "__seed" + std::to_string(r.seed) + ".csv";
}

std::vector<RunResult> run_campaign(const CampaignConfig &c, const SimResources &res,
                                    const std::optional<fs::path> &out_dir, const ProgressFn &progress)
{
    validate(c);
    std::vector<RunConfig> cells;
    std::vector<RunResult> results;
    for (const auto &k : c.cases)
        for (const auto &m : c.models)
            for (auto seed : c.seeds)
            {
                cells.push_back({k, m, c.params, seed});
                results.push_back({k.name, m.name, seed, {}});
            }
    for (const auto &cell : cells)
        validate_run(c.scenario, cell, res);

    const bool logs = out_dir && c.event_logs;
    if (logs)
        fs::create_directories(*out_dir / "events");

    std::size_t workers = c.workers > 0 ? static_cast<std::size_t>(c.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cells.size());

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mtx;
    std::size_t done = 0;
    std::exception_ptr error;

    auto worker = [&]() {
        for (;;)
        {
            const std::size_t k = next.fetch_add(1);
            if (k >= cells.size() || failed.load())
                return;
            auto &r = results[k];
            try
            {
                EventLog log;
                r.kpi = run_simulation(c.scenario, cells[k], res, logs ? &log : nullptr);
                if (logs)
                {
                    std::ostringstream os;
                    write_event_log(os, log);
                    write_atomically(*out_dir / "events" / event_log_name(r), os.str());
                }
                std::lock_guard<std::mutex> lock(mtx);
                ++done;
                if (progress)
                    progress(r, done, cells.size());
            }
            catch (const std::exception &e)
            {
                std::lock_guard<std::mutex> lock(mtx);
                if (!error)
                {
                    const std::string where =
                        "run '" + r.case_name + "' / '" + r.model_name + "' / seed " + std::to_string(r.seed);
                    if (dynamic_cast<const ValidationError *>(&e))
                        error = std::make_exception_ptr(ValidationError(where + ": " + e.what()));
                    else
                        error = std::make_exception_ptr(std::runtime_error(where + ": " + e.what()));
                }
                failed = true;
                return;
            }
        }
    };

    if (workers <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);
    return results;
}

std::vector<KpiAggregate> aggregate(const std::vector<RunResult> &results)
{
    std::vector<KpiAggregate> out;
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto &r : results)
        if (std::find(keys.begin(), keys.end(), std::make_pair(r.case_name, r.model_name)) == keys.end())
            keys.emplace_back(r.case_name, r.model_name);
    for (const auto &[cname, mname] : keys)
    {
        std::vector<double> ho, rlf, outage, ho_rate, rlf_rate;
        for (const auto &r : results)
            if (r.case_name == cname && r.model_name == mname)
            {
                ho.push_back(r.kpi.n_ho);
                rlf.push_back(r.kpi.n_rlf);
                outage.push_back(r.kpi.outage_percent);
                ho_rate.push_back(r.kpi.ho_per_ue_per_min());
                rlf_rate.push_back(r.kpi.rlf_per_ue_per_min());
            }
        KpiAggregate a;
        a.case_name = cname;
        a.model_name = mname;
        a.runs = static_cast<int>(ho.size());
        a.n_ho_mean = mean_of(ho);
        a.n_ho_std = std_of(ho);
        a.n_rlf_mean = mean_of(rlf);
        a.n_rlf_std = std_of(rlf);
        a.outage_mean = mean_of(outage);
        a.outage_std = std_of(outage);
        a.ho_rate_mean = mean_of(ho_rate);
        a.rlf_rate_mean = mean_of(rlf_rate);
        out.push_back(a);
    }
    return out;
}

void write_campaign_outputs(const fs::path &out_dir, const CampaignConfig &c, const std::vector<RunResult> &results)
{
    using csv::format;
    fs::create_directories(out_dir);

    std::ostringstream runs;
    runs << "case,model,seed,n_ho,n_rlf,outage_percent,ho_per_ue_per_min,rlf_per_ue_per_min,n_a3_reports,"
            "n_ho_cmd_fail,n_ho_ra_fail,mean_sinr_db,mean_interference_dbm\n";
    for (const auto &r : results)
        runs << r.case_name << ',' << r.model_name << ',' << r.seed << ',' << r.kpi.n_ho << ',' << r.kpi.n_rlf << ','
             << format(r.kpi.outage_percent) << ',' << format(r.kpi.ho_per_ue_per_min()) << ','
             << format(r.kpi.rlf_per_ue_per_min()) << ',' << r.kpi.n_a3_reports << ',' << r.kpi.n_ho_command_fail
             << ',' << r.kpi.n_ho_access_fail << ',' << format(r.kpi.mean_sinr_db) << ','
             << format(r.kpi.mean_interference_dbm) << '\n';
    write_atomically(out_dir / "kpi_runs.csv", runs.str());

    const auto agg = aggregate(results);
    std::ostringstream sum;
    sum << "case,model,runs,n_ho_mean,n_ho_std,n_rlf_mean,n_rlf_std,outage_percent_mean,outage_percent_std,"
           "ho_per_ue_per_min,rlf_per_ue_per_min\n";
    for (const auto &a : agg)
        sum << a.case_name << ',' << a.model_name << ',' << a.runs << ',' << format(a.n_ho_mean) << ','
            << format(a.n_ho_std) << ',' << format(a.n_rlf_mean) << ',' << format(a.n_rlf_std) << ','
            << format(a.outage_mean) << ',' << format(a.outage_std) << ',' << format(a.ho_rate_mean) << ','
            << format(a.rlf_rate_mean) << '\n';
    write_atomically(out_dir / "kpi_summary.csv", sum.str());

    // one file per KPI: rows are cases, column pairs are channel models
    const auto bars = [&](const std::string &file, auto mean, auto sd) {
        std::ostringstream os;
        os << "case";
        for (const auto &m : c.models)
            os << ',' << m.name << ',' << m.name << "_std";
        os << '\n';
        for (const auto &k : c.cases)
        {
            os << k.name;
            for (const auto &m : c.models)
                for (const auto &a : agg)
                    if (a.case_name == k.name && a.model_name == m.name)
                        os << ',' << format(mean(a)) << ',' << format(sd(a));
            os << '\n';
        }
        write_atomically(out_dir / file, os.str());
    };
    bars("bars_n_ho.csv", [](const KpiAggregate &a) { return a.n_ho_mean; },
         [](const KpiAggregate &a) { return a.n_ho_std; });
    bars("bars_n_rlf.csv", [](const KpiAggregate &a) { return a.n_rlf_mean; },
         [](const KpiAggregate &a) { return a.n_rlf_std; });
    bars("bars_outage.csv", [](const KpiAggregate &a) { return a.outage_mean; },
         [](const KpiAggregate &a) { return a.outage_std; });
}

} // namespace mmwmob::sim
