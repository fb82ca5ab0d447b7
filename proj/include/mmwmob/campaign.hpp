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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mmwmob/simulator.hpp"

namespace mmwmob::sim {

struct CampaignConfig
{
    Scenario scenario = desk_scenario();
    std::vector<CaseConfig> cases;
    std::vector<ChannelModel> models;
    std::vector<std::uint64_t> seeds;
    SimParams params;

    // Shared resources. Missing files are replaced by synthetic/built ones
    // derived from resource_seed.
    std::optional<std::filesystem::path> tuples_file;
    std::optional<std::filesystem::path> lut_dir;
    std::optional<std::filesystem::path> los_gain_file;
    std::optional<std::filesystem::path> nlos_gain_file;
    int tuples_per_condition = 100;
    std::uint64_t resource_seed = 1;

    int workers = 0; // 0: hardware concurrency
    bool event_logs = true;
};

// Throws ValidationError on unknown keys' values, duplicate case names,
// missing files and so on. Relative paths resolve against `base_dir`.
CampaignConfig parse_campaign(const std::string &json_text, const std::filesystem::path &base_dir = {});
CampaignConfig load_campaign(const std::filesystem::path &path);
void validate(const CampaignConfig &config);

SimResources prepare_resources(const CampaignConfig &config);

struct RunResult
{
    std::string case_name;
    std::string model_name;
    std::uint64_t seed = 0;
    KpiReport kpi;
};

using ProgressFn = std::function<void(const RunResult &, std::size_t done, std::size_t total)>;

// Runs every case x model x seed cell on a bounded worker pool. Results come
// back in cell order (case, then model, then seed) whatever the scheduling.
// With `out_dir` set, each cell's event log is written to out_dir/events.
std::vector<RunResult> run_campaign(const CampaignConfig &config, const SimResources &resources,
                                    const std::optional<std::filesystem::path> &out_dir = std::nullopt,
                                    const ProgressFn &progress = {});

struct KpiAggregate
{
    std::string case_name;
    std::string model_name;
    int runs = 0;
    double n_ho_mean = 0.0, n_ho_std = 0.0;
    double n_rlf_mean = 0.0, n_rlf_std = 0.0;
    double outage_mean = 0.0, outage_std = 0.0;
    double ho_rate_mean = 0.0, rlf_rate_mean = 0.0;
};

// Mean and sample standard deviation over seeds per (case, model).
std::vector<KpiAggregate> aggregate(const std::vector<RunResult> &results);

// kpi_runs.csv, kpi_summary.csv and bars_{n_ho,n_rlf,outage}.csv.
void write_campaign_outputs(const std::filesystem::path &out_dir, const CampaignConfig &config,
                            const std::vector<RunResult> &results);

std::string event_log_name(const RunResult &r);

} // namespace mmwmob::sim
