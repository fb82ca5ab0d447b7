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
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mmwmob/beamforming.hpp"
#include "mmwmob/channel_stats.hpp"
#include "mmwmob/handover.hpp"
#include "mmwmob/propagation.hpp"
#include "mmwmob/scenario.hpp"

namespace mmwmob::sim {

enum class ChannelKind
{
    Simplified, // tuple library + LUT
    Jakes       // every beam plays Jakes fading with a fixed L
};

enum class GainKind
{
    Single,
    Fitting
};

struct ChannelModel
{
    std::string name = "simplified";
    ChannelKind kind = ChannelKind::Simplified;
    int path_diversity = 0; // Jakes only
    GainKind gain = GainKind::Single;
};

// Parses "simplified", "jakes-<L>", optionally suffixed with ":fitting" or
// ":single" (default single).
ChannelModel parse_channel_model(const std::string &text);
std::string to_string(const ChannelModel &model);

struct CaseConfig
{
    std::string name = "Reference";
    bool fast_fading = false;
    bool measurement_error = false;
    bool l3_filter = false;
    double t_alpha_s = 0.1;
};

// Reference, ME, FF, ME+FF, L3 and ME+FF+L3 with T_alpha 100/50/20/10/5 ms.
std::vector<CaseConfig> standard_cases();
const CaseConfig &find_case(const std::vector<CaseConfig> &cases, const std::string &name);

struct SimParams
{
    double tx_power_dbm = 12.0; // per PRB
    double noise_dbm = -97.0;   // per PRB
    A3Config a3;
    LinkThresholds thresholds;
    double t_ho_s = 0.04;
    double t310_s = 0.6;
    double reestablish_s = 0.2;
    double l1_period_s = 0.04;
    double l1_window_s = 0.2;
    double me_sigma_db = 2.0;
    ShadowingConfig shadowing;
    beam::ElementPattern element;
};

// Immutable inputs shared by concurrent runs.
struct SimResources
{
    std::shared_ptr<const channel::TupleLibrary> library;
    std::shared_ptr<const channel::FadingLut> lut;       // for the simplified model
    std::shared_ptr<const channel::FadingLut> jakes_lut; // for Jakes models
    beam::GainFitModel los_fit = beam::default_gain_model(Condition::Los);
    beam::GainFitModel nlos_fit = beam::default_gain_model(Condition::Nlos);
    std::vector<beam::Beam> beams = beam::default_beam_set();
};

// Jakes LUT for the given diversities, with one coherence time per distinct
// non-zero UE speed of the scenario.
channel::FadingLut build_jakes_lut(const Scenario &scenario, std::vector<int> diversities, std::uint64_t seed);

struct RunConfig
{
    CaseConfig case_config;
    ChannelModel model;
    SimParams params;
    std::uint64_t seed = 1;
};

enum class EventType
{
    A3Report,
    HoCommandFail,
    HoRandomAccessFail,
    HoSuccess,
    T310Start,
    T310Stop,
    Rlf,
    Reestablish,
    OutageEnter,
    OutageExit
};

std::string to_string(EventType type);
EventType parse_event_type(const std::string &text);

struct Event
{
    long tick = 0;
    int ue = 0;
    EventType type = EventType::A3Report;
    std::string detail;
};

struct EventLog
{
    double tick_s = 0.01;
    std::vector<Event> events;
};

// CSV t_s,ue_id,event,detail
void write_event_log(std::ostream &out, const EventLog &log);

struct UeKpi
{
    int n_ho = 0;
    int n_rlf = 0;
    double outage_s = 0.0;
};

struct CellKpi
{
    int ho_in = 0;
    int ho_out = 0;
    int rlf = 0;
};

struct KpiReport
{
    int ues = 0;
    double sim_time_s = 0.0;
    int n_ho = 0;
    int n_rlf = 0;
    int n_a3_reports = 0;
    int n_ho_command_fail = 0;
    int n_ho_access_fail = 0;
    double outage_percent = 0.0;
    double mean_sinr_db = 0.0;
    double mean_interference_dbm = 0.0;
    std::vector<UeKpi> per_ue;
    std::vector<CellKpi> per_cell;

    double ho_per_ue_per_min() const;
    double rlf_per_ue_per_min() const;
};

// TX power + gain - path loss - shadowing, plus the fading multiplier in dB.
double compute_rsrp_dbm(double tx_power_dbm, double gain_db, double path_loss_db, double shadowing_db,
                        double fading_linear = 1.0);

// S / (N + sum of interferers), powers in dBm.
double compute_sinr_db(double signal_dbm, double noise_dbm, std::span<const double> interference_dbm);

// Sum of per-UE outage over U times the simulated time, in percent.
double outage_percent(const std::vector<double> &outage_s, double sim_time_s);

void validate(const SimParams &params, double tick_s);

// Throws ValidationError for inconsistent inputs before anything runs.
void validate_run(const Scenario &scenario, const RunConfig &config, const SimResources &resources);

KpiReport run_simulation(const Scenario &scenario, const RunConfig &config, const SimResources &resources,
                         EventLog *log = nullptr);

// Rebuilds N_HO, N_RLF and outage from an event log.
KpiReport analyze_event_log(std::istream &in, int ues, double sim_time_s);

} // namespace mmwmob::sim
