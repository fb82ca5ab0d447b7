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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mmwmob/fading.hpp"
#include "mmwmob/random.hpp"

// Per-beam coherence-time / path-diversity tuples, the pre-generated fading
// look-up table, and per-link selection and playback of LUT envelopes.
namespace mmwmob::channel {

enum class Condition
{
    Los,
    Nlos
};

std::string to_string(Condition c);
Condition parse_condition(std::string_view s);

struct TupleRow
{
    double coherence_time_s = 0.0;
    int path_diversity = 1;
    double mean_beam_power_db = 0.0;
};

// One pre-processed channel realization: B rows sorted by mean beam power,
// strongest first.
struct ChannelTuple
{
    Condition condition = Condition::Nlos;
    long long id = 0;
    std::vector<TupleRow> rows;
};

enum class Provenance
{
    Ingested,
    Synthetic
};

struct TupleLibrary
{
    double ref_carrier_hz = 0.0;
    double ref_speed_mps = 0.0;
    int beams = 0; // B
    std::vector<ChannelTuple> los;
    std::vector<ChannelTuple> nlos;
    Provenance provenance = Provenance::Ingested;

    const std::vector<ChannelTuple> &tuples(Condition c) const { return c == Condition::Los ? los : nlos; }
};

// Checks every library invariant; throws ValidationError on the first violation.
void validate(const TupleLibrary &library);

// Tuple CSV: a "# ref_carrier_hz=..., ref_speed_mps=..., B=..." comment line,
// the header "condition,tuple_id,beam_rank,mean_power_db,coherence_time_s,path_diversity"
// and one line per beam row. Rows are re-sorted by mean power on ingest.
TupleLibrary ingest_tuples(std::istream &in);
void export_tuples(std::ostream &out, const TupleLibrary &library);

// Rank-dependent path diversity: L is drawn from a discretized log-normal whose
// mode moves linearly from `strongest_mode` (rank 1) to `weakest_mode` (rank B).
struct DiversityDistribution
{
    double strongest_mode = 6.0;
    double weakest_mode = 20.0;
    double log_sigma = 0.35;
};

struct SynthesisParams
{
    double ref_carrier_hz = 28e9;
    double ref_speed_mps = 1.0 / 3.6;
    // Coherence time: log-normal with median tc_median_factor x the Jakes value
    // at the reference Doppler, redrawn while below tc_floor_factor x that value.
    double tc_median_factor = 4.0;
    double tc_log_sigma = 0.6;
    double tc_floor_factor = 1.0;
    DiversityDistribution nlos_diversity{6.0, 20.0, 0.35};
    DiversityDistribution los_diversity{12.0, 24.0, 0.35};
    // Mean beam power of rank r before sorting: -power_step_db (r - 1) + N(0, power_jitter_db).
    double power_step_db = 3.0;
    double power_jitter_db = 1.5;
};

void validate(const SynthesisParams &params);

TupleLibrary synthesize_tuple_library(int tuples_per_condition, int beams, std::uint64_t seed,
                                      const SynthesisParams &params = {});

// Tc' = Tc (f_c v) / (f_c' v').
double scale_coherence_time(double tc_s, double ref_carrier_hz, double ref_speed_mps, double new_carrier_hz,
                            double new_speed_mps);

struct LutConfig
{
    std::vector<int> diversity_grid;
    std::vector<double> coherence_grid; // seconds
    double duration_s = 0.0;
    double sample_period_s = 0.0;
    std::uint64_t seed = 0;
    int sinusoids = 512;
};

// Default grids: L in {1,2,4,8,16,32}; ten coherence times on a geometric
// ladder over [0.5, 16] x the Jakes value at the fastest UE; sample period
// 1/(16 f_max) of the shortest coherence time; 32767 samples per envelope.
LutConfig default_lut_config(double carrier_hz, double fastest_speed_mps, std::uint64_t seed);

class FadingLut
{
public:
    FadingLut(std::vector<int> diversity_grid, std::vector<double> coherence_grid,
              std::vector<fading::FadingProcess> envelopes, std::uint64_t seed);

    const std::vector<int> &diversity_grid() const { return diversity_grid_; }
    const std::vector<double> &coherence_grid() const { return coherence_grid_; }
    const fading::FadingProcess &envelope(std::size_t i, std::size_t j) const;
    double sample_period_s() const { return envelopes_.front().sample_period_s; }
    std::size_t envelope_length() const { return envelopes_.front().size(); }
    double duration_s() const { return envelopes_.front().duration_s(); }
    std::uint64_t seed() const { return seed_; }
    int sinusoids() const;

private:
    std::vector<int> diversity_grid_;
    std::vector<double> coherence_grid_;
    std::vector<fading::FadingProcess> envelopes_; // row-major I x J
    std::uint64_t seed_;
};

// Maximum Doppler that gives the requested 50% coherence time.
double max_doppler_for_coherence_time(double tc_s);

FadingLut build_fading_lut(const LutConfig &config);

// Directory of cell_<i>_<j>.csv envelopes plus manifest.json.
void save_lut(const FadingLut &lut, const std::filesystem::path &dir);
FadingLut load_lut(const std::filesystem::path &dir);

struct GridChoice
{
    std::size_t index = 0;
    bool fallback = false; // no grid value strictly below the target
};

// Largest grid value strictly below `target`; grid minimum with the fallback
// flag set when none exists. Grid must be ascending.
GridChoice select_nearest_smaller(std::span<const double> grid, double target);
GridChoice select_nearest_smaller(std::span<const int> grid, int target);

struct BeamChannel
{
    std::size_t diversity_index = 0;
    std::size_t coherence_index = 0;
    std::size_t playback_offset = 0;
    bool fallback = false;
};

struct LinkChannelAssignment
{
    std::size_t link_id = 0;
    std::size_t los_tuple_index = 0;
    std::size_t nlos_tuple_index = 0;
    std::vector<BeamChannel> los_beams; // index = beam rank - 1
    std::vector<BeamChannel> nlos_beams;

    const std::vector<BeamChannel> &beams(Condition c) const { return c == Condition::Los ? los_beams : nlos_beams; }
    bool any_fallback() const;
};

// Draws one LOS and one NLOS tuple uniformly, scales each row's coherence time
// to the simulated carrier and speed, and picks the nearest-smaller LUT cell
// and a random playback offset per beam rank.
LinkChannelAssignment assign_link_channel(const TupleLibrary &library, const FadingLut &lut, std::size_t link_id,
                                          Rng &rng, double sim_carrier_hz, double ue_speed_mps);

// Plain Jakes assignment: every beam rank plays the LUT cell with diversity
// exactly L and the coherence time closest to `coherence_time_s`.
LinkChannelAssignment assign_jakes_channel(const FadingLut &lut, std::size_t link_id, Rng &rng, int path_diversity,
                                           double coherence_time_s, int beams);

// Unit-mean linear power multiplier for beam rank (1-based) at time t.
double sample_fading(const LinkChannelAssignment &assignment, const FadingLut &lut, int beam_rank,
                     Condition condition, double t_s);

} // namespace mmwmob::channel
