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
#include <iosfwd>
#include <optional>
#include <vector>

// Sum-of-sinusoids (Jakes) fading with configurable path diversity, and
// estimation of mean, variance, path diversity and coherence time from a
// sampled power envelope.
namespace mmwmob::fading {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;

// Carrier frequency and receiver speed; the maximum Doppler shift is
// f_max = v / c * f_c.
class DopplerParams
{
public:
    DopplerParams(double carrier_frequency_hz, double speed_mps);

    double carrier_frequency_hz() const { return carrier_hz_; }
    double speed_mps() const { return speed_mps_; }
    double max_doppler_hz() const { return max_doppler_hz_; }

private:
    double carrier_hz_;
    double speed_mps_;
    double max_doppler_hz_;
};

// Doppler shift of a wave arriving at `arrival_angle_rad` from the direction of motion.
double doppler_shift(const DopplerParams &params, double arrival_angle_rad);

struct GenerationParams
{
    int sinusoids = 0;      // K, per path
    int path_diversity = 0; // L
    double max_doppler_hz = 0.0;
    std::uint64_t seed = 0;
};

// Sampled, unit-mean power envelope.
struct FadingProcess
{
    std::vector<double> samples;
    double sample_period_s = 0.0;
    std::optional<GenerationParams> params; // absent for imported envelopes

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) * sample_period_s; }
};

struct EnvelopeConfig
{
    int path_diversity = 1;
    int sinusoids = 512;
    double max_doppler_hz = 0.0;
    double duration_s = 0.0;
    double sample_period_s = 0.0;
    std::uint64_t seed = 0;
};

// Power envelope of L maximum-ratio-combined Jakes paths, each a sum of K
// sinusoids with arrival angles and phases uniform on [-pi, pi), normalized
// by 1/(K L). Sample count is floor(duration / sample period).
// Throws ValidationError on non-positive sizes, fewer than two samples, or a
// sample period that does not satisfy Nyquist for the Doppler spread.
FadingProcess generate_multipath_envelope(const EnvelopeConfig &config);

// J0^2(2 pi f_max lag): normalized autocovariance of a Jakes power envelope.
double theoretical_autocorrelation(double max_doppler_hz, double lag_s);

// 50% coherence time approximation 9 / (16 pi f_max).
double coherence_time_jakes(double max_doppler_hz);

// Sample period that resolves the autocorrelation main lobe: min(1 ms, 1/(16 f_max)).
double default_sample_period(double max_doppler_hz);

struct EnvelopeStats
{
    double mean_power = 0.0;
    double variance = 0.0; // of the mean-normalized envelope
    int estimated_path_diversity = 1;
    double estimated_coherence_time_s = 0.0;
    // false when the envelope is shorter than 1000 samples or spans fewer
    // than 20 estimated coherence times
    bool reliable = true;
};

// Throws ValidationError for empty or constant envelopes and when the
// autocovariance never drops to 0.5 within half the record.
EnvelopeStats estimate_envelope_stats(const FadingProcess &process);

// Biased autocovariance of the mean-removed envelope normalized by its lag-0
// value, for lags 0..max_lag (in samples).
std::vector<double> empirical_autocorrelation(const FadingProcess &process, std::size_t max_lag);

// CSV with header "t_s,power", one sample per line.
void write_envelope_csv(std::ostream &out, const FadingProcess &process);
FadingProcess read_envelope_csv(std::istream &in);

} // namespace mmwmob::fading
