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

#include "mmwmob/fading.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "mmwmob/csv.hpp"
#include "mmwmob/error.hpp"
#include "mmwmob/random.hpp"

namespace mmwmob::fading {

DopplerParams::DopplerParams(double carrier_frequency_hz, double speed_mps)
    : carrier_hz_(carrier_frequency_hz), speed_mps_(speed_mps), max_doppler_hz_(speed_mps / kSpeedOfLight * carrier_frequency_hz)
{
    require(std::isfinite(carrier_frequency_hz) && carrier_frequency_hz > 0.0, "carrier frequency must be positive");
    require(std::isfinite(speed_mps) && speed_mps >= 0.0, "speed must be non-negative");
}

double doppler_shift(const DopplerParams &params, double arrival_angle_rad)
{
    return params.max_doppler_hz() * std::cos(arrival_angle_rad);
}

namespace {

// Phasors are advanced by complex rotation and re-anchored to the exact phase
// every kResync samples to bound the accumulated rounding drift.
constexpr std::size_t kResync = 1024;

void accumulate_path(std::vector<double> &power, int sinusoids, double max_doppler_hz, double dt, Rng &rng)
{
    const std::size_t k_count = static_cast<std::size_t>(sinusoids);
    std::vector<double> omega(k_count), phase0(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
    {
        const double theta = rng.uniform(-kPi, kPi);
        const double phi = rng.uniform(-kPi, kPi);
        omega[k] = 2.0 * kPi * max_doppler_hz * std::cos(theta);
        phase0[k] = phi;
    }

    std::vector<double> re(k_count), im(k_count), rot_re(k_count), rot_im(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
    {
        rot_re[k] = std::cos(omega[k] * dt);
        rot_im[k] = std::sin(omega[k] * dt);
    }

    double *pr = re.data();
    double *pi = im.data();
    const double *cr = rot_re.data();
    const double *ci = rot_im.data();
    const std::size_t n = power.size();
    for (std::size_t start = 0; start < n; start += kResync)
    {
        const double t0 = static_cast<double>(start) * dt;
        for (std::size_t k = 0; k < k_count; ++k)
        {
            const double ph = omega[k] * t0 + phase0[k];
            re[k] = std::cos(ph);
            im[k] = std::sin(ph);
        }
        const std::size_t end = std::min(n, start + kResync);
        for (std::size_t i = start; i < end; ++i)
        {
            double sr = 0.0, si = 0.0;
#pragma omp simd reduction(+ : sr, si)
            for (std::size_t k = 0; k < k_count; ++k)
            {
                const double a = pr[k];
                const double b = pi[k];
                sr += a;
                si += b;
                pr[k] = a * cr[k] - b * ci[k];
                pi[k] = a * ci[k] + b * cr[k];
            }
            power[i] += sr * sr + si * si;
        }
    }
}

} // namespace

FadingProcess generate_multipath_envelope(const EnvelopeConfig &config)
{
    require(config.path_diversity >= 1, "path diversity L must be >= 1");
    require(config.sinusoids >= 1, "number of sinusoids K must be >= 1");
    require(std::isfinite(config.duration_s) && config.duration_s > 0.0, "duration must be positive");
    require(std::isfinite(config.sample_period_s) && config.sample_period_s > 0.0, "sample period must be positive");
    require(std::isfinite(config.max_doppler_hz) && config.max_doppler_hz >= 0.0, "maximum Doppler must be non-negative");
    require(config.max_doppler_hz == 0.0 || config.sample_period_s < 1.0 / (2.0 * config.max_doppler_hz),
            "sample period violates Nyquist for the Doppler spread");

    const double ratio = config.duration_s / config.sample_period_s;
    require(ratio + 1e-9 >= 2.0, "duration must cover at least two samples");
    const auto n = static_cast<std::size_t>(std::floor(ratio + 1e-9));

    FadingProcess out;
    out.sample_period_s = config.sample_period_s;
    out.params = GenerationParams{config.sinusoids, config.path_diversity, config.max_doppler_hz, config.seed};
    out.samples.assign(n, 0.0);

    Rng rng(config.seed);
    for (int l = 0; l < config.path_diversity; ++l)
        accumulate_path(out.samples, config.sinusoids, config.max_doppler_hz, config.sample_period_s, rng);

    const double norm = 1.0 / (static_cast<double>(config.sinusoids) * config.path_diversity);
    for (double &p : out.samples)
        p *= norm;
    return out;
}

double theoretical_autocorrelation(double max_doppler_hz, double lag_s)
{
    const double j0 = std::cyl_bessel_j(0.0, 2.0 * kPi * max_doppler_hz * lag_s);
    return j0 * j0;
}

double coherence_time_jakes(double max_doppler_hz)
{
    require(std::isfinite(max_doppler_hz) && max_doppler_hz > 0.0, "maximum Doppler must be positive");
    return 9.0 / (16.0 * kPi * max_doppler_hz);
}

double default_sample_period(double max_doppler_hz)
{
    if (max_doppler_hz <= 0.0)
        return 1e-3;
    return std::min(1e-3, 1.0 / (16.0 * max_doppler_hz));
}

namespace {

double autocov_at(const std::vector<double> &x, double mean, std::size_t lag)
{
    const std::size_t n = x.size();
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i)
        acc += (x[i] - mean) * (x[i + lag] - mean);
    return acc / static_cast<double>(n);
}

} // namespace

std::vector<double> empirical_autocorrelation(const FadingProcess &process, std::size_t max_lag)
{
    const auto &x = process.samples;
    require(!x.empty(), "empty envelope");
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(x.size());

    max_lag = std::min(max_lag, x.size() - 1);
    std::vector<double> out(max_lag + 1);
    const double c0 = autocov_at(x, mean, 0);
    require(c0 > 0.0, "constant envelope has no autocorrelation");
    out[0] = 1.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag)
        out[lag] = autocov_at(x, mean, lag) / c0;
    return out;
}

EnvelopeStats estimate_envelope_stats(const FadingProcess &process)
{
    const auto &x = process.samples;
    require(!x.empty(), "empty envelope");
    require(process.sample_period_s > 0.0, "sample period must be positive");

    double mean = 0.0;
    for (double v : x)
    {
        require(std::isfinite(v) && v >= 0.0, "envelope samples must be finite and non-negative");
        mean += v;
    }
    mean /= static_cast<double>(x.size());
    require(mean > 0.0, "envelope has zero mean power");

    double var = 0.0;
    for (double v : x)
    {
        const double d = v / mean - 1.0;
        var += d * d;
    }
    var /= static_cast<double>(x.size());
    require(var > 1e-12, "constant envelope: zero variance leaves path diversity undefined");

    EnvelopeStats stats;
    stats.mean_power = mean;
    stats.variance = var;
    // nearest integer, halves round up
    stats.estimated_path_diversity = std::max(1, static_cast<int>(std::floor(1.0 / var + 0.5)));

    const double c0 = autocov_at(x, mean, 0);
    double prev = 1.0;
    bool found = false;
    const std::size_t max_lag = x.size() / 2;
    for (std::size_t lag = 1; lag <= max_lag; ++lag)
    {
        const double rho = autocov_at(x, mean, lag) / c0;
        if (rho <= 0.5)
        {
            const double frac = (prev - 0.5) / (prev - rho);
            stats.estimated_coherence_time_s = (static_cast<double>(lag - 1) + frac) * process.sample_period_s;
            found = true;
            break;
        }
        prev = rho;
    }
    require(found, "autocorrelation does not fall to 50% within half the record");

    stats.reliable = x.size() >= 1000 && process.duration_s() >= 20.0 * stats.estimated_coherence_time_s;
    return stats;
}

void write_envelope_csv(std::ostream &out, const FadingProcess &process)
{
    out << "t_s,power\n";
    for (std::size_t i = 0; i < process.samples.size(); ++i)
        out << csv::format(static_cast<double>(i) * process.sample_period_s) << ',' << csv::format(process.samples[i]) << '\n';
}

FadingProcess read_envelope_csv(std::istream &in)
{
    std::string line;
    require(csv::next_line(in, line), "envelope CSV is empty");
    require(csv::trim(line) == "t_s,power", "envelope CSV must start with header 't_s,power'");

    std::vector<double> times;
    FadingProcess out;
    std::size_t line_no = 1;
    while (csv::next_line(in, line))
    {
        ++line_no;
        if (csv::trim(line).empty())
            continue;
        auto fields = csv::split(line);
        require(fields.size() == 2, "envelope CSV line " + std::to_string(line_no) + ": expected 2 fields");
        times.push_back(csv::parse_double(fields[0], "t_s"));
        const double p = csv::parse_double(fields[1], "power");
        require(p >= 0.0, "envelope CSV line " + std::to_string(line_no) + ": negative power");
        out.samples.push_back(p);
    }
    require(out.samples.size() >= 2, "envelope CSV needs at least two samples");
    out.sample_period_s = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    require(out.sample_period_s > 0.0, "envelope CSV time column must increase");
    return out;
}

} // namespace mmwmob::fading
