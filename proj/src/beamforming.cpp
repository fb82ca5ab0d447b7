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

#include "mmwmob/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "mmwmob/csv.hpp"
#include "mmwmob/error.hpp"

namespace mmwmob::beam {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

double wrap_deg(double a)
{
    a = std::fmod(a + 180.0, 360.0);
    if (a < 0.0)
        a += 360.0;
    return a - 180.0;
}

// |sum_{n<N} exp(j n x)|^2
double dirichlet_sq(int n, double x)
{
    const double s = std::sin(0.5 * x);
    if (std::abs(s) < 1e-12)
        return static_cast<double>(n) * n;
    const double num = std::sin(0.5 * n * x);
    return (num * num) / (s * s);
}

} // namespace

std::array<double, 3> unit_vector(const Direction &d)
{
    const double t = d.zenith_deg * kDeg;
    const double p = d.azimuth_deg * kDeg;
    return {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
}

ArrayGeometry ArrayGeometry::planar(int rows, int cols, double vertical_spacing, double horizontal_spacing)
{
    require(rows >= 1 && cols >= 1, "panel needs at least one row and one column");
    require(vertical_spacing > 0.0 && horizontal_spacing > 0.0, "element spacing must be positive");
    ArrayGeometry g;
    g.rows_ = rows;
    g.cols_ = cols;
    g.v_spacing_ = vertical_spacing;
    g.h_spacing_ = horizontal_spacing;
    g.planar_ = true;
    g.positions_.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            g.positions_.push_back({0.0, c * horizontal_spacing, r * vertical_spacing});
    return g;
}

ArrayGeometry ArrayGeometry::from_positions(std::vector<std::array<double, 3>> positions)
{
    require(!positions.empty(), "array needs at least one element");
    ArrayGeometry g;
    g.rows_ = static_cast<int>(positions.size());
    g.cols_ = 1;
    g.positions_ = std::move(positions);
    return g;
}

std::vector<Beam> default_beam_set()
{
    std::vector<Beam> beams;
    const auto narrow = ArrayGeometry::planar(16, 8);
    const auto wide = ArrayGeometry::planar(8, 4);
    for (int b = 1; b <= 8; ++b)
        beams.push_back({b, {90.0, -52.5 + 15.0 * (b - 1)}, narrow});
    for (int b = 9; b <= 12; ++b)
        beams.push_back({b, {97.0, -45.0 + 30.0 * (b - 9)}, wide});
    return beams;
}

std::vector<cplx> steering_weights(const ArrayGeometry &geometry, const Direction &steer)
{
    const auto r = unit_vector(steer);
    std::vector<cplx> w;
    w.reserve(geometry.size());
    for (const auto &d : geometry.positions())
        w.push_back(std::polar(1.0, 2.0 * kPi * (r[0] * d[0] + r[1] * d[1] + r[2] * d[2])));
    return w;
}

double array_gain_linear(const ArrayGeometry &geometry, std::span<const cplx> weights, const Direction &ray)
{
    require(weights.size() == geometry.size(), "weight count does not match the array");
    const auto r = unit_vector(ray);
    cplx acc = 0.0;
    for (std::size_t s = 0; s < geometry.size(); ++s)
    {
        const auto &d = geometry.positions()[s];
        acc += weights[s] * std::polar(1.0, -2.0 * kPi * (r[0] * d[0] + r[1] * d[1] + r[2] * d[2]));
    }
    return std::norm(acc) / static_cast<double>(geometry.size());
}

double planar_array_gain_linear(const ArrayGeometry &geometry, const Direction &steer, const Direction &ray)
{
    return planar_array_gain_linear(geometry, unit_vector(steer), unit_vector(ray));
}

double planar_array_gain_linear(const ArrayGeometry &geometry, const std::array<double, 3> &rb,
                                const std::array<double, 3> &rr)
{
    require(geometry.uniform_planar(), "closed-form gain needs a uniform planar panel");
    const double xy = 2.0 * kPi * (rb[1] - rr[1]) * geometry.horizontal_spacing();
    const double xz = 2.0 * kPi * (rb[2] - rr[2]) * geometry.vertical_spacing();
    return dirichlet_sq(geometry.cols(), xy) * dirichlet_sq(geometry.rows(), xz) / static_cast<double>(geometry.size());
}

double element_pattern_3gpp(const Direction &dir, const ElementPattern &p)
{
    if (p.isotropic)
        return 0.0;
    const double dz = dir.zenith_deg - 90.0;
    const double az = wrap_deg(dir.azimuth_deg);
    const double av = std::min(12.0 * (dz / p.vertical_beamwidth_deg) * (dz / p.vertical_beamwidth_deg), p.side_lobe_level_db);
    const double ah = std::min(12.0 * (az / p.horizontal_beamwidth_deg) * (az / p.horizontal_beamwidth_deg), p.side_lobe_level_db);
    return p.max_gain_dbi - std::min(av + ah, p.side_lobe_level_db);
}

double single_ray_gain(const Beam &beam, const Direction &ray, const ElementPattern &element, double null_floor_db)
{
    double lin;
    if (beam.geometry.uniform_planar())
        lin = planar_array_gain_linear(beam.geometry, beam.steer, ray);
    else
    {
        const auto w = steering_weights(beam.geometry, beam.steer);
        lin = array_gain_linear(beam.geometry, w, ray);
    }
    const double af_db = lin > 0.0 ? std::max(10.0 * std::log10(lin), null_floor_db) : null_floor_db;
    return af_db + element_pattern_3gpp(ray, element);
}

GainFitModel default_gain_model(Condition c)
{
    if (c == Condition::Los)
        return {Condition::Los, 1.0, 0.0, -20.0};
    return {Condition::Nlos, 0.6, -3.0, 0.0};
}

GainFitModel fit_gain_model(std::span<const GainSample> samples, Condition condition, std::optional<double> floor_db)
{
    require(samples.size() >= 10, "gain fit needs at least 10 samples, got " + std::to_string(samples.size()));
    double lo = samples.front().g_single_db, hi = lo;
    double mx = 0.0, my = 0.0;
    for (const auto &s : samples)
    {
        require(std::isfinite(s.g_single_db) && std::isfinite(s.g_multipath_db), "gain samples must be finite");
        lo = std::min(lo, s.g_single_db);
        hi = std::max(hi, s.g_single_db);
        mx += s.g_single_db;
        my += s.g_multipath_db;
    }
    const double n = static_cast<double>(samples.size());
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto &s : samples)
    {
        sxx += (s.g_single_db - mx) * (s.g_single_db - mx);
        sxy += (s.g_single_db - mx) * (s.g_multipath_db - my);
    }
    require(sxx > 0.0, "degenerate gain samples: g_single has zero variance");
    require(hi - lo >= 10.0, "gain samples must span at least 10 dB of g_single");

    GainFitModel m;
    m.condition = condition;
    m.slope = sxy / sxx;
    m.intercept_db = my - m.slope * mx;
    m.floor_db = floor_db.value_or(default_gain_model(condition).floor_db);
    return m;
}

std::vector<cplx> apply_beam_weights(std::span<const cplx> responses, std::size_t receivers, std::span<const cplx> weights)
{
    const std::size_t s_count = weights.size();
    require(s_count > 0, "no beam weights");
    require(responses.size() == receivers * s_count, "response matrix is not receivers x elements");
    const double norm = 1.0 / std::sqrt(static_cast<double>(s_count));
    std::vector<cplx> out(receivers);
    for (std::size_t u = 0; u < receivers; ++u)
    {
        cplx acc = 0.0;
        for (std::size_t s = 0; s < s_count; ++s)
            acc += weights[s] * responses[u * s_count + s];
        out[u] = acc * norm;
    }
    return out;
}

std::vector<GainSample> read_gain_samples(std::istream &in)
{
    std::string line;
    require(csv::next_line(in, line), "gain-sample file is empty");
    require(csv::trim(line) == "condition,g_single_db,g_multipath_db",
            "gain-sample header must be 'condition,g_single_db,g_multipath_db'");
    std::vector<GainSample> out;
    std::size_t line_no = 1;
    while (csv::next_line(in, line))
    {
        ++line_no;
        if (csv::trim(line).empty())
            continue;
        auto f = csv::split(line);
        require(f.size() == 3, "gain-sample line " + std::to_string(line_no) + ": expected 3 fields");
        out.push_back({channel::parse_condition(f[0]), csv::parse_double(f[1], "g_single_db"),
                       csv::parse_double(f[2], "g_multipath_db")});
    }
    return out;
}

void write_gain_samples(std::ostream &out, std::span<const GainSample> samples)
{
    out << "condition,g_single_db,g_multipath_db\n";
    for (const auto &s : samples)
        out << channel::to_string(s.condition) << ',' << csv::format(s.g_single_db) << ',' << csv::format(s.g_multipath_db)
            << '\n';
}

void write_gain_model(std::ostream &out, const GainFitModel &model)
{
    nlohmann::ordered_json j;
    j["condition"] = channel::to_string(model.condition);
    j["slope"] = model.slope;
    j["intercept_db"] = model.intercept_db;
    j["floor_db"] = model.floor_db;
    out << j.dump(2) << '\n';
}

GainFitModel read_gain_model(std::istream &in)
{
    try
    {
        const auto j = nlohmann::json::parse(in);
        GainFitModel m;
        m.condition = channel::parse_condition(j.at("condition").get<std::string>());
        m.slope = j.at("slope").get<double>();
        m.intercept_db = j.at("intercept_db").get<double>();
        m.floor_db = j.at("floor_db").get<double>();
        require(std::isfinite(m.slope) && std::isfinite(m.intercept_db) && std::isfinite(m.floor_db),
                "gain model values must be finite");
        return m;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(std::string("malformed gain model: ") + e.what());
    }
}

} // namespace mmwmob::beam
