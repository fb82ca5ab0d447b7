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

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mmwmob/channel_stats.hpp"

namespace mmwmob::beam {

using channel::Condition;
using cplx = std::complex<double>;

// Direction in the panel frame: zenith angle from +z, azimuth from +x
// (boresight is zenith 90, azimuth 0).
struct Direction
{
    double zenith_deg = 90.0;
    double azimuth_deg = 0.0;
};

// Unit vector (sin t cos p, sin t sin p, cos t).
std::array<double, 3> unit_vector(const Direction &d);

// Element positions in carrier wavelengths. Planar panels lie in the y-z
// plane: columns along y (horizontal), rows along z (vertical).
class ArrayGeometry
{
public:
    static ArrayGeometry planar(int rows, int cols, double vertical_spacing = 0.7, double horizontal_spacing = 0.5);
    static ArrayGeometry from_positions(std::vector<std::array<double, 3>> positions);

    const std::vector<std::array<double, 3>> &positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool uniform_planar() const { return planar_; }
    double vertical_spacing() const { return v_spacing_; }
    double horizontal_spacing() const { return h_spacing_; }

private:
    std::vector<std::array<double, 3>> positions_;
    int rows_ = 0;
    int cols_ = 0;
    double v_spacing_ = 0.0;
    double h_spacing_ = 0.0;
    bool planar_ = false;
};

struct Beam
{
    int index = 1;
    Direction steer;
    ArrayGeometry geometry = ArrayGeometry::planar(1, 1);
};

// The 12-beam grid: beams 1..8 steer horizontally to -52.5 + 15 (b - 1) deg
// at zenith 90 on a 16x8 panel, beams 9..12 to -45 + 30 (b - 9) deg at zenith
// 97 on an 8x4 panel. Spacing 0.7 lambda vertical, 0.5 lambda horizontal.
std::vector<Beam> default_beam_set();

// w_s = exp(j 2 pi r . d_s) for each element.
std::vector<cplx> steering_weights(const ArrayGeometry &geometry, const Direction &steer);

// |sum_s w_s a_s(ray)|^2 / S with a_s = exp(-j 2 pi r_ray . d_s).
double array_gain_linear(const ArrayGeometry &geometry, std::span<const cplx> weights, const Direction &ray);

// Same quantity for a uniform planar panel steered at `steer`, as the product
// of the horizontal and vertical Dirichlet kernels.
double planar_array_gain_linear(const ArrayGeometry &geometry, const Direction &steer, const Direction &ray);
double planar_array_gain_linear(const ArrayGeometry &geometry, const std::array<double, 3> &steer_unit,
                                const std::array<double, 3> &ray_unit);

struct ElementPattern
{
    bool isotropic = false;
    double vertical_beamwidth_deg = 65.0;
    double horizontal_beamwidth_deg = 65.0;
    double side_lobe_level_db = 30.0;
    double max_gain_dbi = 8.0;
};

// Parabolic-in-dB element pattern:
// Gmax - min(12((t - 90)/t3dB)^2 + 12(p/p3dB)^2 clipped, SLA).
double element_pattern_3gpp(const Direction &dir, const ElementPattern &params = {});

inline constexpr double kNullFloorDb = -80.0;

// Beamforming gain toward a single ray, in dB, plus the element gain.
// Array-factor nulls are floored at `null_floor_db`.
double single_ray_gain(const Beam &beam, const Direction &ray, const ElementPattern &element = {},
                       double null_floor_db = kNullFloorDb);

struct GainSample
{
    Condition condition = Condition::Los;
    double g_single_db = 0.0;
    double g_multipath_db = 0.0;
};

struct GainFitModel
{
    Condition condition = Condition::Los;
    double slope = 1.0;
    double intercept_db = 0.0;
    double floor_db = -20.0;
};

// Calibration defaults (not fitted): LOS 1.0 g + 0 floored at -20 dB,
// NLOS 0.6 g - 3 floored at 0 dB.
GainFitModel default_gain_model(Condition c);

// Ordinary least squares of g_multipath on g_single. Needs at least 10 samples
// spanning at least 10 dB; the floor defaults to -20 dB (LOS) / 0 dB (NLOS).
GainFitModel fit_gain_model(std::span<const GainSample> samples, Condition condition,
                            std::optional<double> floor_db = std::nullopt);

inline double apply_gain_model(const GainFitModel &model, double g_single_db)
{
    const double g = model.slope * g_single_db + model.intercept_db;
    return g > model.floor_db ? g : model.floor_db;
}

// h_u = 1/sqrt(S) sum_s w_s h_{u,s} for a row-major U x S response matrix.
std::vector<cplx> apply_beam_weights(std::span<const cplx> responses, std::size_t receivers,
                                     std::span<const cplx> weights);

// CSV "condition,g_single_db,g_multipath_db".
std::vector<GainSample> read_gain_samples(std::istream &in);
void write_gain_samples(std::ostream &out, std::span<const GainSample> samples);

// JSON with condition, slope, intercept_db, floor_db.
void write_gain_model(std::ostream &out, const GainFitModel &model);
GainFitModel read_gain_model(std::istream &in);

} // namespace mmwmob::beam
