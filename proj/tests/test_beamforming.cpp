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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mmwmob/beamforming.hpp"
#include "mmwmob/error.hpp"
#include "mmwmob/random.hpp"

using namespace mmwmob;
using namespace mmwmob::beam;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Explicit double loop over the panel, written independently of the library.
double brute_force_gain(int rows, int cols, double dv, double dh, Direction steer, Direction ray)
{
    const auto u = [](Direction d) {
        const double t = d.zenith_deg * kPi / 180.0, p = d.azimuth_deg * kPi / 180.0;
        return std::array<double, 3>{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
    };
    const auto rs = u(steer), rr = u(ray);
    cplx sum = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
        {
            const double y = c * dh, z = r * dv;
            const double phase = 2 * kPi * ((rs[1] - rr[1]) * y + (rs[2] - rr[2]) * z);
            sum += std::polar(1.0, phase);
        }
    return std::norm(sum) / (rows * cols);
}

} // namespace

TEST_CASE("beam table angles and panels")
{
    const auto beams = default_beam_set();
    REQUIRE(beams.size() == 12);
    const double az[12] = {-52.5, -37.5, -22.5, -7.5, 7.5, 22.5, 37.5, 52.5, -45, -15, 15, 45};
    for (int b = 0; b < 12; ++b)
    {
        CHECK(beams[b].index == b + 1);
        CHECK(beams[b].steer.azimuth_deg == az[b]);
        CHECK(beams[b].steer.zenith_deg == (b < 8 ? 90.0 : 97.0));
        CHECK(beams[b].geometry.rows() == (b < 8 ? 16 : 8));
        CHECK(beams[b].geometry.cols() == (b < 8 ? 8 : 4));
    }
}

TEST_CASE("boresight gain of a 16x8 panel is 10 log10(128)")
{
    const auto g = ArrayGeometry::planar(16, 8);
    const Direction bore{90.0, 0.0};
    const auto w = steering_weights(g, bore);
    CHECK(10 * std::log10(array_gain_linear(g, w, bore)) == doctest::Approx(10 * std::log10(128.0)).epsilon(1e-12));
    CHECK(10 * std::log10(planar_array_gain_linear(g, bore, bore)) == doctest::Approx(21.07).epsilon(0.0005));
    Beam b{1, bore, g};
    ElementPattern iso;
    iso.isotropic = true;
    CHECK(single_ray_gain(b, bore, iso) == doctest::Approx(21.0721).epsilon(1e-4));
}

TEST_CASE("steering weights are unit modulus phase ramps")
{
    const auto g = ArrayGeometry::planar(2, 3);
    const auto w = steering_weights(g, {90.0, 90.0}); // r = (0, 1, 0)
    REQUIRE(w.size() == 6);
    for (std::size_t s = 0; s < w.size(); ++s)
    {
        CHECK(std::abs(w[s]) == doctest::Approx(1.0));
        const double y = g.positions()[s][1];
        CHECK(w[s].real() == doctest::Approx(std::cos(2 * kPi * y)));
        CHECK(w[s].imag() == doctest::Approx(std::sin(2 * kPi * y)).epsilon(1e-9));
    }
}

TEST_CASE("closed form, generic sum and brute force agree")
{
    Rng rng(12);
    for (const auto &[rows, cols] : {std::pair{16, 8}, std::pair{8, 4}, std::pair{3, 5}})
    {
        const auto g = ArrayGeometry::planar(rows, cols);
        for (int k = 0; k < 50; ++k)
        {
            const Direction steer{rng.uniform(60, 120), rng.uniform(-60, 60)};
            const Direction ray{rng.uniform(0, 180), rng.uniform(-180, 180)};
            const auto w = steering_weights(g, steer);
            const double ref = brute_force_gain(rows, cols, 0.7, 0.5, steer, ray);
            CHECK(array_gain_linear(g, w, ray) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
            CHECK(planar_array_gain_linear(g, steer, ray) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("gain never exceeds the element count")
{
    const auto g = ArrayGeometry::planar(8, 4);
    Rng rng(2);
    for (int k = 0; k < 200; ++k)
    {
        const Direction d{rng.uniform(0, 180), rng.uniform(-180, 180)};
        CHECK(planar_array_gain_linear(g, {97, 15}, d) <= 32.0 + 1e-9);
    }
}

TEST_CASE("arbitrary geometries use the generic path")
{
    const auto g = ArrayGeometry::from_positions({{0, 0, 0}, {0, 0.5, 0}});
    CHECK_FALSE(g.uniform_planar());
    Beam b{1, {90, 0}, g};
    ElementPattern iso;
    iso.isotropic = true;
    CHECK(single_ray_gain(b, {90, 0}, iso) == doctest::Approx(10 * std::log10(2.0)));
    // endfire of a half-wavelength pair steered broadside is a null, floored
    CHECK(single_ray_gain(b, {90, 90}, iso) == doctest::Approx(kNullFloorDb));
    CHECK_THROWS_AS(ArrayGeometry::from_positions({}), ValidationError);
}

TEST_CASE("3GPP element pattern")
{
    ElementPattern p;
    CHECK(element_pattern_3gpp({90, 0}, p) == doctest::Approx(8.0));
    CHECK(element_pattern_3gpp({90, 32.5}, p) == doctest::Approx(5.0));
    CHECK(element_pattern_3gpp({122.5, 0}, p) == doctest::Approx(5.0));
    CHECK(element_pattern_3gpp({90, 180}, p) == doctest::Approx(-22.0));
    p.isotropic = true;
    CHECK(element_pattern_3gpp({90, 180}, p) == 0.0);
}

TEST_CASE("noiseless line is recovered by the fit")
{
    std::vector<GainSample> s;
    for (int k = 0; k < 40; ++k)
    {
        const double g = -30.0 + k;
        s.push_back({Condition::Nlos, g, 0.8 * g - 2.0});
    }
    const auto m = fit_gain_model(s, Condition::Nlos);
    CHECK(m.slope == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(m.intercept_db == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(m.floor_db == 0.0);
    CHECK(fit_gain_model(s, Condition::Los).floor_db == -20.0);
    CHECK(fit_gain_model(s, Condition::Los, -7.0).floor_db == -7.0);
}

TEST_CASE("fit matches a closed-form least squares on noisy data")
{
    Rng rng(4);
    std::vector<GainSample> s;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < 500; ++k)
    {
        const double x = rng.uniform(-40, 30);
        const double y = 0.6 * x - 3 + rng.normal(0, 2);
        s.push_back({Condition::Los, x, y});
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = 500;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const auto m = fit_gain_model(s, Condition::Los);
    CHECK(m.slope == doctest::Approx(slope).epsilon(1e-9));
    CHECK(m.intercept_db == doctest::Approx((sy - slope * sx) / n).epsilon(1e-9));
}

TEST_CASE("degenerate fits are rejected")
{
    std::vector<GainSample> few(5, {Condition::Los, 1.0, 1.0});
    CHECK_THROWS_AS(fit_gain_model(few, Condition::Los), ValidationError);
    std::vector<GainSample> flat(20, {Condition::Los, 3.0, 1.0});
    CHECK_THROWS_AS(fit_gain_model(flat, Condition::Los), ValidationError);
    std::vector<GainSample> narrow;
    for (int k = 0; k < 20; ++k)
        narrow.push_back({Condition::Los, k * 0.1, k * 0.1});
    CHECK_THROWS_AS(fit_gain_model(narrow, Condition::Los), ValidationError);
}

TEST_CASE("gain model clamps at the floor")
{
    const auto los = default_gain_model(Condition::Los);
    CHECK(apply_gain_model(los, 10.0) == 10.0);
    CHECK(apply_gain_model(los, -50.0) == -20.0);
    const auto nlos = default_gain_model(Condition::Nlos);
    CHECK(apply_gain_model(nlos, -40.0) == 0.0);
    CHECK(apply_gain_model(nlos, 25.0) == doctest::Approx(0.6 * 25 - 3));
    // monotone non-decreasing
    double prev = -1e9;
    for (double g = -80; g <= 30; g += 0.5)
    {
        const double v = apply_gain_model(nlos, g);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("beam weights combine element responses")
{
    // two receivers, two elements
    const std::vector<cplx> h{{1, 0}, {0, 1}, {2, 0}, {0, 0}};
    const std::vector<cplx> w{{1, 0}, {0, -1}};
    const auto out = apply_beam_weights(h, 2, w);
    REQUIRE(out.size() == 2);
    CHECK(out[0].real() == doctest::Approx(2 / std::sqrt(2.0)));
    CHECK(out[0].imag() == doctest::Approx(0.0));
    CHECK(out[1].real() == doctest::Approx(2 / std::sqrt(2.0)));
    CHECK_THROWS_AS(apply_beam_weights(h, 3, w), ValidationError);
}

TEST_CASE("gain samples and models round trip")
{
    const std::vector<GainSample> s{{Condition::Los, 1.5, -2.25}, {Condition::Nlos, -30, 0.125}};
    std::stringstream ss;
    write_gain_samples(ss, s);
    const auto back = read_gain_samples(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[1].condition == Condition::Nlos);
    CHECK(back[1].g_multipath_db == 0.125);

    GainFitModel m{Condition::Nlos, 0.61, -2.9, 0.0};
    std::stringstream js;
    write_gain_model(js, m);
    const auto mb = read_gain_model(js);
    CHECK(mb.condition == Condition::Nlos);
    CHECK(mb.slope == 0.61);
    CHECK(mb.intercept_db == -2.9);

    std::stringstream bad("condition,g_single_db,g_multipath_db\nLOS,1\n");
    CHECK_THROWS_AS(read_gain_samples(bad), ValidationError);
    std::stringstream badjson("{\"slope\": 1}");
    CHECK_THROWS_AS(read_gain_model(badjson), ValidationError);
}
