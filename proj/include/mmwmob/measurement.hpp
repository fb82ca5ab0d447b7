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

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "mmwmob/random.hpp"

namespace mmwmob::sim {

// Zero-mean Gaussian error in dB.
double measurement_error_sample(Rng &rng, double sigma_db);

// Linear-power mean of the window, in dB.
double l1_filter(std::span<const double> window_db);

// First-order IIR in dB. An empty `prev_db` initialises the state.
double l3_filter_update(std::optional<double> prev_db, double q_db, double alpha);

// Forgetting factor whose past-sample weight halves every t_alpha_s.
double alpha_from_time_constant(double t_alpha_s, double l1_period_s);

// Fixed-capacity window of linear power samples.
class PowerWindow
{
  public:
    explicit PowerWindow(std::size_t capacity = 1);

    void push(double linear);
    bool empty() const { return count_ == 0; }
    std::size_t size() const { return count_; }
    double mean_linear() const;
    void clear();

  private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
};

inline double db_to_linear(double db)
{
    return std::pow(10.0, 0.1 * db);
}

inline double linear_to_db(double lin)
{
    return 10.0 * std::log10(lin);
}

} // namespace mmwmob::sim
