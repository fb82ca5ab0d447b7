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

#include "mmwmob/measurement.hpp"

#include <cmath>

#include "mmwmob/error.hpp"

namespace mmwmob::sim {

double measurement_error_sample(Rng &rng, double sigma_db)
{
    require(sigma_db >= 0.0, "measurement error sigma must be non-negative");
    if (sigma_db == 0.0)
        return 0.0;
    return sigma_db * rng.normal();
}

double l1_filter(std::span<const double> window_db)
{
    require(!window_db.empty(), "L1 filter window is empty");
    double sum = 0.0;
    for (double v : window_db)
        sum += db_to_linear(v);
    return linear_to_db(sum / static_cast<double>(window_db.size()));
}

double l3_filter_update(std::optional<double> prev_db, double q_db, double alpha)
{
    require(alpha > 0.0 && alpha <= 1.0, "L3 forgetting factor must lie in (0, 1]");
    if (!prev_db)
        return q_db;
    return alpha * q_db + (1.0 - alpha) * *prev_db;
}

double alpha_from_time_constant(double t_alpha_s, double l1_period_s)
{
    require(t_alpha_s > 0.0 && l1_period_s > 0.0, "filter time constant and L1 period must be positive");
    return 1.0 - std::exp2(-l1_period_s / t_alpha_s);
}

PowerWindow::PowerWindow(std::size_t capacity) : buf_(capacity, 0.0)
{
    require(capacity >= 1, "window capacity must be at least one");
}

void PowerWindow::push(double linear)
{
    buf_[head_] = linear;
    head_ = (head_ + 1) % buf_.size();
    if (count_ < buf_.size())
        ++count_;
}

double PowerWindow::mean_linear() const
{
    require(count_ > 0, "L1 filter window is empty");
    double sum = 0.0;
    for (std::size_t k = 0; k < count_; ++k)
        sum += buf_[k];
    return sum / static_cast<double>(count_);
}

void PowerWindow::clear()
{
    head_ = 0;
    count_ = 0;
}

} // namespace mmwmob::sim
