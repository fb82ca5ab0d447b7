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

#include "mmwmob/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "mmwmob/csv.hpp"
#include "mmwmob/error.hpp"
#include "mmwmob/fading.hpp"
#include "mmwmob/measurement.hpp"
#include "mmwmob/mobility.hpp"

namespace mmwmob::sim {

namespace {

constexpr std::uint64_t kStreamMobility = 1;
constexpr std::uint64_t kStreamShadowing = 2;
constexpr std::uint64_t kStreamFading = 3;
constexpr std::uint64_t kStreamMeasurement = 4;
constexpr std::uint64_t kStreamScheduler = 5;

// Playback needs a finite coherence time; parked UEs use a walking crawl.
constexpr double kMinFadingSpeed = 0.01;

double wrap_deg(double a)
{
    a = std::fmod(a + 180.0, 360.0);
    if (a < 0.0)
        a += 360.0;
    return a - 180.0;
}

long ticks_in(double span_s, double tick_s)
{
    return std::lround(span_s / tick_s);
}

bool is_multiple(double span_s, double tick_s)
{
    const double r = span_s / tick_s;
    return r >= 1.0 - 1e-9 && std::abs(r - std::round(r)) < 1e-6;
}

const std::map<EventType, std::string> &event_names()
{
    static const std::map<EventType, std::string> names = {
        {EventType::A3Report, "A3_REPORT"},       {EventType::HoCommandFail, "HO_CMD_FAIL"},
        {EventType::HoRandomAccessFail, "HO_RA_FAIL"}, {EventType::HoSuccess, "HO_SUCCESS"},
        {EventType::T310Start, "T310_START"},     {EventType::T310Stop, "T310_STOP"},
        {EventType::Rlf, "RLF"},                  {EventType::Reestablish, "REESTABLISH"},
        {EventType::OutageEnter, "OUTAGE_ENTER"}, {EventType::OutageExit, "OUTAGE_EXIT"}};
    return names;
}

std::string pair_detail(const char *a, int x, const char *b, int y)
{
    return std::string(a) + "=" + std::to_string(x) + " " + b + "=" + std::to_string(y);
}

} // namespace

ChannelModel parse_channel_model(const std::string &text)
{
    ChannelModel m;
    std::string base = text;
    const auto colon = text.find(':');
    if (colon != std::string::npos)
    {
        base = text.substr(0, colon);
        const auto gain = text.substr(colon + 1);
        require(gain == "single" || gain == "fitting", "gain model must be 'single' or 'fitting', got '" + gain + "'");
        m.gain = gain == "fitting" ? GainKind::Fitting : GainKind::Single;
    }
    if (base == "simplified")
        m.kind = ChannelKind::Simplified;
    else if (base.rfind("jakes-", 0) == 0)
    {
        m.kind = ChannelKind::Jakes;
        m.path_diversity = csv::parse_int(base.substr(6), "Jakes path diversity");
        require(m.path_diversity >= 1, "Jakes path diversity must be at least 1");
    }
    else
        throw ValidationError("unknown channel model '" + text + "' (expected simplified or jakes-<L>)");
    m.name = to_string(m);
    return m;
}

std::string to_string(const ChannelModel &m)
{
    std::string s = m.kind == ChannelKind::Simplified ? "simplified" : "jakes-" + std::to_string(m.path_diversity);
    return s + (m.gain == GainKind::Fitting ? ":fitting" : ":single");
}

std::vector<CaseConfig> standard_cases()
{
    std::vector<CaseConfig> cases = {{"Reference", false, false, false, 0.1},
                                     {"ME", false, true, false, 0.1},
                                     {"FF", true, false, false, 0.1},
                                     {"ME+FF", true, true, false, 0.1},
                                     {"L3", false, false, true, 0.1}};
    for (int ms : {100, 50, 20, 10, 5})
        cases.push_back({"ME+FF+L3 " + std::to_string(ms) + " ms", true, true, true, ms * 1e-3});
    return cases;
}

const CaseConfig &find_case(const std::vector<CaseConfig> &cases, const std::string &name)
{
    for (const auto &c : cases)
        if (c.name == name)
            return c;
    throw ValidationError("unknown simulation case '" + name + "'");
}

channel::FadingLut build_jakes_lut(const Scenario &scenario, std::vector<int> diversities, std::uint64_t seed)
{
    require(!diversities.empty(), "Jakes LUT needs at least one path diversity");
    std::sort(diversities.begin(), diversities.end());
    diversities.erase(std::unique(diversities.begin(), diversities.end()), diversities.end());
    std::set<double> speeds;
    for (const auto &g : scenario.ue_groups)
        if (g.count > 0)
            speeds.insert(std::max(g.speed_mps, kMinFadingSpeed));
    require(!speeds.empty(), "scenario has no UEs");

    channel::LutConfig cfg;
    cfg.diversity_grid = diversities;
    // fastest speed gives the shortest coherence time; keep ascending order
    for (auto it = speeds.rbegin(); it != speeds.rend(); ++it)
        cfg.coherence_grid.push_back(
            fading::coherence_time_jakes(fading::DopplerParams(scenario.carrier_hz, *it).max_doppler_hz()));
    cfg.sample_period_s = fading::default_sample_period(
        channel::max_doppler_for_coherence_time(cfg.coherence_grid.front()));
    cfg.duration_s = 32767.0 * cfg.sample_period_s;
    cfg.seed = seed;
    return channel::build_fading_lut(cfg);
}

std::string to_string(EventType type)
{
    return event_names().at(type);
}

EventType parse_event_type(const std::string &text)
{
    for (const auto &[k, v] : event_names())
        if (v == text)
            return k;
    throw ValidationError("unknown event type '" + text + "'");
}

void write_event_log(std::ostream &out, const EventLog &log)
{
    out << "t_s,ue_id,event,detail\n";
    for (const auto &e : log.events)
        out << csv::format_fixed(static_cast<double>(e.tick) * log.tick_s, 6) << ',' << e.ue << ','
            << to_string(e.type) << ',' << e.detail << '\n';
}

double KpiReport::ho_per_ue_per_min() const
{
    return ues > 0 && sim_time_s > 0.0 ? n_ho / (ues * sim_time_s / 60.0) : 0.0;
}

double KpiReport::rlf_per_ue_per_min() const
{
    return ues > 0 && sim_time_s > 0.0 ? n_rlf / (ues * sim_time_s / 60.0) : 0.0;
}

double compute_rsrp_dbm(double tx_power_dbm, double gain_db, double path_loss_db, double shadowing_db,
                        double fading_linear)
{
    require(fading_linear > 0.0, "fading multiplier must be positive");
    return tx_power_dbm + gain_db - path_loss_db - shadowing_db + linear_to_db(fading_linear);
}

double compute_sinr_db(double signal_dbm, double noise_dbm, std::span<const double> interference_dbm)
{
    double denom = db_to_linear(noise_dbm);
    for (double i : interference_dbm)
        denom += db_to_linear(i);
    return signal_dbm - linear_to_db(denom);
}

double outage_percent(const std::vector<double> &outage_s, double sim_time_s)
{
    require(!outage_s.empty(), "outage needs at least one UE");
    require(sim_time_s > 0.0, "simulated time must be positive");
    const double total = std::accumulate(outage_s.begin(), outage_s.end(), 0.0);
    return 100.0 * total / (static_cast<double>(outage_s.size()) * sim_time_s);
}

void validate(const SimParams &p, double tick)
{
    require(is_multiple(p.l1_period_s, tick), "L1 period must be a positive multiple of the tick");
    require(is_multiple(p.l1_window_s, tick), "L1 window must be a positive multiple of the tick");
    require(p.thresholds.gamma_in_db > p.thresholds.gamma_out_db, "gamma_in must exceed gamma_out");
    require(p.t310_s > 0.0, "T310 must be positive");
    require(p.t_ho_s >= 0.0 && p.reestablish_s >= 0.0, "handover and re-establishment times must be non-negative");
    require(p.a3.time_to_trigger_s >= 0.0, "time to trigger must be non-negative");
    require(p.me_sigma_db >= 0.0, "measurement error sigma must be non-negative");
    require(p.shadowing.sigma_los_db >= 0.0 && p.shadowing.sigma_nlos_db >= 0.0, "shadowing sigma must be non-negative");
    require(p.shadowing.decorrelation_los_m > 0.0 && p.shadowing.decorrelation_nlos_m > 0.0,
            "shadowing decorrelation distance must be positive");
}

void validate_run(const Scenario &scenario, const RunConfig &config, const SimResources &res)
{
    validate(scenario);
    validate(config.params, scenario.sim.tick_s);
    if (config.case_config.l3_filter)
        require(config.case_config.t_alpha_s > 0.0, "L3 filter time constant must be positive");
    require(!res.beams.empty(), "beam set is empty");
    if (!config.case_config.fast_fading)
        return;
    if (config.model.kind == ChannelKind::Simplified)
    {
        require(res.library != nullptr && res.lut != nullptr, "simplified model needs a tuple library and a LUT");
        require(res.library->beams == static_cast<int>(res.beams.size()),
                "tuple library has " + std::to_string(res.library->beams) + " beams but the beam set has " +
                    std::to_string(res.beams.size()));
    }
    else
    {
        require(res.jakes_lut != nullptr, "Jakes model needs a Jakes LUT");
        const auto &div = res.jakes_lut->diversity_grid();
        require(std::find(div.begin(), div.end(), config.model.path_diversity) != div.end(),
                "Jakes LUT has no envelope with L=" + std::to_string(config.model.path_diversity));
    }
}

namespace {

struct UeState
{
    UeMotion motion;
    double moved_m = 0.0;
    int serving = -1;
    int serving_beam = 0;
    std::optional<PendingHandover> pending;
    RlfTracker rlf;
    A3Tracker a3;
    std::optional<double> reestablish_elapsed;
    bool in_outage = false;
    UeKpi kpi;
    Rng me_rng;
};

class Simulation
{
  public:
    Simulation(const Scenario &scenario, const RunConfig &config, const SimResources &res, EventLog *log)
        : sc_(scenario), cfg_(config), p_(config.params), res_(res), log_(log), cells_(scenario.cells()),
          buildings_(scenario.buildings()), U_(static_cast<std::size_t>(scenario.total_ues())),
          C_(cells_.size()), S_(scenario.sites.size()), B_(res.beams.size()), tick_(scenario.sim.tick_s)
    {
        n_ticks_ = static_cast<long>(std::floor(scenario.sim.duration_s / tick_ + 1e-9));
        l1_ticks_ = ticks_in(p_.l1_period_s, tick_);
        alpha_ = cfg_.case_config.l3_filter ? alpha_from_time_constant(cfg_.case_config.t_alpha_s, p_.l1_period_s)
                                            : 1.0;
        const auto window = static_cast<std::size_t>(ticks_in(p_.l1_window_s, tick_));
        lut_ = cfg_.model.kind == ChannelKind::Simplified ? res.lut.get() : res.jakes_lut.get();

        std::size_t u = 0;
        for (const auto &g : sc_.ue_groups)
            for (int k = 0; k < g.count; ++k, ++u)
            {
                const auto mseed = derive_seed(cfg_.seed, kStreamMobility, u);
                auto motion = g.pattern == MobilityPattern::Street
                                  ? UeMotion::street(sc_.grid, g.speed_mps, mseed)
                                  : UeMotion::waypoint(block_rect(g.area), g.speed_mps, mseed);
                ues_.push_back({std::move(motion), 0.0, -1, 0, std::nullopt, RlfTracker{}, A3Tracker(C_),
                                std::nullopt, false, UeKpi{}, Rng(derive_seed(cfg_.seed, kStreamMeasurement, u))});
            }

        for (std::size_t i = 0; i < U_; ++i)
            for (std::size_t s = 0; s < S_; ++s)
                shadow_.emplace_back(derive_seed(cfg_.seed, kStreamShadowing, i, s));

        for (std::size_t i = 0; i < U_ && cfg_.case_config.fast_fading; ++i)
        {
            const double v = std::max(ues_[i].motion.speed_mps(), kMinFadingSpeed);
            for (std::size_t c = 0; c < C_; ++c)
            {
                Rng rng(derive_seed(cfg_.seed, kStreamFading, i, c));
                const auto link = i * C_ + c;
                if (cfg_.model.kind == ChannelKind::Simplified)
                    links_.push_back(channel::assign_link_channel(*res.library, *lut_, link, rng, sc_.carrier_hz, v));
                else
                {
                    const double tc =
                        fading::coherence_time_jakes(fading::DopplerParams(sc_.carrier_hz, v).max_doppler_hz());
                    links_.push_back(channel::assign_jakes_channel(*lut_, link, rng, cfg_.model.path_diversity, tc,
                                                                   static_cast<int>(B_)));
                }
            }
        }
        for (std::size_t c = 0; c < C_; ++c)
            sched_rng_.emplace_back(derive_seed(cfg_.seed, kStreamScheduler, c));

        power_.assign(U_ * C_ * B_, 0.0);
        windows_.assign(U_ * C_ * B_, PowerWindow(window));
        best_beam_.assign(U_ * C_, 0);
        l3_.assign(U_ * C_, std::numeric_limits<double>::quiet_NaN());
        active_beam_.assign(C_, 0);
        cell_ho_.assign(C_, CellKpi{});
        gain_.resize(B_);
        order_.resize(B_);
        for (const auto &bm : res.beams)
            steer_unit_.push_back(beam::unit_vector(bm.steer));
    }

    KpiReport run()
    {
        for (long n = 0; n < n_ticks_; ++n)
        {
            const double t = static_cast<double>(n) * tick_;
            measure_links(t);
            if (n % l1_ticks_ == 0)
                l1_output();
            if (n == 0)
                for (auto &ue : ues_)
                    attach_strongest(ue, static_cast<std::size_t>(&ue - ues_.data()));
            draw_active_beams();
            for (std::size_t i = 0; i < U_; ++i)
                step_ue(i, n);
            for (auto &ue : ues_)
                ue.moved_m = ue.motion.step(tick_);
        }
        return finish();
    }

  private:
    Rect block_rect(const std::string &area) const
    {
        const auto &a = sc_.area(area);
        return sc_.grid.block(a.block_i, a.block_j);
    }

    double p(std::size_t i, std::size_t c, std::size_t b) const { return power_[(i * C_ + c) * B_ + b]; }

    void log(long n, std::size_t ue, EventType type, std::string detail = {})
    {
        if (log_)
            log_->events.push_back({n, static_cast<int>(ue), type, std::move(detail)});
    }

    // True received power of every beam of every cell, and the L1 input samples.
    void measure_links(double t)
    {
        const bool fitting = cfg_.model.gain == GainKind::Fitting;
        for (std::size_t i = 0; i < U_; ++i)
        {
            auto &ue = ues_[i];
            const Point pos = ue.motion.position();
            for (std::size_t s = 0; s < S_; ++s)
            {
                const auto &site = sc_.sites[s];
                const double dx = pos.x - site.position.x, dy = pos.y - site.position.y;
                const double d2 = std::hypot(dx, dy);
                const auto cond =
                    line_of_sight(site.position, pos, buildings_) ? Condition::Los : Condition::Nlos;
                const double pl = pathloss_.path_loss_db({d2, site.height_m, sc_.ue_height_m, sc_.carrier_hz}, cond);
                const double sf = shadow_[i * S_ + s].advance(ue.moved_m, cond, p_.shadowing);
                const double az = std::atan2(dy, dx) * 180.0 / fading::kPi;
                const double zen = 90.0 + std::atan2(site.height_m - sc_.ue_height_m, d2) * 180.0 / fading::kPi;
                const auto &fit = cond == Condition::Los ? res_.los_fit : res_.nlos_fit;

                for (std::size_t c = 0; c < C_; ++c)
                {
                    if (cells_[c].site != static_cast<int>(s))
                        continue;
                    const beam::Direction ray{zen, wrap_deg(az - cells_[c].azimuth_deg)};
                    const auto ray_unit = beam::unit_vector(ray);
                    const double element_db = beam::element_pattern_3gpp(ray, p_.element);
                    for (std::size_t b = 0; b < B_; ++b)
                    {
                        const auto &bm = res_.beams[b];
                        if (!bm.geometry.uniform_planar())
                        {
                            gain_[b] = beam::single_ray_gain(bm, ray, p_.element);
                            continue;
                        }
                        // same value as single_ray_gain with the steering vector hoisted
                        const double lin = beam::planar_array_gain_linear(bm.geometry, steer_unit_[b], ray_unit);
                        const double af_db =
                            lin > 0.0 ? std::max(10.0 * std::log10(lin), beam::kNullFloorDb) : beam::kNullFloorDb;
                        gain_[b] = af_db + element_db;
                    }
                    // stable descending insertion sort; B is small
                    for (std::size_t r = 0; r < B_; ++r)
                    {
                        std::size_t k = r;
                        for (; k > 0 && gain_[order_[k - 1]] < gain_[r]; --k)
                            order_[k] = order_[k - 1];
                        order_[k] = r;
                    }
                    const auto &link = links_[i * C_ + c];
                    for (std::size_t r = 0; r < B_; ++r)
                    {
                        const std::size_t b = order_[r];
                        const double g = fitting ? beam::apply_gain_model(fit, gain_[b]) : gain_[b];
                        double lin = db_to_linear(compute_rsrp_dbm(p_.tx_power_dbm, g, pl, sf));
                        if (cfg_.case_config.fast_fading)
                            lin *= channel::sample_fading(link, *lut_, static_cast<int>(r + 1), cond, t);
                        const auto k = (i * C_ + c) * B_ + b;
                        power_[k] = lin;
                        double meas = lin;
                        if (cfg_.case_config.measurement_error)
                            meas *= db_to_linear(measurement_error_sample(ue.me_rng, p_.me_sigma_db));
                        windows_[k].push(meas);
                    }
                }
            }
        }
    }

    void l1_output()
    {
        for (std::size_t i = 0; i < U_; ++i)
            for (std::size_t c = 0; c < C_; ++c)
            {
                double best = -std::numeric_limits<double>::infinity();
                int best_b = 0;
                for (std::size_t b = 0; b < B_; ++b)
                {
                    const double q = linear_to_db(windows_[(i * C_ + c) * B_ + b].mean_linear());
                    if (q > best)
                        best = q, best_b = static_cast<int>(b);
                }
                const auto k = i * C_ + c;
                best_beam_[k] = best_b;
                const std::optional<double> prev = std::isnan(l3_[k]) ? std::nullopt : std::optional<double>(l3_[k]);
                l3_[k] = l3_filter_update(prev, best, alpha_);
            }
        for (std::size_t i = 0; i < U_; ++i)
            if (ues_[i].serving >= 0)
                ues_[i].serving_beam = best_beam_[i * C_ + static_cast<std::size_t>(ues_[i].serving)];
    }

    void attach_strongest(UeState &ue, std::size_t i)
    {
        double best = -1.0;
        int cell = 0;
        for (std::size_t c = 0; c < C_; ++c)
            for (std::size_t b = 0; b < B_; ++b)
                if (p(i, c, b) > best)
                    best = p(i, c, b), cell = static_cast<int>(c);
        ue.serving = cell;
        ue.serving_beam = best_beam_[i * C_ + static_cast<std::size_t>(cell)];
    }

    // One scheduled beam per cell: a uniformly chosen attached UE's serving
    // beam, or a uniformly random beam when no UE is attached.
    void draw_active_beams()
    {
        attached_.assign(C_, {});
        for (std::size_t i = 0; i < U_; ++i)
            if (ues_[i].serving >= 0 && !ues_[i].reestablish_elapsed)
                attached_[static_cast<std::size_t>(ues_[i].serving)].push_back(static_cast<int>(i));
        for (std::size_t c = 0; c < C_; ++c)
        {
            auto &rng = sched_rng_[c];
            if (attached_[c].empty())
                active_beam_[c] = static_cast<int>(rng.index(B_));
            else
                active_beam_[c] = ues_[static_cast<std::size_t>(attached_[c][rng.index(attached_[c].size())])].serving_beam;
        }
    }

    double sinr_db(std::size_t i, std::size_t cell, std::size_t beam, double *interference = nullptr) const
    {
        double interf = 0.0;
        for (std::size_t c = 0; c < C_; ++c)
            if (c != cell)
                interf += p(i, c, static_cast<std::size_t>(active_beam_[c]));
        if (interference)
            *interference = interf;
        return linear_to_db(p(i, cell, beam) / (noise_mw_ + interf));
    }

    void step_ue(std::size_t i, long n)
    {
        auto &ue = ues_[i];
        bool outage = false;
        if (ue.reestablish_elapsed)
        {
            outage = true;
            *ue.reestablish_elapsed += tick_;
            if (*ue.reestablish_elapsed >= p_.reestablish_s - kTimeEps)
            {
                ue.reestablish_elapsed.reset();
                attach_strongest(ue, i);
                ue.a3.reset();
                ue.rlf.reset();
                log(n, i, EventType::Reestablish, "cell=" + std::to_string(ue.serving));
            }
        }
        else
        {
            const auto s = static_cast<std::size_t>(ue.serving);
            double interf = 0.0;
            const double sinr = sinr_db(i, s, static_cast<std::size_t>(ue.serving_beam), &interf);
            sinr_sum_ += sinr;
            interf_sum_ += interf;
            ++sinr_count_;

            if (ue.pending && ue.pending->phase == HoPhase::RandomAccess)
            {
                outage = true;
                const int target = ue.pending->target;
                const auto tc = static_cast<std::size_t>(target);
                const double st = sinr_db(i, tc, static_cast<std::size_t>(best_beam_[i * C_ + tc]));
                const auto ev = handover_progress(ue.pending, sinr, st, p_.thresholds, p_.t_ho_s, tick_);
                if (ev == HoEvent::Succeeded)
                {
                    log(n, i, EventType::HoSuccess, pair_detail("source", ue.serving, "target", target));
                    ++ue.kpi.n_ho;
                    ++cell_ho_[s].ho_out;
                    ++cell_ho_[tc].ho_in;
                    ue.serving = target;
                    ue.serving_beam = best_beam_[i * C_ + tc];
                    ue.a3.reset();
                    ue.rlf.reset();
                }
                else if (ev == HoEvent::RandomAccessFailed)
                {
                    ++n_access_fail_;
                    log(n, i, EventType::HoRandomAccessFail, pair_detail("serving", ue.serving, "target", target));
                }
            }
            else
            {
                outage = sinr < p_.thresholds.gamma_out_db;
                const auto rlf = ue.rlf.update(sinr, p_.thresholds, p_.t310_s, tick_);
                const auto cell_text = "cell=" + std::to_string(ue.serving);
                if (rlf == RlfEvent::T310Start)
                    log(n, i, EventType::T310Start, cell_text);
                else if (rlf == RlfEvent::T310Stop)
                    log(n, i, EventType::T310Stop, cell_text);
                if (rlf == RlfEvent::Rlf)
                {
                    log(n, i, EventType::Rlf, cell_text);
                    ++ue.kpi.n_rlf;
                    ++cell_ho_[s].rlf;
                    ue.pending.reset();
                    ue.reestablish_elapsed = 0.0;
                }
                else
                {
                    const std::span<const double> l3(l3_.data() + i * C_, C_);
                    if (const auto target = ue.a3.check(l3, ue.serving, p_.a3, tick_))
                    {
                        ++n_reports_;
                        log(n, i, EventType::A3Report, pair_detail("serving", ue.serving, "target", *target));
                        ue.pending = PendingHandover{*target, HoPhase::Command, 0.0};
                        const auto ev = handover_progress(ue.pending, sinr, 0.0, p_.thresholds, p_.t_ho_s, tick_);
                        if (ev == HoEvent::CommandFailed)
                        {
                            ++n_command_fail_;
                            log(n, i, EventType::HoCommandFail, pair_detail("serving", ue.serving, "target", *target));
                        }
                    }
                }
            }
        }
        if (outage)
            ue.kpi.outage_s += tick_;
        if (outage != ue.in_outage)
        {
            log(n, i, outage ? EventType::OutageEnter : EventType::OutageExit);
            ue.in_outage = outage;
        }
    }

    KpiReport finish()
    {
        KpiReport r;
        r.ues = static_cast<int>(U_);
        r.sim_time_s = static_cast<double>(n_ticks_) * tick_;
        std::vector<double> outage;
        for (std::size_t i = 0; i < U_; ++i)
        {
            const auto &ue = ues_[i];
            if (ue.in_outage)
                log(n_ticks_, i, EventType::OutageExit);
            r.per_ue.push_back(ue.kpi);
            r.n_ho += ue.kpi.n_ho;
            r.n_rlf += ue.kpi.n_rlf;
            outage.push_back(ue.kpi.outage_s);
        }
        r.per_cell = cell_ho_;
        r.n_a3_reports = n_reports_;
        r.n_ho_command_fail = n_command_fail_;
        r.n_ho_access_fail = n_access_fail_;
        r.outage_percent = outage_percent(outage, r.sim_time_s);
        if (sinr_count_ > 0)
        {
            r.mean_sinr_db = sinr_sum_ / static_cast<double>(sinr_count_);
            r.mean_interference_dbm = linear_to_db(interf_sum_ / static_cast<double>(sinr_count_));
        }
        return r;
    }

    const Scenario &sc_;
    const RunConfig &cfg_;
    const SimParams &p_;
    const SimResources &res_;
    EventLog *log_;
    std::vector<Cell> cells_;
    std::vector<Rect> buildings_;
    std::size_t U_, C_, S_, B_;
    double tick_;
    long n_ticks_ = 0;
    long l1_ticks_ = 1;
    double alpha_ = 1.0;
    double noise_mw_ = db_to_linear(cfg_.params.noise_dbm);
    const channel::FadingLut *lut_ = nullptr;
    UmiStreetCanyon pathloss_;

    std::vector<UeState> ues_;
    std::vector<ShadowingProcess> shadow_;          // U x S
    std::vector<channel::LinkChannelAssignment> links_; // U x C
    std::vector<Rng> sched_rng_;
    std::vector<double> power_;        // U x C x B, mW
    std::vector<PowerWindow> windows_; // U x C x B
    std::vector<int> best_beam_;       // U x C
    std::vector<double> l3_;           // U x C, dBm
    std::vector<int> active_beam_;
    std::vector<std::vector<int>> attached_;
    std::vector<CellKpi> cell_ho_;
    std::vector<double> gain_;
    std::vector<std::size_t> order_;
    std::vector<std::array<double, 3>> steer_unit_;

    int n_reports_ = 0;
    int n_command_fail_ = 0;
    int n_access_fail_ = 0;
    double sinr_sum_ = 0.0;
    double interf_sum_ = 0.0;
    long sinr_count_ = 0;
};

} // namespace

KpiReport run_simulation(const Scenario &scenario, const RunConfig &config, const SimResources &resources,
                         EventLog *log)
{
    validate_run(scenario, config, resources);
    if (log)
    {
        log->tick_s = scenario.sim.tick_s;
        log->events.clear();
    }
    Simulation sim(scenario, config, resources, log);
    return sim.run();
}

KpiReport analyze_event_log(std::istream &in, int ues, double sim_time_s)
{
    require(ues >= 1, "analysis needs at least one UE");
    require(sim_time_s > 0.0, "simulated time must be positive");
    std::string line;
    require(csv::next_line(in, line) && csv::trim(line) == "t_s,ue_id,event,detail",
            "event log must start with the header t_s,ue_id,event,detail");
    KpiReport r;
    r.ues = ues;
    r.sim_time_s = sim_time_s;
    r.per_ue.assign(static_cast<std::size_t>(ues), UeKpi{});
    std::vector<std::optional<double>> entered(static_cast<std::size_t>(ues));
    std::size_t row = 1;
    while (csv::next_line(in, line))
    {
        ++row;
        if (csv::trim(line).empty())
            continue;
        const auto f = csv::split(line, ',');
        require(f.size() == 4, "event log row " + std::to_string(row) + " needs 4 fields");
        const double t = csv::parse_double(f[0], "event time");
        const int ue = csv::parse_int(f[1], "UE id");
        require(ue >= 0 && ue < ues, "event log row " + std::to_string(row) + " names UE " + std::to_string(ue) +
                                         " outside [0, " + std::to_string(ues) + ")");
        auto &k = r.per_ue[static_cast<std::size_t>(ue)];
        switch (parse_event_type(std::string(csv::trim(f[2]))))
        {
        case EventType::HoSuccess:
            ++k.n_ho;
            ++r.n_ho;
            break;
        case EventType::Rlf:
            ++k.n_rlf;
            ++r.n_rlf;
            break;
        case EventType::A3Report:
            ++r.n_a3_reports;
            break;
        case EventType::HoCommandFail:
            ++r.n_ho_command_fail;
            break;
        case EventType::HoRandomAccessFail:
            ++r.n_ho_access_fail;
            break;
        case EventType::OutageEnter:
            entered[static_cast<std::size_t>(ue)] = t;
            break;
        case EventType::OutageExit:
            require(entered[static_cast<std::size_t>(ue)].has_value(),
                    "OUTAGE_EXIT without OUTAGE_ENTER at row " + std::to_string(row));
            k.outage_s += t - *entered[static_cast<std::size_t>(ue)];
            entered[static_cast<std::size_t>(ue)].reset();
            break;
        default:
            break;
        }
    }
    std::vector<double> outage;
    for (std::size_t u = 0; u < r.per_ue.size(); ++u)
    {
        if (entered[u])
            r.per_ue[u].outage_s += sim_time_s - *entered[u];
        outage.push_back(r.per_ue[u].outage_s);
    }
    r.outage_percent = outage_percent(outage, sim_time_s);
    return r;
}

} // namespace mmwmob::sim
