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

#include "mmwmob/channel_stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mmwmob/csv.hpp"
#include "mmwmob/error.hpp"

namespace mmwmob::channel {

using fading::coherence_time_jakes;
using fading::kPi;

std::string to_string(Condition c)
{
    return c == Condition::Los ? "LOS" : "NLOS";
}

Condition parse_condition(std::string_view s)
{
    s = csv::trim(s);
    if (s == "LOS")
        return Condition::Los;
    if (s == "NLOS")
        return Condition::Nlos;
    throw ValidationError("unknown condition '" + std::string(s) + "' (expected LOS or NLOS)");
}

namespace {

void validate_tuples(const std::vector<ChannelTuple> &tuples, Condition condition, int beams)
{
    require(!tuples.empty(), "tuple library has no " + to_string(condition) + " tuples");
    for (const auto &t : tuples)
    {
        const std::string where = to_string(condition) + " tuple " + std::to_string(t.id);
        require(t.condition == condition, where + ": condition mismatch");
        require(static_cast<int>(t.rows.size()) == beams,
                where + ": has " + std::to_string(t.rows.size()) + " rows, expected B=" + std::to_string(beams));
        for (std::size_t r = 0; r < t.rows.size(); ++r)
        {
            const auto &row = t.rows[r];
            require(std::isfinite(row.coherence_time_s) && row.coherence_time_s > 0.0,
                    where + ": coherence time must be positive");
            require(row.path_diversity >= 1, where + ": path diversity must be >= 1");
            require(std::isfinite(row.mean_beam_power_db), where + ": mean power must be finite");
            if (r > 0)
                require(t.rows[r - 1].mean_beam_power_db >= row.mean_beam_power_db,
                        where + ": rows not sorted by descending mean power");
        }
    }
}

void sort_rows(ChannelTuple &t)
{
    std::stable_sort(t.rows.begin(), t.rows.end(),
                     [](const TupleRow &a, const TupleRow &b) { return a.mean_beam_power_db > b.mean_beam_power_db; });
}

constexpr std::string_view kTupleHeader = "condition,tuple_id,beam_rank,mean_power_db,coherence_time_s,path_diversity";

} // namespace

void validate(const TupleLibrary &library)
{
    require(std::isfinite(library.ref_carrier_hz) && library.ref_carrier_hz > 0.0, "reference carrier must be positive");
    require(std::isfinite(library.ref_speed_mps) && library.ref_speed_mps > 0.0, "reference speed must be positive");
    require(library.beams >= 1, "B must be >= 1");
    validate_tuples(library.los, Condition::Los, library.beams);
    validate_tuples(library.nlos, Condition::Nlos, library.beams);
}

TupleLibrary ingest_tuples(std::istream &in)
{
    TupleLibrary lib;
    lib.provenance = Provenance::Ingested;

    std::string line;
    require(csv::next_line(in, line), "tuple file is empty");
    std::string_view head = csv::trim(line);
    require(head.starts_with("#"), "tuple file must start with '# ref_carrier_hz=..., ref_speed_mps=..., B=...'");
    head.remove_prefix(1);
    bool have_f = false, have_v = false, have_b = false;
    for (auto part : csv::split(head, ','))
    {
        part = csv::trim(part);
        const auto eq = part.find('=');
        require(eq != std::string_view::npos, "malformed tuple header entry '" + std::string(part) + "'");
        const auto key = csv::trim(part.substr(0, eq));
        const auto value = part.substr(eq + 1);
        if (key == "ref_carrier_hz")
        {
            lib.ref_carrier_hz = csv::parse_double(value, "ref_carrier_hz");
            have_f = true;
        }
        else if (key == "ref_speed_mps")
        {
            lib.ref_speed_mps = csv::parse_double(value, "ref_speed_mps");
            have_v = true;
        }
        else if (key == "B")
        {
            lib.beams = static_cast<int>(csv::parse_int(value, "B"));
            have_b = true;
        }
        else
            throw ValidationError("unknown tuple header key '" + std::string(key) + "'");
    }
    require(have_f && have_v && have_b, "tuple header must define ref_carrier_hz, ref_speed_mps and B");

    require(csv::next_line(in, line) && csv::trim(line) == kTupleHeader,
            "tuple file column header must be '" + std::string(kTupleHeader) + "'");

    // (condition, id) -> rank -> row
    std::map<std::pair<int, long long>, std::map<long long, TupleRow>> staged;
    std::size_t line_no = 2;
    while (csv::next_line(in, line))
    {
        ++line_no;
        if (csv::trim(line).empty())
            continue;
        const std::string where = "tuple file line " + std::to_string(line_no);
        auto f = csv::split(line);
        require(f.size() == 6, where + ": expected 6 fields");
        const Condition cond = parse_condition(f[0]);
        const long long id = csv::parse_int(f[1], "tuple_id");
        const long long rank = csv::parse_int(f[2], "beam_rank");
        TupleRow row;
        row.mean_beam_power_db = csv::parse_double(f[3], "mean_power_db");
        row.coherence_time_s = csv::parse_double(f[4], "coherence_time_s");
        const long long l = csv::parse_int(f[5], "path_diversity");
        require(row.coherence_time_s > 0.0, where + ": coherence time must be positive");
        require(l >= 1 && l <= 1000000, where + ": path diversity must be a positive integer");
        require(rank >= 1 && rank <= lib.beams, where + ": beam rank outside [1, B]");
        row.path_diversity = static_cast<int>(l);
        auto &rows = staged[{cond == Condition::Los ? 0 : 1, id}];
        require(rows.emplace(rank, row).second, where + ": duplicate beam rank");
    }

    for (auto &[key, rows] : staged)
    {
        ChannelTuple t;
        t.condition = key.first == 0 ? Condition::Los : Condition::Nlos;
        t.id = key.second;
        for (auto &[rank, row] : rows)
            t.rows.push_back(row);
        sort_rows(t);
        (t.condition == Condition::Los ? lib.los : lib.nlos).push_back(std::move(t));
    }
    validate(lib);
    return lib;
}

void export_tuples(std::ostream &out, const TupleLibrary &library)
{
    validate(library);
    out << "# ref_carrier_hz=" << csv::format(library.ref_carrier_hz) << ", ref_speed_mps=" << csv::format(library.ref_speed_mps)
        << ", B=" << library.beams << '\n';
    out << kTupleHeader << '\n';
    for (const auto *set : {&library.los, &library.nlos})
    {
        for (const auto &t : *set)
        {
            for (std::size_t r = 0; r < t.rows.size(); ++r)
            {
                const auto &row = t.rows[r];
                out << to_string(t.condition) << ',' << t.id << ',' << (r + 1) << ',' << csv::format(row.mean_beam_power_db)
                    << ',' << csv::format(row.coherence_time_s) << ',' << row.path_diversity << '\n';
            }
        }
    }
}

void validate(const SynthesisParams &p)
{
    require(p.ref_carrier_hz > 0.0 && p.ref_speed_mps > 0.0, "reference carrier and speed must be positive");
    require(p.tc_median_factor > 0.0, "coherence-time median factor must be positive");
    require(p.tc_log_sigma >= 0.0, "coherence-time log sigma must be non-negative");
    require(p.tc_floor_factor >= 0.0 && p.tc_floor_factor < p.tc_median_factor * 8.0,
            "coherence-time floor must be non-negative and reachable");
    for (const auto *d : {&p.nlos_diversity, &p.los_diversity})
    {
        require(d->strongest_mode >= 1.0 && d->weakest_mode >= 1.0, "diversity modes must be >= 1");
        require(d->log_sigma >= 0.0, "diversity log sigma must be non-negative");
    }
    require(p.power_step_db >= 0.0 && p.power_jitter_db >= 0.0, "beam power parameters must be non-negative");
}

namespace {

int draw_diversity(Rng &rng, const DiversityDistribution &d, int rank, int beams)
{
    const double w = beams > 1 ? static_cast<double>(rank - 1) / (beams - 1) : 0.0;
    const double mode = d.strongest_mode + (d.weakest_mode - d.strongest_mode) * w;
    // log-normal with the given mode: mu = ln(mode) + sigma^2
    const double mu = std::log(mode) + d.log_sigma * d.log_sigma;
    const double x = std::exp(mu + d.log_sigma * rng.normal());
    return std::max(1, static_cast<int>(std::floor(x + 0.5)));
}

ChannelTuple synthesize_tuple(Rng &rng, Condition cond, long long id, int beams, double tc_jakes,
                              const SynthesisParams &p)
{
    ChannelTuple t;
    t.condition = cond;
    t.id = id;
    t.rows.resize(static_cast<std::size_t>(beams));
    for (int r = 0; r < beams; ++r)
        t.rows[r].mean_beam_power_db = -p.power_step_db * r + p.power_jitter_db * rng.normal();
    sort_rows(t);

    const auto &div = cond == Condition::Los ? p.los_diversity : p.nlos_diversity;
    const double log_median = std::log(p.tc_median_factor * tc_jakes);
    const double floor = p.tc_floor_factor * tc_jakes;
    for (int r = 0; r < beams; ++r)
    {
        auto &row = t.rows[r];
        row.path_diversity = draw_diversity(rng, div, r + 1, beams);
        double tc;
        do
            tc = std::exp(log_median + p.tc_log_sigma * rng.normal());
        while (tc <= floor);
        row.coherence_time_s = tc;
    }
    return t;
}

} // namespace

TupleLibrary synthesize_tuple_library(int tuples_per_condition, int beams, std::uint64_t seed, const SynthesisParams &params)
{
    require(tuples_per_condition >= 1, "M must be >= 1");
    require(beams >= 1, "B must be >= 1");
    validate(params);

    TupleLibrary lib;
    lib.provenance = Provenance::Synthetic;
    lib.ref_carrier_hz = params.ref_carrier_hz;
    lib.ref_speed_mps = params.ref_speed_mps;
    lib.beams = beams;

    const double tc_jakes = coherence_time_jakes(fading::DopplerParams(params.ref_carrier_hz, params.ref_speed_mps).max_doppler_hz());
    Rng rng(seed);
    for (int m = 0; m < tuples_per_condition; ++m)
        lib.los.push_back(synthesize_tuple(rng, Condition::Los, m, beams, tc_jakes, params));
    for (int m = 0; m < tuples_per_condition; ++m)
        lib.nlos.push_back(synthesize_tuple(rng, Condition::Nlos, m, beams, tc_jakes, params));
    validate(lib);
    return lib;
}

double scale_coherence_time(double tc_s, double ref_carrier_hz, double ref_speed_mps, double new_carrier_hz,
                            double new_speed_mps)
{
    require(tc_s > 0.0 && ref_carrier_hz > 0.0 && ref_speed_mps > 0.0 && new_carrier_hz > 0.0 && new_speed_mps > 0.0,
            "coherence-time scaling needs positive arguments");
    return tc_s * (ref_carrier_hz * ref_speed_mps) / (new_carrier_hz * new_speed_mps);
}

double max_doppler_for_coherence_time(double tc_s)
{
    require(tc_s > 0.0, "coherence time must be positive");
    return 9.0 / (16.0 * kPi * tc_s);
}

LutConfig default_lut_config(double carrier_hz, double fastest_speed_mps, std::uint64_t seed)
{
    const double tc_ref = coherence_time_jakes(fading::DopplerParams(carrier_hz, fastest_speed_mps).max_doppler_hz());
    LutConfig cfg;
    cfg.diversity_grid = {1, 2, 4, 8, 16, 32};
    constexpr int kPoints = 10;
    const double lo = 0.5 * tc_ref;
    const double ratio = std::pow(16.0 / 0.5, 1.0 / (kPoints - 1));
    for (int j = 0; j < kPoints; ++j)
        cfg.coherence_grid.push_back(lo * std::pow(ratio, j));
    cfg.sample_period_s = fading::default_sample_period(max_doppler_for_coherence_time(cfg.coherence_grid.front()));
    cfg.duration_s = 32767.0 * cfg.sample_period_s;
    cfg.seed = seed;
    return cfg;
}

FadingLut::FadingLut(std::vector<int> diversity_grid, std::vector<double> coherence_grid,
                     std::vector<fading::FadingProcess> envelopes, std::uint64_t seed)
    : diversity_grid_(std::move(diversity_grid)), coherence_grid_(std::move(coherence_grid)),
      envelopes_(std::move(envelopes)), seed_(seed)
{
    require(!diversity_grid_.empty() && !coherence_grid_.empty(), "LUT grids must be non-empty");
    require(envelopes_.size() == diversity_grid_.size() * coherence_grid_.size(), "LUT must populate every grid cell");
    for (std::size_t i = 1; i < diversity_grid_.size(); ++i)
        require(diversity_grid_[i] > diversity_grid_[i - 1], "diversity grid must be strictly ascending");
    for (std::size_t j = 1; j < coherence_grid_.size(); ++j)
        require(coherence_grid_[j] > coherence_grid_[j - 1], "coherence grid must be strictly ascending");
    require(diversity_grid_.front() >= 1 && coherence_grid_.front() > 0.0, "LUT grid values must be positive");
    const auto n = envelopes_.front().size();
    const double dt = envelopes_.front().sample_period_s;
    for (const auto &e : envelopes_)
        require(e.size() == n && e.sample_period_s == dt && n > 0, "LUT envelopes must share length and sample period");
}

const fading::FadingProcess &FadingLut::envelope(std::size_t i, std::size_t j) const
{
    if (i >= diversity_grid_.size() || j >= coherence_grid_.size())
        throw ValidationError("LUT cell index out of range");
    return envelopes_[i * coherence_grid_.size() + j];
}

int FadingLut::sinusoids() const
{
    const auto &p = envelopes_.front().params;
    return p ? p->sinusoids : 0;
}

namespace {

void validate(const LutConfig &c)
{
    require(!c.diversity_grid.empty() && !c.coherence_grid.empty(), "LUT grids must be non-empty");
    for (std::size_t i = 0; i < c.diversity_grid.size(); ++i)
        require(c.diversity_grid[i] >= 1 && (i == 0 || c.diversity_grid[i] > c.diversity_grid[i - 1]),
                "diversity grid must be strictly ascending positive integers");
    for (std::size_t j = 0; j < c.coherence_grid.size(); ++j)
        require(c.coherence_grid[j] > 0.0 && (j == 0 || c.coherence_grid[j] > c.coherence_grid[j - 1]),
                "coherence grid must be strictly ascending positive values");
}

} // namespace

FadingLut build_fading_lut(const LutConfig &config)
{
    validate(config);
    std::vector<fading::FadingProcess> envelopes;
    envelopes.reserve(config.diversity_grid.size() * config.coherence_grid.size());
    for (std::size_t i = 0; i < config.diversity_grid.size(); ++i)
    {
        for (std::size_t j = 0; j < config.coherence_grid.size(); ++j)
        {
            fading::EnvelopeConfig e;
            e.path_diversity = config.diversity_grid[i];
            e.sinusoids = config.sinusoids;
            e.max_doppler_hz = max_doppler_for_coherence_time(config.coherence_grid[j]);
            e.duration_s = config.duration_s;
            e.sample_period_s = config.sample_period_s;
            e.seed = derive_seed(config.seed, 0x4c5554, i, j);
            envelopes.push_back(fading::generate_multipath_envelope(e));
        }
    }
    return FadingLut(config.diversity_grid, config.coherence_grid, std::move(envelopes), config.seed);
}

void save_lut(const FadingLut &lut, const std::filesystem::path &dir)
{
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json manifest;
    manifest["diversity_grid"] = lut.diversity_grid();
    manifest["coherence_grid_s"] = lut.coherence_grid();
    manifest["sample_period_s"] = lut.sample_period_s();
    manifest["duration_s"] = lut.duration_s();
    manifest["samples"] = lut.envelope_length();
    manifest["seed"] = lut.seed();
    manifest["sinusoids"] = lut.sinusoids();
    auto cells = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < lut.diversity_grid().size(); ++i)
    {
        for (std::size_t j = 0; j < lut.coherence_grid().size(); ++j)
        {
            const std::string name = "cell_" + std::to_string(i) + "_" + std::to_string(j) + ".csv";
            std::ofstream f(dir / name, std::ios::binary);
            require(static_cast<bool>(f), "cannot write " + (dir / name).string());
            fading::write_envelope_csv(f, lut.envelope(i, j));
            const auto &p = lut.envelope(i, j).params;
            cells.push_back({{"file", name},
                             {"i", i},
                             {"j", j},
                             {"max_doppler_hz", p ? p->max_doppler_hz : 0.0},
                             {"seed", p ? p->seed : 0}});
        }
    }
    manifest["cells"] = cells;
    std::ofstream m(dir / "manifest.json", std::ios::binary);
    require(static_cast<bool>(m), "cannot write LUT manifest");
    m << manifest.dump(2) << '\n';
}

FadingLut load_lut(const std::filesystem::path &dir)
{
    std::ifstream m(dir / "manifest.json");
    require(static_cast<bool>(m), "LUT manifest not found in " + dir.string());
    nlohmann::json manifest;
    try
    {
        manifest = nlohmann::json::parse(m);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(std::string("malformed LUT manifest: ") + e.what());
    }
    try
    {
        auto div = manifest.at("diversity_grid").get<std::vector<int>>();
        auto coh = manifest.at("coherence_grid_s").get<std::vector<double>>();
        const double dt = manifest.at("sample_period_s").get<double>();
        const int k = manifest.value("sinusoids", 0);
        const auto seed = manifest.at("seed").get<std::uint64_t>();
        std::vector<fading::FadingProcess> envelopes(div.size() * coh.size());
        for (const auto &cell : manifest.at("cells"))
        {
            const auto i = cell.at("i").get<std::size_t>();
            const auto j = cell.at("j").get<std::size_t>();
            require(i < div.size() && j < coh.size(), "LUT manifest cell outside grid");
            std::ifstream f(dir / cell.at("file").get<std::string>());
            require(static_cast<bool>(f), "missing LUT envelope " + cell.at("file").get<std::string>());
            auto e = fading::read_envelope_csv(f);
            e.sample_period_s = dt;
            e.params = fading::GenerationParams{k, div[i], cell.at("max_doppler_hz").get<double>(),
                                                cell.at("seed").get<std::uint64_t>()};
            envelopes[i * coh.size() + j] = std::move(e);
        }
        return FadingLut(std::move(div), std::move(coh), std::move(envelopes), seed);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(std::string("malformed LUT manifest: ") + e.what());
    }
}

namespace {

template <typename T>
GridChoice nearest_smaller(std::span<const T> grid, T target)
{
    require(!grid.empty(), "empty grid");
    auto it = std::lower_bound(grid.begin(), grid.end(), target); // first >= target
    if (it == grid.begin())
        return {0, true};
    return {static_cast<std::size_t>(std::distance(grid.begin(), it) - 1), false};
}

} // namespace

GridChoice select_nearest_smaller(std::span<const double> grid, double target)
{
    return nearest_smaller(grid, target);
}

GridChoice select_nearest_smaller(std::span<const int> grid, int target)
{
    return nearest_smaller(grid, target);
}

bool LinkChannelAssignment::any_fallback() const
{
    for (const auto *set : {&los_beams, &nlos_beams})
        for (const auto &b : *set)
            if (b.fallback)
                return true;
    return false;
}

LinkChannelAssignment assign_link_channel(const TupleLibrary &library, const FadingLut &lut, std::size_t link_id,
                                          Rng &rng, double sim_carrier_hz, double ue_speed_mps)
{
    require(!library.los.empty() && !library.nlos.empty(), "tuple library is empty");
    LinkChannelAssignment a;
    a.link_id = link_id;
    a.los_tuple_index = rng.index(library.los.size());
    a.nlos_tuple_index = rng.index(library.nlos.size());

    const std::span<const int> div_grid(lut.diversity_grid());
    const std::span<const double> coh_grid(lut.coherence_grid());
    const auto fill = [&](const ChannelTuple &t, std::vector<BeamChannel> &out) {
        for (const auto &row : t.rows)
        {
            const double tc = scale_coherence_time(row.coherence_time_s, library.ref_carrier_hz, library.ref_speed_mps,
                                                   sim_carrier_hz, ue_speed_mps);
            const auto c = select_nearest_smaller(coh_grid, tc);
            const auto d = select_nearest_smaller(div_grid, row.path_diversity);
            BeamChannel b;
            b.coherence_index = c.index;
            b.diversity_index = d.index;
            b.fallback = c.fallback || d.fallback;
            b.playback_offset = rng.index(lut.envelope_length());
            out.push_back(b);
        }
    };
    fill(library.los[a.los_tuple_index], a.los_beams);
    fill(library.nlos[a.nlos_tuple_index], a.nlos_beams);
    return a;
}

LinkChannelAssignment assign_jakes_channel(const FadingLut &lut, std::size_t link_id, Rng &rng, int path_diversity,
                                           double coherence_time_s, int beams)
{
    const auto &div = lut.diversity_grid();
    auto it = std::find(div.begin(), div.end(), path_diversity);
    require(it != div.end(), "Jakes LUT has no envelope with L=" + std::to_string(path_diversity));
    const std::size_t di = static_cast<std::size_t>(std::distance(div.begin(), it));

    const auto &coh = lut.coherence_grid();
    std::size_t cj = 0;
    for (std::size_t j = 1; j < coh.size(); ++j)
        if (std::abs(std::log(coh[j] / coherence_time_s)) < std::abs(std::log(coh[cj] / coherence_time_s)))
            cj = j;

    LinkChannelAssignment a;
    a.link_id = link_id;
    for (int b = 0; b < beams; ++b)
        a.los_beams.push_back({di, cj, rng.index(lut.envelope_length()), false});
    a.nlos_beams = a.los_beams;
    return a;
}

double sample_fading(const LinkChannelAssignment &assignment, const FadingLut &lut, int beam_rank, Condition condition,
                     double t_s)
{
    const auto &beams = assignment.beams(condition);
    if (beam_rank < 1 || static_cast<std::size_t>(beam_rank) > beams.size())
        throw ValidationError("beam rank " + std::to_string(beam_rank) + " has no fading assignment");
    const auto &b = beams[static_cast<std::size_t>(beam_rank - 1)];
    const auto &env = lut.envelope(b.diversity_index, b.coherence_index);
    const auto step = static_cast<std::size_t>(std::llround(t_s / env.sample_period_s));
    return env.samples[(b.playback_offset + step) % env.size()];
}

} // namespace mmwmob::channel
