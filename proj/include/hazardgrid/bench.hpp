#pragma once

#include "hazardgrid/engine.hpp"
#include "hazardgrid/flood.hpp"
#include "hazardgrid/grid.hpp"
#include "hazardgrid/learn.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hazardgrid {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Seeded benchmark description. Defaults are the desk-scale suite; the
/// full-scale protocol is 10 maps per density, sizes {32, 64, 128},
/// 1000 repetitions (see configs/full.json).
struct ExperimentConfig {
    std::uint64_t master_seed = 2024;
    std::vector<int> map_sizes{32};
    int maps_per_density = 3;
    std::vector<Density> densities{Density::Sparse, Density::Dense};
    std::vector<FloodKind> flood_kinds{std::begin(all_flood_kinds), std::end(all_flood_kinds)};
    int starts_sampled = 100;
    int goals_sampled = 100;
    int episodes_per_epoch = 50;
    int total_episodes = 1000;
    int repetitions = 10;
    int step_budget = 0;        ///< fixed budget; 0 selects budget_factor * (w + h)
    int budget_factor = 6;      ///< the engine's own default is 4; 6 lets early random walks reach the safe band
    bool greedy_eval = false;
    LearnerConfig learner;
    EngineOptions engine;
    std::map<FloodKind, FloodParams> floods;

    ExperimentConfig();

    int epochs() const noexcept { return total_episodes / episodes_per_epoch; }
    const FloodParams& flood_params(FloodKind kind) const;

    /// Throws ConfigError (or the owning module's error) on invalid ranges.
    void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

/// One embarrassingly parallel training run.
struct WorkUnit {
    int size = 0;
    Density density = Density::Sparse;
    int map_index = 0;
    FloodKind kind = FloodKind::CentralPing;
    int repetition = 0;
};

/// derive_seed(master, {size, density, map_index, kind, repetition}).
std::uint64_t child_seed(std::uint64_t master_seed, const WorkUnit& unit);

/// Seed of the generated map shared by every kind and repetition on it:
/// derive_seed(master, {size, density, map_index, 0xFFFF'FFFF}).
std::uint64_t map_seed(std::uint64_t master_seed, int size, Density density, int map_index);

/// Work units in canonical order: size, density, map, kind, repetition.
std::vector<WorkUnit> enumerate_units(const ExperimentConfig& cfg);

struct EpisodeResult {
    int size = 0;
    Density density = Density::Sparse;
    int map_index = 0;
    FloodKind kind = FloodKind::CentralPing;
    int repetition = 0;
    int episode = 0;
    EpisodeStatus outcome = EpisodeStatus::TimedOut;
    int steps = 0;
    double epsilon = 0.0; ///< exploration threshold at episode start
};

/// Everything train_unit needs besides the map and seed.
struct TrainingSetup {
    FloodKind kind = FloodKind::CentralPing;
    FloodParams flood;
    LearnerConfig learner;
    EngineOptions engine;
    int step_budget = 0; ///< 0 selects budget_factor * (w + h)
    int budget_factor = 6;
    int total_episodes = 1000;
    int episodes_per_epoch = 50;
    int starts_sampled = 100;
    int goals_sampled = 100;
    bool greedy_eval = false;
};

TrainingSetup training_setup(const ExperimentConfig& cfg, FloodKind kind);

struct EpisodeRecord {
    Cell start;
    Cell goal; ///< sampled goal designation; any safe cell counts as success
    EpisodeStatus outcome = EpisodeStatus::TimedOut;
    int steps = 0;
    double epsilon = 0.0;
};

struct TrainingRun {
    QTablePair tables;
    std::vector<EpisodeRecord> episodes;
    std::vector<EpisodeRecord> greedy; ///< episodes_per_epoch greedy runs after each epoch, when enabled
};

/// Trains one fresh table pair on `map` for total_episodes episodes with
/// per-episode (or per-step) epsilon decay.
TrainingRun train_unit(const GridMap& map, const TrainingSetup& setup, std::uint64_t seed);

/// Plays one episode. With `learn` set, every transition updates `tables`.
/// `trace` receives trajectory lines when non-null.
EpisodeRecord play_episode(const GridMap& map, const TrainingSetup& setup, QTablePair& tables, Cell start,
                           double epsilon, bool learn, Rng& rng, std::ostream* trace = nullptr);

/// Greedy (epsilon = 0) success rate of a frozen table pair over `episodes`
/// episodes with starts drawn uniformly from the start pool.
double evaluate_greedy(const GridMap& map, const TrainingSetup& setup, const QTablePair& tables, int episodes,
                       std::uint64_t seed, std::ostream* trace = nullptr);

struct CurveKey {
    int size = 0;
    Density density = Density::Sparse;
    FloodKind kind = FloodKind::CentralPing;
    auto operator<=>(const CurveKey&) const = default;
};

/// Per-epoch success rates of one (size, density, kind) grouping, pooled over
/// maps and repetitions. Epoch e covers episodes [e * epoch_len, (e+1) * epoch_len).
struct SuccessCurve {
    CurveKey key;
    std::vector<double> rates;
    std::vector<int> counts; ///< episodes pooled into each epoch
    std::vector<int> successes;
};

/// Folds results into curves sorted by key. Every epoch on each curve's axis
/// (0 .. last epoch seen) must hold at least one result, or ConfigError is
/// thrown: an empty mean is an error, not zero.
std::vector<SuccessCurve> aggregate(const std::vector<EpisodeResult>& results, int episodes_per_epoch);

struct BenchmarkOutput {
    std::vector<EpisodeResult> results;
    std::vector<SuccessCurve> curves;
    std::vector<EpisodeResult> greedy_results;
    std::vector<SuccessCurve> greedy_curves;
};

/// Worker count from HAZARDGRID_THREADS (0 or unset = OpenMP default).
int threads_from_env();

/// Runs every work unit, `threads` at a time (0 = threads_from_env()).
/// Output is independent of the worker count.
BenchmarkOutput run_benchmark(const ExperimentConfig& cfg, int threads = 0);

/// Single-threaded reference of run_benchmark.
BenchmarkOutput run_benchmark_serial(const ExperimentConfig& cfg);

/// The generated map for (size, density, map_index) under cfg.master_seed.
GridMap benchmark_map(const ExperimentConfig& cfg, int size, Density density, int map_index);

} // namespace hazardgrid
