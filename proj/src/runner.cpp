#include "hazardgrid/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <optional>
#include <ostream>

namespace hazardgrid {

std::uint64_t child_seed(std::uint64_t master_seed, const WorkUnit& unit)
{
    return derive_seed(master_seed, {static_cast<std::uint64_t>(unit.size), static_cast<std::uint64_t>(unit.density),
                                     static_cast<std::uint64_t>(unit.map_index), static_cast<std::uint64_t>(unit.kind),
                                     static_cast<std::uint64_t>(unit.repetition)});
}

std::uint64_t map_seed(std::uint64_t master_seed, int size, Density density, int map_index)
{
    return derive_seed(master_seed, {static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(density),
                                     static_cast<std::uint64_t>(map_index), 0xFFFF'FFFFULL});
}

std::vector<WorkUnit> enumerate_units(const ExperimentConfig& cfg)
{
    std::vector<WorkUnit> units;
    for (int size : cfg.map_sizes)
        for (Density d : cfg.densities)
            for (int m = 0; m < cfg.maps_per_density; ++m)
                for (FloodKind k : cfg.flood_kinds)
                    for (int r = 0; r < cfg.repetitions; ++r)
                        units.push_back({size, d, m, k, r});
    return units;
}

GridMap benchmark_map(const ExperimentConfig& cfg, int size, Density density, int map_index)
{
    return generate_map(size, size, density, map_seed(cfg.master_seed, size, density, map_index));
}

TrainingSetup training_setup(const ExperimentConfig& cfg, FloodKind kind)
{
    TrainingSetup s;
    s.kind = kind;
    s.flood = cfg.flood_params(kind);
    s.learner = cfg.learner;
    s.engine = cfg.engine;
    s.step_budget = cfg.step_budget;
    s.budget_factor = cfg.budget_factor;
    s.total_episodes = cfg.total_episodes;
    s.episodes_per_epoch = cfg.episodes_per_epoch;
    s.starts_sampled = cfg.starts_sampled;
    s.goals_sampled = cfg.goals_sampled;
    s.greedy_eval = cfg.greedy_eval;
    return s;
}

namespace {

EpisodeRecord run_episode(const GridMap& map, const TrainingSetup& setup, const QTablePair& policy,
                          QTablePair* learn_into, Cell start, double epsilon, Rng& rng, std::ostream* trace)
{
    const int budget = setup.step_budget > 0 ? setup.step_budget : default_step_budget(map, setup.budget_factor);
    const std::uint64_t flood_seed = rng();
    EpisodeState state = reset_episode(map, setup.kind, setup.flood, start, budget, flood_seed, setup.engine);

    EpisodeRecord rec;
    rec.start = start;
    rec.epsilon = epsilon;
    if (!state.running()) {
        rec.outcome = state.status;
        return rec;
    }

    std::string key = observe_key(state);
    std::string next_key;
    while (state.running()) {
        const Action a = select_action(q_values_for_selection(policy, key), epsilon, rng);
        const StepResult sr = step(state, a);
        if (trace)
            write_trajectory_line(*trace, state, a, sr.reward);
        if (sr.terminal)
            next_key.clear();
        else
            next_key = observe_key(state);
        if (learn_into) {
            apply_update(*learn_into, {key, a, sr.reward, next_key, sr.terminal}, setup.learner, rng);
            if (setup.learner.decay_mode == DecayMode::PerStep)
                epsilon = decay_epsilon(epsilon, setup.learner);
        }
        key.swap(next_key);
    }
    rec.outcome = state.status;
    rec.steps = state.tick;
    return rec;
}

std::vector<Cell> sample_cells(std::span<const Cell> pool, int count, Rng& rng)
{
    std::vector<Cell> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(pool[static_cast<std::size_t>(uniform_index(rng, pool.size()))]);
    return out;
}

} // namespace

EpisodeRecord play_episode(const GridMap& map, const TrainingSetup& setup, QTablePair& tables, Cell start,
                           double epsilon, bool learn, Rng& rng, std::ostream* trace)
{
    return run_episode(map, setup, tables, learn ? &tables : nullptr, start, epsilon, rng, trace);
}

TrainingRun train_unit(const GridMap& map, const TrainingSetup& setup, std::uint64_t seed)
{
    map.require_pools();
    setup.learner.validate();
    setup.flood.validate(setup.kind);
    if (setup.total_episodes < 1 || setup.episodes_per_epoch < 1 || setup.starts_sampled < 1 || setup.goals_sampled < 1)
        throw ConfigError("training counts must be >= 1");

    Rng rng(seed);
    // Sampled with replacement from the full pools.
    const auto starts = sample_cells(map.start_pool(), setup.starts_sampled, rng);
    const auto goals = sample_cells(map.safe_pool(), setup.goals_sampled, rng);

    TrainingRun run;
    run.episodes.reserve(static_cast<std::size_t>(setup.total_episodes));
    double epsilon = setup.learner.epsilon0;
    for (int ep = 0; ep < setup.total_episodes; ++ep) {
        const Cell start = starts[static_cast<std::size_t>(uniform_index(rng, starts.size()))];
        const Cell goal = goals[static_cast<std::size_t>(uniform_index(rng, goals.size()))];
        EpisodeRecord rec = run_episode(map, setup, run.tables, &run.tables, start, epsilon, rng, nullptr);
        rec.goal = goal;
        run.episodes.push_back(rec);

        if (setup.learner.decay_mode == DecayMode::PerEpisode) {
            epsilon = decay_epsilon(epsilon, setup.learner);
        } else {
            for (int s = 0; s < rec.steps; ++s)
                epsilon = decay_epsilon(epsilon, setup.learner);
        }

        if (setup.greedy_eval && (ep + 1) % setup.episodes_per_epoch == 0) {
            // Separate stream so enabling evaluation leaves training untouched.
            Rng eval_rng(derive_seed(seed, {0x6772'6565'6479ULL, static_cast<std::uint64_t>(ep)}));
            for (int g = 0; g < setup.episodes_per_epoch; ++g) {
                const Cell s = starts[static_cast<std::size_t>(uniform_index(eval_rng, starts.size()))];
                run.greedy.push_back(run_episode(map, setup, run.tables, nullptr, s, 0.0, eval_rng, nullptr));
            }
        }
    }
    return run;
}

double evaluate_greedy(const GridMap& map, const TrainingSetup& setup, const QTablePair& tables, int episodes,
                       std::uint64_t seed, std::ostream* trace)
{
    map.require_pools();
    if (episodes < 1)
        throw ConfigError("episodes must be >= 1");
    Rng rng(seed);
    int successes = 0;
    for (int i = 0; i < episodes; ++i) {
        const Cell start = map.start_pool()[static_cast<std::size_t>(uniform_index(rng, map.start_pool().size()))];
        const auto rec = run_episode(map, setup, tables, nullptr, start, 0.0, rng, i == 0 ? trace : nullptr);
        successes += rec.outcome == EpisodeStatus::Success ? 1 : 0;
    }
    return static_cast<double>(successes) / static_cast<double>(episodes);
}

int threads_from_env()
{
    if (const char* v = std::getenv("HAZARDGRID_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(v, &end, 10);
        if (end != v && *end == '\0' && n > 0)
            return static_cast<int>(n);
    }
    return omp_get_max_threads();
}

namespace {

struct UnitOutput {
    std::vector<EpisodeRecord> episodes;
    std::vector<EpisodeRecord> greedy;
};

struct Plan {
    std::vector<WorkUnit> units;
    std::vector<std::pair<WorkUnit, GridMap>> maps; ///< keyed by (size, density, map_index)

    const GridMap& map_for(const WorkUnit& u) const
    {
        for (const auto& [key, map] : maps)
            if (key.size == u.size && key.density == u.density && key.map_index == u.map_index)
                return map;
        throw std::logic_error("map missing from plan");
    }
};

std::vector<WorkUnit> map_slots(const ExperimentConfig& cfg)
{
    std::vector<WorkUnit> slots;
    for (int size : cfg.map_sizes)
        for (Density d : cfg.densities)
            for (int m = 0; m < cfg.maps_per_density; ++m)
                slots.push_back({size, d, m, FloodKind::CentralPing, 0});
    return slots;
}

void append_results(std::vector<EpisodeResult>& out, const WorkUnit& u, const std::vector<EpisodeRecord>& records)
{
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out.push_back({u.size, u.density, u.map_index, u.kind, u.repetition, static_cast<int>(i),
                       r.outcome, r.steps, r.epsilon});
    }
}

BenchmarkOutput assemble(const ExperimentConfig& cfg, const Plan& plan, const std::vector<UnitOutput>& outputs)
{
    BenchmarkOutput out;
    for (std::size_t i = 0; i < plan.units.size(); ++i) {
        append_results(out.results, plan.units[i], outputs[i].episodes);
        // Greedy block g holds rows g * epoch_len .. (g + 1) * epoch_len - 1, so the
        // row index aggregates into epoch g.
        if (cfg.greedy_eval)
            append_results(out.greedy_results, plan.units[i], outputs[i].greedy);
    }
    out.curves = aggregate(out.results, cfg.episodes_per_epoch);
    if (cfg.greedy_eval)
        out.greedy_curves = aggregate(out.greedy_results, cfg.episodes_per_epoch);
    return out;
}

template <typename Loop>
BenchmarkOutput run_with(const ExperimentConfig& cfg, Loop&& loop)
{
    cfg.validate();
    Plan plan;
    plan.units = enumerate_units(cfg);
    const auto slots = map_slots(cfg);

    std::vector<std::optional<GridMap>> maps(slots.size());
    std::vector<std::exception_ptr> errors(std::max(slots.size(), plan.units.size()));
    loop(slots.size(), [&](std::size_t i) {
        const auto& s = slots[i];
        maps[i].emplace(benchmark_map(cfg, s.size, s.density, s.map_index));
    }, errors);
    for (std::size_t i = 0; i < slots.size(); ++i)
        plan.maps.emplace_back(slots[i], std::move(*maps[i]));

    std::vector<UnitOutput> outputs(plan.units.size());
    loop(plan.units.size(), [&](std::size_t i) {
        const WorkUnit& u = plan.units[i];
        TrainingRun run = train_unit(plan.map_for(u), training_setup(cfg, u.kind), child_seed(cfg.master_seed, u));
        outputs[i].episodes = std::move(run.episodes);
        outputs[i].greedy = std::move(run.greedy);
    }, errors);
    return assemble(cfg, plan, outputs);
}

void rethrow_first(const std::vector<std::exception_ptr>& errors)
{
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace

BenchmarkOutput run_benchmark(const ExperimentConfig& cfg, int threads)
{
    const int workers = threads > 0 ? threads : threads_from_env();
    return run_with(cfg, [workers](std::size_t n, auto&& body, std::vector<std::exception_ptr>& errors) {
        std::fill(errors.begin(), errors.end(), nullptr);
        const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (long i = 0; i < count; ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
        rethrow_first(errors);
    });
}

BenchmarkOutput run_benchmark_serial(const ExperimentConfig& cfg)
{
    return run_with(cfg, [](std::size_t n, auto&& body, std::vector<std::exception_ptr>&) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
    });
}

} // namespace hazardgrid
