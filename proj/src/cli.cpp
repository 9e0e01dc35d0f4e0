#include "hazardgrid/cli.hpp"

#include "hazardgrid/bench.hpp"
#include "hazardgrid/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace hazardgrid {

namespace {

struct FloodOverrides {
    std::optional<double> r0, delta_r, delta_d, spawn_prob;
    std::optional<int> max_spawn;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--r0", r0, "Initial ping radius (cells)");
        cmd->add_option("--delta-r", delta_r, "Ping radius growth per tick");
        cmd->add_option("--delta-d", delta_d, "Linear front advance per tick");
        cmd->add_option("--spawn-prob", spawn_prob, "RandomPings spawn probability per tick");
        cmd->add_option("--max-spawn", max_spawn, "RandomPings maximum pings per spawn");
    }

    FloodParams apply(FloodParams p) const
    {
        if (r0) p.r0 = *r0;
        if (delta_r) p.delta_r = *delta_r;
        if (delta_d) p.delta_d = *delta_d;
        if (spawn_prob) p.spawn_prob = *spawn_prob;
        if (max_spawn) p.max_spawn = *max_spawn;
        return p;
    }
};

std::vector<SuccessCurve> single_curve(const TrainingRun& run, const TrainingSetup& setup, int size, Density density)
{
    std::vector<EpisodeResult> results;
    for (std::size_t i = 0; i < run.episodes.size(); ++i)
        results.push_back({size, density, 0, setup.kind, 0, static_cast<int>(i), run.episodes[i].outcome,
                           run.episodes[i].steps, run.episodes[i].epsilon});
    return aggregate(results, setup.episodes_per_epoch);
}

ExperimentConfig config_or_default(const std::string& path)
{
    return path.empty() ? ExperimentConfig{} : load_config(path);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Grid-world flood simulator and double Q-learning benchmark", "hazardgrid"};
    app.require_subcommand(1);

    // gen-maps
    int gen_size = 32, gen_count = 1;
    std::string gen_density = "sparse", gen_out;
    std::uint64_t gen_seed = ExperimentConfig{}.master_seed;
    auto* gen = app.add_subcommand("gen-maps", "Generate benchmark map files");
    gen->add_option("--size", gen_size, "Map side length")->required();
    gen->add_option("--density", gen_density, "sparse or dense")->required();
    gen->add_option("--count", gen_count, "Number of maps")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Master seed (maps match `bench` under the same seed)");
    gen->add_option("--out-dir", gen_out, "Output directory")->required();

    // train
    std::string train_config, train_snapshot, train_map, train_out_map, train_flood, train_density;
    int train_size = 0, train_map_index = 0, train_rep = 0;
    auto* train = app.add_subcommand("train", "Train one grouping and write its Q-table snapshot");
    train->add_option("--config", train_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    train->add_option("--out-snapshot", train_snapshot, "Snapshot output path")->required();
    train->add_option("--size", train_size, "Map size (default: first in config)");
    train->add_option("--density", train_density, "Density (default: first in config)");
    train->add_option("--flood", train_flood, "Flood kind (default: first in config)");
    train->add_option("--map-index", train_map_index, "Generated map index")->check(CLI::NonNegativeNumber);
    train->add_option("--repetition", train_rep, "Repetition id (selects the seed)")->check(CLI::NonNegativeNumber);
    train->add_option("--map", train_map, "Train on this map file instead of a generated one")->check(CLI::ExistingFile);
    train->add_option("--out-map", train_out_map, "Also write the map that was trained on");

    // eval
    std::string eval_map, eval_snapshot, eval_flood, eval_config, eval_trace;
    int eval_episodes = 100;
    std::uint64_t eval_seed = 1;
    FloodOverrides eval_over;
    auto* eval = app.add_subcommand("eval", "Greedy success rate of a snapshot on a map");
    eval->add_option("--map", eval_map, "Map file")->required()->check(CLI::ExistingFile);
    eval->add_option("--snapshot", eval_snapshot, "Q-table snapshot")->required()->check(CLI::ExistingFile);
    eval->add_option("--flood", eval_flood, "Flood kind")->required();
    eval->add_option("--episodes", eval_episodes, "Episodes to run")->check(CLI::PositiveNumber);
    eval->add_option("--seed", eval_seed, "Evaluation seed");
    eval->add_option("--config", eval_config, "Config supplying flood/engine parameters")->check(CLI::ExistingFile);
    eval->add_option("--trace", eval_trace, "Write the first episode's trajectory here");
    eval_over.add_to(eval);

    // bench
    std::string bench_config, bench_out;
    int bench_threads = 0;
    auto* bench = app.add_subcommand("bench", "Run the full benchmark and write CSV + SVG results");
    bench->add_option("--config", bench_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    bench->add_option("--out-dir", bench_out, "Output directory")->required();
    bench->add_option("--threads", bench_threads, "Worker count (default: HAZARDGRID_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);

    // show-map
    std::string show_map, show_flood, show_config;
    int show_tick = 0;
    std::uint64_t show_seed = 1;
    FloodOverrides show_over;
    auto* show = app.add_subcommand("show-map", "Print a map with the hazard overlay at a tick");
    show->add_option("--map", show_map, "Map file")->required()->check(CLI::ExistingFile);
    show->add_option("--flood", show_flood, "Flood kind to overlay");
    show->add_option("--tick", show_tick, "Tick to show")->check(CLI::NonNegativeNumber);
    show->add_option("--seed", show_seed, "Flood seed (RandomPings)");
    show->add_option("--config", show_config, "Config supplying flood parameters")->check(CLI::ExistingFile);
    show_over.add_to(show);

    std::vector<const char*> argv;
    argv.push_back("hazardgrid");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 1;
    }

    try {
        if (*gen) {
            const Density density = parse_density(gen_density);
            std::filesystem::create_directories(gen_out);
            for (int i = 0; i < gen_count; ++i) {
                const GridMap map = generate_map(gen_size, gen_size, density, map_seed(gen_seed, gen_size, density, i));
                const auto path = (std::filesystem::path(gen_out) /
                                   ("map_" + std::to_string(gen_size) + "_" + gen_density + "_" + std::to_string(i) + ".txt"))
                                      .string();
                save_map(map, path);
                out << path << '\n';
            }
        } else if (*train) {
            const ExperimentConfig cfg = load_config(train_config);
            const int size = train_size > 0 ? train_size : cfg.map_sizes.front();
            const Density density = train_density.empty() ? cfg.densities.front() : parse_density(train_density);
            FloodKind kind = cfg.flood_kinds.front();
            if (!train_flood.empty())
                kind = parse_flood_kind(train_flood);
            const GridMap map = train_map.empty() ? benchmark_map(cfg, size, density, train_map_index) : load_map(train_map);
            const WorkUnit unit{map.width(), density, train_map_index, kind, train_rep};
            TrainingSetup setup = training_setup(cfg, kind);
            const TrainingRun run = train_unit(map, setup, child_seed(cfg.master_seed, unit));

            std::ofstream snap(train_snapshot, std::ios::binary);
            if (!snap)
                throw std::runtime_error("cannot write '" + train_snapshot + "'");
            write_snapshot(snap, run.tables);
            if (!train_out_map.empty())
                save_map(map, train_out_map);

            const auto curves = single_curve(run, setup, map.width(), density);
            out << "states " << run.tables.size(TableId::Q) << ' ' << run.tables.size(TableId::U) << '\n';
            out << "final_epoch_success_rate " << format_double(curves.front().rates.back()) << '\n';
        } else if (*eval) {
            const ExperimentConfig cfg = config_or_default(eval_config);
            const FloodKind kind = parse_flood_kind(eval_flood);
            const GridMap map = load_map(eval_map);
            std::ifstream snap(eval_snapshot);
            const QTablePair tables = read_snapshot(snap);
            TrainingSetup setup = training_setup(cfg, kind);
            setup.flood = eval_over.apply(cfg.flood_params(kind));
            std::ofstream trace_file;
            if (!eval_trace.empty()) {
                trace_file.open(eval_trace, std::ios::binary);
                if (!trace_file)
                    throw std::runtime_error("cannot write '" + eval_trace + "'");
            }
            const double rate = evaluate_greedy(map, setup, tables, eval_episodes, eval_seed,
                                                eval_trace.empty() ? nullptr : &trace_file);
            out << "success_rate " << format_double(rate) << '\n';
        } else if (*bench) {
            const ExperimentConfig cfg = load_config(bench_config);
            const BenchmarkOutput result = run_benchmark(cfg, bench_threads);
            write_benchmark_outputs(bench_out, result, cfg.episodes_per_epoch);
            for (const auto& c : result.curves)
                out << c.key.size << ' ' << to_string(c.key.density) << ' ' << to_string(c.key.kind)
                    << " final_epoch_success_rate " << format_double(c.rates.back()) << '\n';
        } else if (*show) {
            const GridMap map = load_map(show_map);
            std::string text = serialize_map(map);
            if (!show_flood.empty()) {
                const ExperimentConfig cfg = config_or_default(show_config);
                const FloodKind kind = parse_flood_kind(show_flood);
                FloodModel flood = flood_init(kind, show_over.apply(cfg.flood_params(kind)), map, show_seed);
                for (int t = 0; t < show_tick; ++t)
                    flood.advance();
                // Rows start after the header line; each row is width + 1 bytes.
                const std::size_t base = text.find('\n') + 1;
                for (int y = 0; y < map.height(); ++y)
                    for (int x = 0; x < map.width(); ++x)
                        if (flood.hazard_at({x, y}))
                            text[base + static_cast<std::size_t>(y * (map.width() + 1) + x)] = '#';
            }
            out << text;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace hazardgrid
