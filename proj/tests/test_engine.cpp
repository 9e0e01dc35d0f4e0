#include "hazardgrid/engine.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace hazardgrid;

namespace {

GridMap open_map(int w, int h)
{
    std::vector<Cell> starts, safes;
    const int band = GridMap::band_width_for(w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < band; ++x) {
            safes.push_back({x, y});
            starts.push_back({w - 1 - x, y});
        }
    return GridMap(w, h, std::vector<CellKind>(static_cast<std::size_t>(w * h), CellKind::Free), starts, safes);
}

FloodParams no_flood()
{
    FloodParams p = default_flood_params(FloodKind::RandomPings);
    p.spawn_prob = 0;
    return p;
}

EpisodeState calm(const GridMap& map, Cell start, int budget = 1000)
{
    return reset_episode(map, FloodKind::RandomPings, no_flood(), start, budget, 1);
}

} // namespace

TEST_CASE("fresh episodes are running at tick zero")
{
    const GridMap map = open_map(16, 16);
    const auto s = calm(map, {15, 3});
    CHECK(s.running());
    CHECK(s.tick == 0);
    CHECK(s.agent == Cell{15, 3});
}

TEST_CASE("reset preconditions")
{
    const GridMap map = open_map(16, 16);
    CHECK_THROWS_AS(calm(map, {8, 8}), EngineError);
    CHECK_THROWS_AS(calm(map, {15, 3}, 0), EngineError);
}

TEST_CASE("a flood that already covers the start drowns at once")
{
    const GridMap map = open_map(16, 16);
    FloodParams p;
    p.r0 = std::sqrt(16.0 * 16.0 * 2);
    const auto s = reset_episode(map, FloodKind::CentralPing, p, {15, 15}, 100, 1);
    CHECK(s.status == EpisodeStatus::Drowned);
    CHECK_THROWS_AS(observe(s), EngineError);
}

TEST_CASE("open world observation")
{
    const GridMap map = open_map(32, 32);
    // No start cell near the center, so drive the agent there first.
    auto s = calm(map, {31, 16});
    for (int i = 0; i < 15; ++i)
        step(s, Action::W);
    REQUIRE(s.agent == Cell{16, 16});
    const Observation obs = observe(s);
    for (Feature f : obs.feature_map)
        CHECK(f == Feature::Free);
    CHECK(obs.sonar == std::array<int, 4>{8, 8, 8, 8});
    CHECK(obs.key == std::string(64, '0') + ":8,8,8,8");
}

TEST_CASE("window at the right border")
{
    const GridMap map = open_map(32, 32);
    const auto s = calm(map, {31, 10});
    const Observation obs = observe(s);
    for (int wy = 0; wy < window_side; ++wy)
        for (int wx = 0; wx < window_side; ++wx) {
            const int x = 31 + window_origin + wx;
            const int y = 10 + window_origin + wy;
            const bool outside = x > 31 || y < 0 || y > 31;
            CHECK(obs.at(wx, wy) == (outside ? Feature::Obstacle : Feature::Free));
        }
    CHECK(obs.at(4, 4) == Feature::Free);
    CHECK(obs.sonar[0] == 0);
    CHECK(obs.sonar[1] == 8);
    CHECK(obs.sonar[2] == 8);
    CHECK(obs.sonar[3] == 8);
}

TEST_CASE("hazard dominates obstacles and sonar stops at obstacles")
{
    std::string doc = "8 8\n";
    for (int y = 0; y < 8; ++y)
        doc += y == 2 ? "G..@..S.\n" : "G.....S.\n";
    const GridMap map = parse_map(doc);
    FloodParams p;
    p.r0 = 1.0;
    // The 8x8 central ping sits at (4,4); radius 1 stays clear of (3,2).
    auto s = reset_episode(map, FloodKind::CentralPing, p, {6, 2}, 50, 1);
    Observation obs = observe(s);
    // Agent at (6,2): window column wx maps to x = 2 + wx, row wy to y = -2 + wy.
    CHECK(obs.at(1, 4) == Feature::Obstacle); // (3,2), outside the ping
    CHECK(obs.sonar[1] == 2);                 // (5,2), (4,2) then the obstacle

    p.r0 = 2.5;
    s = reset_episode(map, FloodKind::CentralPing, p, {6, 2}, 50, 1);
    obs = observe(s);
    CHECK(obs.at(1, 4) == Feature::Hazard); // obstacle inside the ping
    CHECK(obs.at(2, 6) == Feature::Hazard); // (4,4), the center
    CHECK(obs.key.substr(65) == "1,2,5,2");
}

TEST_CASE("pool cells must lie in their bands")
{
    std::vector<Cell> starts{{7, 0}}, safes{{6, 0}};
    CHECK_THROWS_AS(GridMap(8, 8, std::vector<CellKind>(64, CellKind::Free), starts, safes), GridError);
}

TEST_CASE("one step west onto the safe band")
{
    // Bands on a 9-wide map are 3 columns wide.
    std::vector<Cell> starts{{6, 4}}, safes{{2, 4}};
    const GridMap map(9, 9, std::vector<CellKind>(81, CellKind::Free), starts, safes);
    auto s = calm(map, {6, 4});
    for (int i = 0; i < 3; ++i) {
        const auto r = step(s, Action::W);
        CHECK(r.reward == 0.0);
        CHECK_FALSE(r.terminal);
    }
    REQUIRE(s.agent == Cell{3, 4});
    const auto r = step(s, Action::W);
    CHECK(r.terminal);
    CHECK(r.reward == 1.0);
    CHECK(s.status == EpisodeStatus::Success);
    CHECK_THROWS_AS(step(s, Action::W), EngineError);
}

TEST_CASE("budget of one times out")
{
    const GridMap map = open_map(32, 32);
    auto s = calm(map, {31, 0}, 1);
    const auto r = step(s, Action::S);
    CHECK(r.terminal);
    CHECK(r.reward == 0.0);
    CHECK(s.status == EpisodeStatus::TimedOut);
    CHECK(s.tick == 1);
}

TEST_CASE("drowning wins over success on the same tick")
{
    const GridMap map = open_map(8, 8);
    FloodParams p;
    p.r0 = 0;
    p.delta_r = 3;
    auto s = reset_episode(map, FloodKind::CentralPing, p, {6, 0}, 100, 1);
    // Teleport next to the safe band; after one tick the ping (radius 3 at
    // (4,4)) reaches the safe cell (1,4) the agent steps onto.
    s.agent = {2, 4};
    const auto r = step(s, Action::W);
    CHECK(s.agent == Cell{1, 4});
    CHECK(map.is_safe(s.agent));
    CHECK(s.status == EpisodeStatus::Drowned);
    CHECK(r.reward == 0.0);
}

TEST_CASE("blocked moves leave the agent in place")
{
    std::string doc = "8 8\n";
    for (int y = 0; y < 8; ++y)
        doc += y == 3 ? "G....@S.\n" : "G.....S.\n";
    const GridMap map = parse_map(doc);
    auto s = calm(map, {6, 3});
    step(s, Action::W);
    CHECK(s.agent == Cell{6, 3});
    step(s, Action::NE);
    step(s, Action::NE);
    step(s, Action::N);
    CHECK(s.agent == Cell{7, 1}); // the second NE is blocked by the border
    CHECK(s.tick == 4);
}

TEST_CASE("following the BFS path succeeds in exactly its length")
{
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const GridMap map = generate_map(24, 20, seed % 2 ? Density::Dense : Density::Sparse, seed);
        const auto dist = distance_field(map, map.safe_pool());
        for (std::size_t k = 0; k < map.start_pool().size(); k += 17) {
            const Cell start = map.start_pool()[k];
            const int d = dist[static_cast<std::size_t>(map.index(start))];
            if (d < 0)
                continue;
            // Descend the distance field; the oracle checks its length independently.
            int best = -1;
            for (Cell g : map.safe_pool()) {
                const int len = oracle::bfs_length(map, start, g);
                if (len >= 0 && (best < 0 || len < best))
                    best = len;
            }
            CHECK(d == best);
            auto s = calm(map, start, 100000);
            int steps = 0;
            while (s.running()) {
                int pick = -1;
                for (int a = 0; a < action_count; ++a) {
                    const Cell off = neighbor_offsets[a];
                    const Cell n{s.agent.x + off.x, s.agent.y + off.y};
                    if (map.is_free(n) && dist[static_cast<std::size_t>(map.index(n))] ==
                                              dist[static_cast<std::size_t>(map.index(s.agent))] - 1) {
                        pick = a;
                        break;
                    }
                }
                REQUIRE(pick >= 0);
                step(s, action_from_code(pick));
                ++steps;
            }
            CHECK(s.status == EpisodeStatus::Success);
            CHECK(steps == best);
        }
    }
}

TEST_CASE("random trajectories respect terrain, budget and reward invariants")
{
    Rng rng(77);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const GridMap map = generate_map(16, 16, Density::Dense, seed);
        const FloodKind kind = all_flood_kinds[seed % 5];
        FloodParams p = default_flood_params(kind);
        p.delta_r = 0.3;
        p.delta_d = 0.3;
        p.spawn_prob = 0.2;
        const int budget = 60;
        auto s = reset_episode(map, kind, p, map.start_pool()[seed % map.start_pool().size()], budget, seed);
        double total = 0;
        int terminals = 0;
        while (s.running()) {
            const auto r = step(s, action_from_code(static_cast<int>(uniform_index(rng, 8))));
            CHECK(map.is_free(s.agent));
            CHECK((r.reward == 0.0 || r.reward == 1.0));
            total += r.reward;
            terminals += r.terminal;
        }
        CHECK(s.tick <= budget);
        CHECK(total <= 1.0);
        CHECK(terminals <= 1);
    }
}

TEST_CASE("flood-free episodes are deterministic")
{
    const GridMap map = generate_map(16, 16, Density::Dense, 4);
    const Action plan[] = {Action::W, Action::NW, Action::SW, Action::W, Action::N, Action::W, Action::S, Action::W};
    std::string traces[2];
    for (auto& trace : traces) {
        auto s = calm(map, map.start_pool()[5]);
        std::ostringstream out;
        for (int i = 0; i < 40 && s.running(); ++i) {
            const Action a = plan[i % 8];
            const auto r = step(s, a);
            write_trajectory_line(out, s, a, r.reward);
            if (s.running())
                out << observe_key(s) << '\n';
        }
        trace = out.str();
    }
    CHECK(traces[0] == traces[1]);
    CHECK_FALSE(traces[0].empty());
}

TEST_CASE("the fast key path matches observe")
{
    const GridMap map = generate_map(20, 20, Density::Dense, 8);
    FloodParams p = default_flood_params(FloodKind::RandomPings);
    p.spawn_prob = 0.5;
    p.delta_r = 0.5;
    EngineOptions opts;
    opts.key_flood_tag = true;
    auto s = reset_episode(map, FloodKind::RandomPings, p, map.start_pool()[0], 200, 3, opts);
    Rng rng(2);
    while (s.running()) {
        const Observation obs = observe(s);
        CHECK(obs.key == observe_key(s));
        CHECK(obs.key.ends_with("|random"));
        step(s, action_from_code(static_cast<int>(uniform_index(rng, 8))));
    }
}

TEST_CASE("step penalty is clamped into the reward range")
{
    const GridMap map = open_map(32, 32);
    EngineOptions opts;
    opts.step_penalty = 0.25;
    auto s = reset_episode(map, FloodKind::RandomPings, no_flood(), {31, 0}, 10, 1, opts);
    CHECK(step(s, Action::S).reward == 0.0);
}

TEST_CASE("trajectory lines")
{
    const GridMap map = open_map(32, 32);
    auto s = calm(map, {31, 0}, 1);
    const auto r = step(s, Action::SW);
    std::ostringstream out;
    write_trajectory_line(out, s, Action::SW, r.reward);
    CHECK(out.str() == "1 30 1 5 0 3\n");
}
