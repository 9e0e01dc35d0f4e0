#include "hazardgrid/engine.hpp"

#include <algorithm>
#include <charconv>

namespace hazardgrid {

std::string_view to_string(Action a)
{
    static constexpr std::string_view names[action_count] = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
    return names[action_code(a)];
}

std::string_view to_string(EpisodeStatus s)
{
    switch (s) {
    case EpisodeStatus::Running: return "running";
    case EpisodeStatus::Success: return "success";
    case EpisodeStatus::Drowned: return "drowned";
    case EpisodeStatus::TimedOut: return "timed_out";
    }
    return "?";
}

namespace {

constexpr Cell sonar_steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

void require_running(const EpisodeState& state, const char* op)
{
    if (!state.running())
        throw EngineError(std::string(op) + " called on a finished episode (status " +
                          std::string(to_string(state.status)) + ")");
}

Feature feature_at(const EpisodeState& state, Cell c)
{
    const GridMap& map = *state.map;
    if (!map.in_bounds(c))
        return Feature::Obstacle;
    if (state.flood.hazard_at_index(map.index(c)))
        return Feature::Hazard;
    return map.terrain(c) == CellKind::Obstacle ? Feature::Obstacle : Feature::Free;
}

int sonar_reading(const EpisodeState& state, Cell dir)
{
    int free_cells = 0;
    Cell c = state.agent;
    while (free_cells < state.options.sonar_cap) {
        c = {c.x + dir.x, c.y + dir.y};
        if (!state.map->is_free(c))
            break;
        ++free_cells;
    }
    return free_cells;
}

void append_int(std::string& out, int v)
{
    char buf[16];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, end);
}

void append_sonar_and_tag(std::string& out, const std::array<int, 4>& sonar, FloodKind kind, bool flood_tag)
{
    out.push_back(':');
    for (int i = 0; i < 4; ++i) {
        if (i > 0)
            out.push_back(',');
        append_int(out, sonar[static_cast<std::size_t>(i)]);
    }
    if (flood_tag) {
        out.push_back('|');
        out.append(to_string(kind));
    }
}

} // namespace

std::string observation_key(const Observation& obs, bool flood_tag)
{
    std::string key;
    key.reserve(window_side * window_side + 24);
    for (Feature f : obs.feature_map)
        key.push_back(static_cast<char>('0' + static_cast<int>(f)));
    append_sonar_and_tag(key, obs.sonar, obs.hazard_hint, flood_tag);
    return key;
}

EpisodeState reset_episode(const GridMap& map, FloodKind kind, const FloodParams& params, Cell start, int step_budget,
                           std::uint64_t seed, const EngineOptions& options)
{
    if (!map.is_start(start))
        throw EngineError("start cell (" + std::to_string(start.x) + "," + std::to_string(start.y) +
                          ") is not in the start pool");
    if (step_budget < 1)
        throw EngineError("step budget must be at least 1");
    if (options.sonar_cap < 0)
        throw EngineError("sonar cap must be non-negative");

    EpisodeState state{&map, flood_init(kind, params, map, seed), start, 0, step_budget, EpisodeStatus::Running, options};
    if (state.flood.hazard_at_index(map.index(start)))
        state.status = EpisodeStatus::Drowned;
    return state;
}

Observation observe(const EpisodeState& state)
{
    require_running(state, "observe");
    Observation obs;
    for (int wy = 0; wy < window_side; ++wy)
        for (int wx = 0; wx < window_side; ++wx)
            obs.feature_map[static_cast<std::size_t>(wy * window_side + wx)] =
                feature_at(state, {state.agent.x + window_origin + wx, state.agent.y + window_origin + wy});
    for (int d = 0; d < 4; ++d)
        obs.sonar[static_cast<std::size_t>(d)] = sonar_reading(state, sonar_steps[d]);
    obs.hazard_hint = state.flood.kind();
    obs.key = observation_key(obs, state.options.key_flood_tag);
    return obs;
}

std::string observe_key(const EpisodeState& state)
{
    require_running(state, "observe");
    std::string key;
    key.reserve(window_side * window_side + 24);
    for (int wy = 0; wy < window_side; ++wy)
        for (int wx = 0; wx < window_side; ++wx) {
            const Feature f = feature_at(state, {state.agent.x + window_origin + wx, state.agent.y + window_origin + wy});
            key.push_back(static_cast<char>('0' + static_cast<int>(f)));
        }
    std::array<int, 4> sonar{};
    for (int d = 0; d < 4; ++d)
        sonar[static_cast<std::size_t>(d)] = sonar_reading(state, sonar_steps[d]);
    append_sonar_and_tag(key, sonar, state.flood.kind(), state.options.key_flood_tag);
    return key;
}

StepResult step(EpisodeState& state, Action action)
{
    require_running(state, "step");
    const GridMap& map = *state.map;

    const Cell off = action_offset(action);
    const Cell target{state.agent.x + off.x, state.agent.y + off.y};
    if (map.is_free(target))
        state.agent = target;

    state.flood.advance();
    ++state.tick;

    double reward = 0.0;
    if (state.flood.hazard_at_index(map.index(state.agent))) {
        state.status = EpisodeStatus::Drowned;
    } else if (map.is_safe(state.agent)) {
        state.status = EpisodeStatus::Success;
        reward = 1.0;
    } else if (state.tick >= state.step_budget) {
        state.status = EpisodeStatus::TimedOut;
    }
    reward = std::clamp(reward - state.options.step_penalty, 0.0, 1.0);
    return {reward, !state.running()};
}

void write_trajectory_line(std::ostream& out, const EpisodeState& state, Action action, double reward)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, reward);
    out << state.tick << ' ' << state.agent.x << ' ' << state.agent.y << ' ' << action_code(action) << ' '
        << std::string_view(buf, static_cast<std::size_t>(end - buf)) << ' ' << static_cast<int>(state.status) << '\n';
}

} // namespace hazardgrid
