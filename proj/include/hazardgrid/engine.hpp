#pragma once

#include "hazardgrid/flood.hpp"
#include "hazardgrid/grid.hpp"

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hazardgrid {

/// Compass moves of the 3x3 mask minus its center. The integer codes index
/// Q-table rows and never change.
enum class Action : std::uint8_t { N = 0, NE = 1, E = 2, SE = 3, S = 4, SW = 5, W = 6, NW = 7 };

inline constexpr int action_count = 8;

inline Cell action_offset(Action a) noexcept { return neighbor_offsets[static_cast<int>(a)]; }
inline int action_code(Action a) noexcept { return static_cast<int>(a); }
inline Action action_from_code(int code) { return static_cast<Action>(code); }
std::string_view to_string(Action a);

/// Ternary codes of the feature map.
enum class Feature : std::uint8_t { Free = 0, Obstacle = 1, Hazard = 2 };

inline constexpr int window_side = 8;
/// Offset of the window's first row/column relative to the agent; the agent
/// sits at window index (4, 4).
inline constexpr int window_origin = -4;

enum class SonarDir : std::uint8_t { PlusX = 0, MinusX = 1, PlusY = 2, MinusY = 3 };

struct Observation {
    std::array<Feature, window_side * window_side> feature_map{}; ///< row-major, [wy * 8 + wx]
    std::array<int, 4> sonar{};                                   ///< +x, -x, +y, -y
    FloodKind hazard_hint = FloodKind::CentralPing;               ///< which flood the episode runs; metadata
    std::string key;

    Feature at(int wx, int wy) const { return feature_map[static_cast<std::size_t>(wy * window_side + wx)]; }
};

/// Canonical key: 64 feature digits, ':', the four sonar readings joined by
/// ',', and when `flood_tag` is set a trailing '|' plus the flood name.
std::string observation_key(const Observation& obs, bool flood_tag);

struct EngineOptions {
    int sonar_cap = 8;
    bool key_flood_tag = false;
    /// Subtracted from each step's reward before clamping into [0, 1].
    double step_penalty = 0.0;
};

enum class EpisodeStatus : std::uint8_t { Running, Success, Drowned, TimedOut };
std::string_view to_string(EpisodeStatus s);

class EngineError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// One episode on a shared immutable map. Status only leaves Running once.
struct EpisodeState {
    const GridMap* map = nullptr;
    FloodModel flood;
    Cell agent;
    int tick = 0;
    int step_budget = 0;
    EpisodeStatus status = EpisodeStatus::Running;
    EngineOptions options;

    int steps_remaining() const noexcept { return step_budget - tick; }
    bool running() const noexcept { return status == EpisodeStatus::Running; }
};

struct StepResult {
    double reward = 0.0;
    bool terminal = false;
};

/// Step budget factor * (w + h); the engine default factor is 4.
inline int default_step_budget(const GridMap& map, int factor = 4) { return factor * (map.width() + map.height()); }

/// Fresh tick-0 episode. A start cell that is already flooded ends the
/// episode as Drowned before any step. Throws EngineError if `start` is not in
/// the map's start pool or the budget is below 1.
EpisodeState reset_episode(const GridMap& map, FloodKind kind, const FloodParams& params, Cell start, int step_budget,
                           std::uint64_t seed, const EngineOptions& options = {});

/// Builds the observation the agent sees. Throws EngineError on a finished episode.
Observation observe(const EpisodeState& state);

/// Fast path for learners that only need the key.
std::string observe_key(const EpisodeState& state);

/// Move, then flood, then adjudicate (drowned before success before time-out).
/// Blocked moves leave the agent in place. Throws EngineError on a finished episode.
StepResult step(EpisodeState& state, Action action);

/// Trajectory dump line: `t agent_x agent_y action reward status`.
void write_trajectory_line(std::ostream& out, const EpisodeState& state, Action action, double reward);

} // namespace hazardgrid
