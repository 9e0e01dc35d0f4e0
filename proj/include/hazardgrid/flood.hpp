#pragma once

#include "hazardgrid/grid.hpp"
#include "hazardgrid/rng.hpp"

#include <climits>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace hazardgrid {

/// The five hazard dynamics.
enum class FloodKind { CentralPing, TopRightPing, BottomRightPing, LinearVertical, RandomPings };

inline constexpr FloodKind all_flood_kinds[] = {FloodKind::CentralPing, FloodKind::TopRightPing, FloodKind::BottomRightPing,
                                                FloodKind::LinearVertical, FloodKind::RandomPings};

/// Short names used in configs, CSVs and on the command line:
/// central, top_right, bottom_right, linear, random.
std::string_view to_string(FloodKind kind);
FloodKind parse_flood_kind(std::string_view name);

bool is_ping_kind(FloodKind kind) noexcept;

class FloodError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct FloodParams {
    double r0 = 0.0;          ///< initial ping radius, cells
    double delta_r = 0.02;    ///< ping radius growth per tick, cells
    double delta_d = 0.1;     ///< linear front advance per tick, columns
    double spawn_prob = 0.015; ///< chance a RandomPings tick spawns pings
    int max_spawn = 3;        ///< pings spawned on such a tick are uniform in [1, max_spawn]

    /// Throws FloodError when a field the kind relies on is out of range.
    void validate(FloodKind kind) const;

    friend bool operator==(const FloodParams&, const FloodParams&) = default;
};

/// Desk-scale defaults for each kind.
FloodParams default_flood_params(FloodKind kind);

/// A circular hazard that appears at `birth_tick` with radius r0 and grows by
/// delta_r per tick after that.
struct Ping {
    Cell center;
    int birth_tick = 0;
};

/// Euclidean disc test shared by every ping computation:
/// sqrt(dx^2 + dy^2) <= r0 + age * delta_r.
inline bool ping_covers(int dx, int dy, int age, double r0, double delta_r) noexcept
{
    const double radius = r0 + static_cast<double>(age) * delta_r;
    return std::sqrt(static_cast<double>(dx * dx + dy * dy)) <= radius;
}

/// Linear front rule: column x is flooded at tick t iff x >= w - floor(t * delta_d).
inline bool front_covers(int x, int width, int tick, double delta_d) noexcept
{
    const double advanced = std::floor(static_cast<double>(tick) * delta_d);
    return static_cast<double>(x) >= static_cast<double>(width) - advanced;
}

/// Evolving hazard mask over a w x h grid.
///
/// The mask is monotone, so each cell is stored as the first tick at which
/// it floods (`never` if not yet scheduled). A cell is hazarded at tick t iff
/// its arrival tick is <= t. Fixed-origin kinds precompute every arrival at
/// construction; RandomPings folds each new ping in as it spawns.
class FloodModel {
public:
    static constexpr int never = INT_MAX;

    FloodModel(FloodKind kind, const FloodParams& params, int width, int height, std::uint64_t seed);

    FloodKind kind() const noexcept { return kind_; }
    const FloodParams& params() const noexcept { return params_; }
    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int tick() const noexcept { return tick_; }
    const std::vector<Ping>& pings() const noexcept { return pings_; }

    /// Advances one tick. RandomPings draws u in [0,1); when u < spawn_prob it
    /// spawns between 1 and max_spawn pings at uniform cells.
    void advance();

    bool hazard_at(Cell c) const;
    bool hazard_at_index(int index) const noexcept { return arrival_[static_cast<std::size_t>(index)] <= tick_; }
    std::vector<std::uint8_t> mask() const;
    std::size_t hazard_count() const noexcept;

    std::span<const int> arrival_ticks() const noexcept { return arrival_; }

private:
    void stamp_ping(const Ping& ping);

    FloodKind kind_;
    FloodParams params_;
    int width_;
    int height_;
    int tick_ = 0;
    std::vector<Ping> pings_;
    std::vector<int> arrival_;
    Rng rng_;
};

/// Tick-0 model. The map only contributes its dimensions.
FloodModel flood_init(FloodKind kind, const FloodParams& params, const GridMap& map, std::uint64_t seed);

/// Copying form of FloodModel::advance.
FloodModel flood_tick(FloodModel model);

bool hazard_at(const FloodModel& model, Cell c);

/// First tick at which `ping` covers (x, y), or FloodModel::never when the
/// radius never grows (delta_r == 0) and the cell is outside r0.
int ping_arrival(const Ping& ping, int x, int y, double r0, double delta_r) noexcept;

/// First tick at which the linear front reaches column x.
int front_arrival(int x, int width, double delta_d) noexcept;

/// Fills `arrival` (w*h, row-major) with min(current, ping arrival) for every
/// cell. Parallelised over rows with OpenMP when the grid is large enough.
void stamp_ping_arrivals(std::span<int> arrival, int width, int height, const Ping& ping, double r0, double delta_r);

/// Serial reference for stamp_ping_arrivals, kept for equivalence tests and
/// the benchmark.
void stamp_ping_arrivals_serial(std::span<int> arrival, int width, int height, const Ping& ping, double r0,
                                double delta_r);

} // namespace hazardgrid
