#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hazardgrid {

struct Cell {
    int x = 0;
    int y = 0;
    friend bool operator==(Cell, Cell) = default;
};

enum class CellKind : std::uint8_t { Free, Obstacle };

enum class Density { Sparse, Dense };

std::string_view to_string(Density d);
Density parse_density(std::string_view name);

/// Obstacle share of the middle band, in percent.
int obstacle_percent(Density d);

class GridError : public std::runtime_error {
public:
    enum class Kind {
        Header,
        DimensionMismatch,
        Alphabet,
        TooSmall,
        PoolOutsideBand,
        EmptyPool,
        GenerationFailed,
        Precondition,
    };

    GridError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Static world: terrain plus the start (right band) and safe (left band)
/// pools. Immutable once built, so one instance is shared by every episode
/// and worker that runs on it.
class GridMap {
public:
    static constexpr int min_side = 8;

    /// Throws GridError when the dimensions, pools or terrain size are invalid.
    GridMap(int width, int height, std::vector<CellKind> terrain, std::vector<Cell> start_pool,
            std::vector<Cell> safe_pool, std::vector<Cell> hazard_seeds = {});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int cell_count() const noexcept { return width_ * height_; }

    /// Width of the start and safe column bands: ceil(width / 4).
    int band_width() const noexcept { return band_width_for(width_); }
    static int band_width_for(int width) noexcept { return (width + 3) / 4; }

    bool in_bounds(Cell c) const noexcept { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
    int index(Cell c) const noexcept { return c.y * width_ + c.x; }
    Cell cell_at(int index) const noexcept { return {index % width_, index / width_}; }

    CellKind terrain(Cell c) const { return terrain_[static_cast<std::size_t>(index(c))]; }
    bool is_free(Cell c) const noexcept { return in_bounds(c) && terrain_[static_cast<std::size_t>(index(c))] == CellKind::Free; }
    bool is_start(Cell c) const noexcept { return in_bounds(c) && role_[static_cast<std::size_t>(index(c))] == Role::Start; }
    bool is_safe(Cell c) const noexcept { return in_bounds(c) && role_[static_cast<std::size_t>(index(c))] == Role::Safe; }

    std::span<const CellKind> terrain() const noexcept { return terrain_; }
    std::span<const Cell> start_pool() const noexcept { return start_pool_; }
    std::span<const Cell> safe_pool() const noexcept { return safe_pool_; }
    /// Cells written as '#' in the source document. Diagnostic only.
    std::span<const Cell> hazard_seeds() const noexcept { return hazard_seeds_; }

    std::size_t obstacle_count() const noexcept;

    /// Throws GridError::EmptyPool when either pool is empty.
    void require_pools() const;

private:
    enum class Role : std::uint8_t { None, Start, Safe, HazardSeed };

    int width_;
    int height_;
    std::vector<CellKind> terrain_;
    std::vector<Role> role_;
    std::vector<Cell> start_pool_;
    std::vector<Cell> safe_pool_;
    std::vector<Cell> hazard_seeds_;

    friend std::string serialize_map(const GridMap& map);
};

/// Parses the `w h` header plus h rows over `@.#SG`. Each malformed input maps
/// to a distinct GridError kind.
GridMap parse_map(std::string_view text);
GridMap load_map(const std::string& path);

std::string serialize_map(const GridMap& map);
void save_map(const GridMap& map, const std::string& path);

/// Scatters obstacles uniformly over the middle band and fills both outer
/// bands into the pools. Retries with fresh sub-seeds until some start cell
/// reaches some safe cell; gives up after `generation_attempts`.
GridMap generate_map(int width, int height, Density density, std::uint64_t seed);
inline constexpr int generation_attempts = 100;

/// The 8 king moves; index matches the Action codes in engine.hpp.
inline constexpr Cell neighbor_offsets[8] = {
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1},
};

/// Length of the shortest 8-connected obstacle-avoiding path. Hazards are
/// ignored. Throws GridError::Precondition for endpoints that are out of
/// bounds or on obstacles.
std::optional<int> shortest_path(const GridMap& map, Cell from, Cell to);

/// Multi-source BFS distances from `sources` to every cell; -1 where
/// unreachable or obstacle.
std::vector<int> distance_field(const GridMap& map, std::span<const Cell> sources);

/// True when some start cell reaches some safe cell.
bool pools_connected(const GridMap& map);

} // namespace hazardgrid
