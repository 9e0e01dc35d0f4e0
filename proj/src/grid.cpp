#include "hazardgrid/grid.hpp"

#include "hazardgrid/rng.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>

namespace hazardgrid {

std::string_view to_string(Density d)
{
    return d == Density::Sparse ? "sparse" : "dense";
}

Density parse_density(std::string_view name)
{
    if (name == "sparse")
        return Density::Sparse;
    if (name == "dense")
        return Density::Dense;
    throw std::invalid_argument("unknown density '" + std::string(name) + "' (expected sparse|dense)");
}

int obstacle_percent(Density d)
{
    return d == Density::Sparse ? 5 : 20;
}

namespace {

std::string cell_text(Cell c)
{
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

} // namespace

GridMap::GridMap(int width, int height, std::vector<CellKind> terrain, std::vector<Cell> start_pool,
                 std::vector<Cell> safe_pool, std::vector<Cell> hazard_seeds)
    : width_(width), height_(height), terrain_(std::move(terrain)), start_pool_(std::move(start_pool)),
      safe_pool_(std::move(safe_pool)), hazard_seeds_(std::move(hazard_seeds))
{
    if (width_ < min_side || height_ < min_side)
        throw GridError(GridError::Kind::TooSmall, "map is " + std::to_string(width_) + "x" + std::to_string(height_) +
                                                       "; both sides must be at least " + std::to_string(min_side));
    if (terrain_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
        throw GridError(GridError::Kind::DimensionMismatch, "terrain holds " + std::to_string(terrain_.size()) +
                                                                " cells, expected width*height");

    role_.assign(terrain_.size(), Role::None);
    const int band = band_width();
    auto claim = [&](Cell c, Role role, const char* what) {
        if (!in_bounds(c) || this->terrain(c) != CellKind::Free)
            throw GridError(GridError::Kind::PoolOutsideBand,
                            std::string(what) + " cell " + cell_text(c) + " is not a free in-bounds cell");
        auto& slot = role_[static_cast<std::size_t>(index(c))];
        if (slot != Role::None)
            throw GridError(GridError::Kind::PoolOutsideBand, std::string(what) + " cell " + cell_text(c) + " listed twice");
        slot = role;
    };
    for (Cell c : start_pool_) {
        claim(c, Role::Start, "start");
        if (c.x < width_ - band)
            throw GridError(GridError::Kind::PoolOutsideBand,
                            "start cell " + cell_text(c) + " lies outside the rightmost " + std::to_string(band) + " columns");
    }
    for (Cell c : safe_pool_) {
        claim(c, Role::Safe, "safe");
        if (c.x >= band)
            throw GridError(GridError::Kind::PoolOutsideBand,
                            "safe cell " + cell_text(c) + " lies outside the leftmost " + std::to_string(band) + " columns");
    }
    for (Cell c : hazard_seeds_)
        claim(c, Role::HazardSeed, "hazard seed");
}

std::size_t GridMap::obstacle_count() const noexcept
{
    return static_cast<std::size_t>(std::count(terrain_.begin(), terrain_.end(), CellKind::Obstacle));
}

void GridMap::require_pools() const
{
    if (start_pool_.empty())
        throw GridError(GridError::Kind::EmptyPool, "map has no start cells ('S')");
    if (safe_pool_.empty())
        throw GridError(GridError::Kind::EmptyPool, "map has no safe cells ('G')");
}

GridMap parse_map(std::string_view text)
{
    auto next_line = [&text](std::string_view& line) {
        if (text.empty())
            return false;
        auto nl = text.find('\n');
        line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        return true;
    };

    std::string_view header;
    if (!next_line(header))
        throw GridError(GridError::Kind::Header, "empty document; expected a `w h` header");

    int w = 0, h = 0;
    {
        auto sp = header.find(' ');
        if (sp == std::string_view::npos)
            throw GridError(GridError::Kind::Header, "header must be two integers `w h`");
        auto parse_int = [](std::string_view s, int& out) {
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            return ec == std::errc{} && p == s.data() + s.size() && !s.empty();
        };
        if (!parse_int(header.substr(0, sp), w) || !parse_int(header.substr(sp + 1), h) || w <= 0 || h <= 0)
            throw GridError(GridError::Kind::Header, "header must be two positive integers `w h`");
    }
    if (w < GridMap::min_side || h < GridMap::min_side)
        throw GridError(GridError::Kind::TooSmall, "map is " + std::to_string(w) + "x" + std::to_string(h) +
                                                       "; both sides must be at least " + std::to_string(GridMap::min_side));

    std::vector<CellKind> terrain(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), CellKind::Free);
    std::vector<Cell> starts, safes, seeds;
    std::string_view line;
    for (int y = 0; y < h; ++y) {
        if (!next_line(line))
            throw GridError(GridError::Kind::DimensionMismatch,
                            "expected " + std::to_string(h) + " rows, found " + std::to_string(y));
        if (static_cast<int>(line.size()) != w)
            throw GridError(GridError::Kind::DimensionMismatch, "row " + std::to_string(y) + " has " +
                                                                    std::to_string(line.size()) + " characters, expected " +
                                                                    std::to_string(w));
        for (int x = 0; x < w; ++x) {
            const Cell c{x, y};
            switch (line[static_cast<std::size_t>(x)]) {
            case '.': break;
            case '@': terrain[static_cast<std::size_t>(y * w + x)] = CellKind::Obstacle; break;
            case '#': seeds.push_back(c); break;
            case 'S': starts.push_back(c); break;
            case 'G': safes.push_back(c); break;
            default:
                throw GridError(GridError::Kind::Alphabet, "unexpected character '" +
                                                               std::string(1, line[static_cast<std::size_t>(x)]) + "' at row " +
                                                               std::to_string(y) + ", column " + std::to_string(x));
            }
        }
    }
    if (!text.empty())
        throw GridError(GridError::Kind::DimensionMismatch, "trailing content after " + std::to_string(h) + " rows");

    return GridMap(w, h, std::move(terrain), std::move(starts), std::move(safes), std::move(seeds));
}

GridMap load_map(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open map file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_map(ss.str());
}

std::string serialize_map(const GridMap& map)
{
    std::string out = std::to_string(map.width_) + " " + std::to_string(map.height_) + "\n";
    out.reserve(out.size() + static_cast<std::size_t>((map.width_ + 1) * map.height_));
    for (int y = 0; y < map.height_; ++y) {
        for (int x = 0; x < map.width_; ++x) {
            const auto i = static_cast<std::size_t>(y * map.width_ + x);
            char ch = '.';
            if (map.terrain_[i] == CellKind::Obstacle)
                ch = '@';
            else if (map.role_[i] == GridMap::Role::Start)
                ch = 'S';
            else if (map.role_[i] == GridMap::Role::Safe)
                ch = 'G';
            else if (map.role_[i] == GridMap::Role::HazardSeed)
                ch = '#';
            out.push_back(ch);
        }
        out.push_back('\n');
    }
    return out;
}

void save_map(const GridMap& map, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write map file '" + path + "'");
    out << serialize_map(map);
}

namespace {

GridMap generate_attempt(int width, int height, Density density, std::uint64_t seed)
{
    const int band = GridMap::band_width_for(width);
    std::vector<int> middle;
    for (int y = 0; y < height; ++y)
        for (int x = band; x < width - band; ++x)
            middle.push_back(y * width + x);

    const std::size_t count = middle.size() * static_cast<std::size_t>(obstacle_percent(density)) / 100;

    // Partial Fisher-Yates: the first `count` slots become obstacles.
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        auto j = i + static_cast<std::size_t>(uniform_index(rng, middle.size() - i));
        std::swap(middle[i], middle[j]);
    }

    std::vector<CellKind> terrain(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), CellKind::Free);
    for (std::size_t i = 0; i < count; ++i)
        terrain[static_cast<std::size_t>(middle[i])] = CellKind::Obstacle;

    std::vector<Cell> starts, safes;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < band; ++x)
            safes.push_back({x, y});
        for (int x = width - band; x < width; ++x)
            starts.push_back({x, y});
    }
    return GridMap(width, height, std::move(terrain), std::move(starts), std::move(safes));
}

} // namespace

GridMap generate_map(int width, int height, Density density, std::uint64_t seed)
{
    if (width < GridMap::min_side || height < GridMap::min_side)
        throw GridError(GridError::Kind::TooSmall, "cannot generate a " + std::to_string(width) + "x" +
                                                       std::to_string(height) + " map; both sides must be at least " +
                                                       std::to_string(GridMap::min_side));
    for (int attempt = 0; attempt < generation_attempts; ++attempt) {
        auto map = generate_attempt(width, height, density, derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
        if (pools_connected(map))
            return map;
    }
    throw GridError(GridError::Kind::GenerationFailed, "no connected map after " + std::to_string(generation_attempts) +
                                                           " attempts (seed " + std::to_string(seed) + ")");
}

std::vector<int> distance_field(const GridMap& map, std::span<const Cell> sources)
{
    std::vector<int> dist(static_cast<std::size_t>(map.cell_count()), -1);
    std::deque<Cell> frontier;
    for (Cell s : sources) {
        if (!map.is_free(s))
            continue;
        auto& d = dist[static_cast<std::size_t>(map.index(s))];
        if (d != 0) {
            d = 0;
            frontier.push_back(s);
        }
    }
    while (!frontier.empty()) {
        const Cell c = frontier.front();
        frontier.pop_front();
        const int next = dist[static_cast<std::size_t>(map.index(c))] + 1;
        for (Cell off : neighbor_offsets) {
            const Cell n{c.x + off.x, c.y + off.y};
            if (!map.is_free(n))
                continue;
            auto& d = dist[static_cast<std::size_t>(map.index(n))];
            if (d < 0) {
                d = next;
                frontier.push_back(n);
            }
        }
    }
    return dist;
}

std::optional<int> shortest_path(const GridMap& map, Cell from, Cell to)
{
    for (Cell c : {from, to}) {
        if (!map.in_bounds(c))
            throw GridError(GridError::Kind::Precondition, "cell " + cell_text(c) + " is out of bounds");
        if (map.terrain(c) == CellKind::Obstacle)
            throw GridError(GridError::Kind::Precondition, "cell " + cell_text(c) + " is an obstacle");
    }
    const Cell sources[] = {from};
    const int d = distance_field(map, sources)[static_cast<std::size_t>(map.index(to))];
    if (d < 0)
        return std::nullopt;
    return d;
}

bool pools_connected(const GridMap& map)
{
    const auto dist = distance_field(map, map.start_pool());
    return std::any_of(map.safe_pool().begin(), map.safe_pool().end(),
                       [&](Cell c) { return dist[static_cast<std::size_t>(map.index(c))] >= 0; });
}

} // namespace hazardgrid
