#include "hazardgrid/grid.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>

using namespace hazardgrid;

namespace {

std::string empty_doc(int w, int h, Cell start, Cell goal)
{
    std::string doc = std::to_string(w) + " " + std::to_string(h) + "\n";
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x)
            doc += (Cell{x, y} == start) ? 'S' : (Cell{x, y} == goal) ? 'G' : '.';
        doc += '\n';
    }
    return doc;
}

GridError::Kind parse_error_kind(const std::string& doc)
{
    try {
        parse_map(doc);
    } catch (const GridError& e) {
        return e.kind();
    }
    FAIL("document was accepted: " << doc);
    return GridError::Kind::Precondition;
}

} // namespace

TEST_CASE("parse rejects maps below the minimum side")
{
    CHECK(parse_error_kind("3 1\n@.#\n") == GridError::Kind::TooSmall);
    CHECK(parse_error_kind("8 7\n") == GridError::Kind::TooSmall);
}

TEST_CASE("parse of an 8x8 open map with one start and one goal")
{
    const GridMap map = parse_map(empty_doc(8, 8, {7, 3}, {0, 5}));
    CHECK(map.cell_count() == 64);
    CHECK(map.obstacle_count() == 0);
    REQUIRE(map.start_pool().size() == 1);
    REQUIRE(map.safe_pool().size() == 1);
    CHECK(map.start_pool()[0] == Cell{7, 3});
    CHECK(map.safe_pool()[0] == Cell{0, 5});
}

TEST_CASE("parse errors carry distinct kinds")
{
    std::string doc = empty_doc(8, 8, {7, 0}, {0, 0});

    SUBCASE("foreign character names its row and column")
    {
        doc[doc.find('\n') + 1 + 2 * 9 + 3] = 'X';
        try {
            parse_map(doc);
            FAIL("accepted X");
        } catch (const GridError& e) {
            CHECK(e.kind() == GridError::Kind::Alphabet);
            CHECK(std::string(e.what()).find("row 2") != std::string::npos);
            CHECK(std::string(e.what()).find("column 3") != std::string::npos);
        }
    }
    SUBCASE("short row")
    {
        doc.erase(doc.find('\n') + 1, 1);
        CHECK(parse_error_kind(doc) == GridError::Kind::DimensionMismatch);
    }
    SUBCASE("missing row")
    {
        doc.erase(doc.rfind('\n', doc.size() - 2) + 1);
        CHECK(parse_error_kind(doc) == GridError::Kind::DimensionMismatch);
    }
    SUBCASE("extra row")
    {
        doc += "........\n";
        CHECK(parse_error_kind(doc) == GridError::Kind::DimensionMismatch);
    }
    SUBCASE("bad header")
    {
        CHECK(parse_error_kind("eight 8\n") == GridError::Kind::Header);
        CHECK(parse_error_kind("8\n") == GridError::Kind::Header);
        CHECK(parse_error_kind("") == GridError::Kind::Header);
    }
    SUBCASE("start outside its band")
    {
        doc = empty_doc(8, 8, {2, 2}, {0, 0});
        CHECK(parse_error_kind(doc) == GridError::Kind::PoolOutsideBand);
    }
}

TEST_CASE("empty pools are only an error when the map is used")
{
    const GridMap map = parse_map(empty_doc(8, 8, {-1, -1}, {0, 0}));
    try {
        map.require_pools();
        FAIL("no start pool accepted");
    } catch (const GridError& e) {
        CHECK(e.kind() == GridError::Kind::EmptyPool);
    }
}

TEST_CASE("hazard seeds parse as free terrain")
{
    std::string doc = empty_doc(8, 8, {7, 0}, {0, 0});
    doc[doc.find('\n') + 1 + 9 + 4] = '#';
    const GridMap map = parse_map(doc);
    REQUIRE(map.hazard_seeds().size() == 1);
    CHECK(map.hazard_seeds()[0] == Cell{4, 1});
    CHECK(map.is_free({4, 1}));
    CHECK(serialize_map(map) == doc);
}

TEST_CASE("serialize and parse round-trip")
{
    for (Density d : {Density::Sparse, Density::Dense})
        for (std::uint64_t seed : {1u, 7u, 99u}) {
            const GridMap map = generate_map(32, 24, d, seed);
            const std::string text = serialize_map(map);
            const GridMap back = parse_map(text);
            CHECK(serialize_map(back) == text);
            CHECK(std::equal(back.terrain().begin(), back.terrain().end(), map.terrain().begin(), map.terrain().end()));
            CHECK(back.start_pool().size() == map.start_pool().size());
            CHECK(back.safe_pool().size() == map.safe_pool().size());
        }
}

TEST_CASE("generation is a pure function of the seed")
{
    CHECK(serialize_map(generate_map(32, 32, Density::Sparse, 7)) ==
          serialize_map(generate_map(32, 32, Density::Sparse, 7)));
    CHECK(serialize_map(generate_map(32, 32, Density::Sparse, 7)) !=
          serialize_map(generate_map(32, 32, Density::Sparse, 8)));
}

TEST_CASE("generated obstacle counts and band layout")
{
    // 32 wide: bands of 8, so 16 middle columns x 32 rows = 512 cells.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GridMap dense = generate_map(32, 32, Density::Dense, seed);
        CHECK(dense.obstacle_count() == 102);
        const GridMap sparse = generate_map(32, 32, Density::Sparse, seed);
        CHECK(sparse.obstacle_count() == 25);

        for (const GridMap* m : {&dense, &sparse}) {
            CHECK(m->start_pool().size() == 8 * 32);
            CHECK(m->safe_pool().size() == 8 * 32);
            for (int y = 0; y < 32; ++y)
                for (int x : {0, 1, 6, 7, 24, 25, 30, 31})
                    CHECK(m->is_free({x, y}));
        }
    }
}

TEST_CASE("small generated maps connect some start to some goal")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const GridMap map = generate_map(8, 8, seed % 2 ? Density::Dense : Density::Sparse, seed);
        bool any = false;
        for (Cell s : map.start_pool())
            for (Cell g : map.safe_pool())
                any = any || oracle::bfs_length(map, s, g) >= 0;
        CHECK(any);
    }
}

TEST_CASE("shortest path basics")
{
    const GridMap map = parse_map(empty_doc(8, 8, {7, 7}, {0, 0}));
    CHECK(shortest_path(map, {3, 3}, {3, 3}) == 0);
    CHECK(shortest_path(map, {0, 0}, {7, 7}) == 7);
    CHECK(shortest_path(map, {0, 5}, {6, 2}) == 6);
}

TEST_CASE("shortest path through a wall gap matches brute force")
{
    std::string doc = empty_doc(8, 8, {7, 0}, {0, 0});
    const std::size_t row0 = doc.find('\n') + 1;
    for (int y = 0; y < 8; ++y)
        if (y != 6)
            doc[row0 + static_cast<std::size_t>(y * 9 + 4)] = '@';
    const GridMap map = parse_map(doc);

    for (int i = 0; i < map.cell_count(); ++i)
        for (int j = 0; j < map.cell_count(); ++j) {
            const Cell a = map.cell_at(i), b = map.cell_at(j);
            if (!map.is_free(a) || !map.is_free(b))
                continue;
            const auto got = shortest_path(map, a, b);
            const int want = oracle::bfs_length(map, a, b);
            REQUIRE(got.has_value() == (want >= 0));
            if (got)
                CHECK(*got == want);
        }
    CHECK(shortest_path(map, {0, 0}, {7, 0}) == 12); // detour through the gap at (4,6)
}

TEST_CASE("shortest path is symmetric and obeys the triangle inequality")
{
    const GridMap map = generate_map(16, 16, Density::Dense, 3);
    std::vector<Cell> free;
    for (int i = 0; i < map.cell_count(); i += 7)
        if (map.is_free(map.cell_at(i)))
            free.push_back(map.cell_at(i));
    for (Cell a : free)
        for (Cell b : free) {
            const auto ab = shortest_path(map, a, b);
            CHECK(ab == shortest_path(map, b, a));
            for (std::size_t k = 0; k < free.size(); k += 5) {
                const auto ak = shortest_path(map, a, free[k]);
                const auto kb = shortest_path(map, free[k], b);
                if (ak && kb) {
                    REQUIRE(ab.has_value());
                    CHECK(*ab <= *ak + *kb);
                }
            }
        }
}

TEST_CASE("shortest path preconditions")
{
    std::string doc = empty_doc(8, 8, {7, 0}, {0, 0});
    doc[doc.find('\n') + 1 + 9 * 3 + 3] = '@';
    const GridMap map = parse_map(doc);
    CHECK_THROWS_AS(shortest_path(map, {-1, 0}, {0, 0}), GridError);
    CHECK_THROWS_AS(shortest_path(map, {0, 0}, {3, 3}), GridError);
}

TEST_CASE("disconnected maps report no path")
{
    std::string doc = empty_doc(8, 8, {7, 0}, {0, 0});
    const std::size_t row0 = doc.find('\n') + 1;
    for (int y = 0; y < 8; ++y)
        doc[row0 + static_cast<std::size_t>(y * 9 + 4)] = '@';
    const GridMap map = parse_map(doc);
    CHECK_FALSE(shortest_path(map, {0, 0}, {7, 0}).has_value());
    CHECK_FALSE(pools_connected(map));
}
