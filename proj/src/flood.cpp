#include "hazardgrid/flood.hpp"

#include <algorithm>
#include <string>

namespace hazardgrid {

std::string_view to_string(FloodKind kind)
{
    switch (kind) {
    case FloodKind::CentralPing: return "central";
    case FloodKind::TopRightPing: return "top_right";
    case FloodKind::BottomRightPing: return "bottom_right";
    case FloodKind::LinearVertical: return "linear";
    case FloodKind::RandomPings: return "random";
    }
    return "?";
}

FloodKind parse_flood_kind(std::string_view name)
{
    for (FloodKind k : all_flood_kinds)
        if (to_string(k) == name)
            return k;
    throw FloodError("unknown flood kind '" + std::string(name) +
                     "' (expected central|top_right|bottom_right|linear|random)");
}

bool is_ping_kind(FloodKind kind) noexcept
{
    return kind != FloodKind::LinearVertical;
}

void FloodParams::validate(FloodKind kind) const
{
    const std::string who(to_string(kind));
    if (!(r0 >= 0.0))
        throw FloodError(who + ": r0 must be >= 0");
    if (is_ping_kind(kind) && !(delta_r > 0.0))
        throw FloodError(who + ": delta_r must be > 0");
    if (kind == FloodKind::LinearVertical && !(delta_d > 0.0))
        throw FloodError(who + ": delta_d must be > 0");
    if (kind == FloodKind::RandomPings) {
        if (!(spawn_prob >= 0.0 && spawn_prob <= 1.0))
            throw FloodError(who + ": spawn_prob must lie in [0, 1]");
        if (max_spawn < 1 || max_spawn > 8)
            throw FloodError(who + ": max_spawn must lie in [1, 8]");
    }
}

FloodParams default_flood_params(FloodKind kind)
{
    FloodParams p;
    switch (kind) {
    case FloodKind::CentralPing:
    case FloodKind::TopRightPing:
    case FloodKind::BottomRightPing:
        p.r0 = 0.0;
        p.delta_r = 0.02;
        break;
    case FloodKind::LinearVertical:
        p.delta_d = 0.1;
        break;
    case FloodKind::RandomPings:
        p.r0 = 0.0;
        p.delta_r = 0.02;
        p.spawn_prob = 0.015;
        p.max_spawn = 3;
        break;
    }
    return p;
}

int ping_arrival(const Ping& ping, int x, int y, double r0, double delta_r) noexcept
{
    const int dx = x - ping.center.x;
    const int dy = y - ping.center.y;
    if (ping_covers(dx, dy, 0, r0, delta_r))
        return ping.birth_tick;
    if (!(delta_r > 0.0))
        return FloodModel::never;

    const double dist = std::sqrt(static_cast<double>(dx * dx + dy * dy));
    const double guess = std::ceil((dist - r0) / delta_r);
    if (guess > static_cast<double>(FloodModel::never / 2))
        return FloodModel::never;
    int age = std::max(0, static_cast<int>(guess));
    // The closed form can be one off under rounding; settle on the exact predicate.
    while (age > 0 && ping_covers(dx, dy, age - 1, r0, delta_r))
        --age;
    while (!ping_covers(dx, dy, age, r0, delta_r))
        ++age;
    if (age > FloodModel::never - 1 - ping.birth_tick)
        return FloodModel::never;
    return ping.birth_tick + age;
}

int front_arrival(int x, int width, double delta_d) noexcept
{
    if (!(delta_d > 0.0))
        return FloodModel::never;
    const double guess = std::ceil(static_cast<double>(width - x) / delta_d);
    if (guess > static_cast<double>(FloodModel::never / 2))
        return FloodModel::never;
    int tick = std::max(0, static_cast<int>(guess));
    while (tick > 0 && front_covers(x, width, tick - 1, delta_d))
        --tick;
    while (!front_covers(x, width, tick, delta_d))
        ++tick;
    return tick;
}

void stamp_ping_arrivals_serial(std::span<int> arrival, int width, int height, const Ping& ping, double r0,
                                double delta_r)
{
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            auto& slot = arrival[static_cast<std::size_t>(y * width + x)];
            slot = std::min(slot, ping_arrival(ping, x, y, r0, delta_r));
        }
    }
}

void stamp_ping_arrivals(std::span<int> arrival, int width, int height, const Ping& ping, double r0, double delta_r)
{
    constexpr int parallel_threshold = 128 * 128;
#pragma omp parallel for schedule(static) if (width * height >= parallel_threshold)
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            auto& slot = arrival[static_cast<std::size_t>(y * width + x)];
            slot = std::min(slot, ping_arrival(ping, x, y, r0, delta_r));
        }
    }
}

FloodModel::FloodModel(FloodKind kind, const FloodParams& params, int width, int height, std::uint64_t seed)
    : kind_(kind), params_(params), width_(width), height_(height),
      arrival_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), never), rng_(seed)
{
    params_.validate(kind_);
    if (width_ <= 0 || height_ <= 0)
        throw FloodError("flood grid must have positive dimensions");

    switch (kind_) {
    case FloodKind::CentralPing: stamp_ping({{width_ / 2, height_ / 2}, 0}); break;
    case FloodKind::TopRightPing: stamp_ping({{width_ - 1, 0}, 0}); break;
    case FloodKind::BottomRightPing: stamp_ping({{width_ - 1, height_ - 1}, 0}); break;
    case FloodKind::LinearVertical:
        for (int x = 0; x < width_; ++x) {
            const int t = front_arrival(x, width_, params_.delta_d);
            for (int y = 0; y < height_; ++y)
                arrival_[static_cast<std::size_t>(y * width_ + x)] = t;
        }
        break;
    case FloodKind::RandomPings: break;
    }
}

void FloodModel::stamp_ping(const Ping& ping)
{
    pings_.push_back(ping);
    stamp_ping_arrivals(arrival_, width_, height_, ping, params_.r0, params_.delta_r);
}

void FloodModel::advance()
{
    ++tick_;
    if (kind_ != FloodKind::RandomPings)
        return;
    // Existing pings grow implicitly through their age; new ones start at r0.
    if (uniform01(rng_) < params_.spawn_prob) {
        const auto count = 1 + static_cast<int>(uniform_index(rng_, static_cast<std::uint64_t>(params_.max_spawn)));
        for (int i = 0; i < count; ++i) {
            const int x = static_cast<int>(uniform_index(rng_, static_cast<std::uint64_t>(width_)));
            const int y = static_cast<int>(uniform_index(rng_, static_cast<std::uint64_t>(height_)));
            stamp_ping({{x, y}, tick_});
        }
    }
}

bool FloodModel::hazard_at(Cell c) const
{
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_)
        throw std::out_of_range("hazard_at: cell (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                                ") is out of bounds");
    return hazard_at_index(c.y * width_ + c.x);
}

std::vector<std::uint8_t> FloodModel::mask() const
{
    std::vector<std::uint8_t> out(arrival_.size());
    std::transform(arrival_.begin(), arrival_.end(), out.begin(), [this](int t) { return t <= tick_ ? 1 : 0; });
    return out;
}

std::size_t FloodModel::hazard_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(arrival_.begin(), arrival_.end(), [this](int t) { return t <= tick_; }));
}

FloodModel flood_init(FloodKind kind, const FloodParams& params, const GridMap& map, std::uint64_t seed)
{
    return FloodModel(kind, params, map.width(), map.height(), seed);
}

FloodModel flood_tick(FloodModel model)
{
    model.advance();
    return model;
}

bool hazard_at(const FloodModel& model, Cell c)
{
    return model.hazard_at(c);
}

} // namespace hazardgrid
