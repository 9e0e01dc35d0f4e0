#include "hazardgrid/learn.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace hazardgrid {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& values, const char* what)
{
    for (E v : values)
        if (to_string(v) == s)
            return v;
    throw LearnError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

} // namespace

std::string_view to_string(UpdateRule r)
{
    switch (r) {
    case UpdateRule::DoubleQ: return "double_q";
    case UpdateRule::BoundaryDoubleQ: return "boundary_double_q";
    case UpdateRule::SingleQ: return "single_q";
    }
    return "?";
}

std::string_view to_string(Interleave i)
{
    return i == Interleave::Alternate ? "alternate" : "coin_flip";
}

std::string_view to_string(AlphaSchedule s)
{
    return s == AlphaSchedule::Constant ? "constant" : "inverse_visit";
}

std::string_view to_string(DecayMode m)
{
    return m == DecayMode::PerEpisode ? "per_episode" : "per_step";
}

UpdateRule parse_update_rule(std::string_view s)
{
    return parse_enum(s, std::array{UpdateRule::DoubleQ, UpdateRule::BoundaryDoubleQ, UpdateRule::SingleQ}, "update rule");
}

Interleave parse_interleave(std::string_view s)
{
    return parse_enum(s, std::array{Interleave::Alternate, Interleave::CoinFlip}, "interleave mode");
}

AlphaSchedule parse_alpha_schedule(std::string_view s)
{
    return parse_enum(s, std::array{AlphaSchedule::Constant, AlphaSchedule::InverseVisit}, "alpha schedule");
}

DecayMode parse_decay_mode(std::string_view s)
{
    return parse_enum(s, std::array{DecayMode::PerEpisode, DecayMode::PerStep}, "decay mode");
}

void LearnerConfig::validate() const
{
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw LearnError("alpha must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw LearnError("gamma must lie in [0, 1)");
    if (!(epsilon0 >= 0.0 && epsilon0 <= 1.0))
        throw LearnError("epsilon0 must lie in [0, 1]");
    if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0))
        throw LearnError("epsilon_decay must lie in (0, 1]");
    if (!(epsilon_min >= 0.0 && epsilon_min <= 1.0))
        throw LearnError("epsilon_min must lie in [0, 1]");
    if (update_rule == UpdateRule::BoundaryDoubleQ) {
        if (alpha_schedule != AlphaSchedule::Constant)
            throw LearnError("boundary rule needs a constant alpha");
        if (alpha * (1.0 + gamma) > 1.0)
            throw LearnError("boundary rule needs alpha * (1 + gamma) <= 1 to keep values in [0, 1]");
    }
}

bool operator==(const QTablePair& a, const QTablePair& b)
{
    auto same = [](const QTablePair::Table& x, const QTablePair::Table& y) {
        if (x.size() != y.size())
            return false;
        for (const auto& [key, row] : x) {
            auto it = y.find(key);
            if (it == y.end() || it->second.values != row.values)
                return false;
        }
        return true;
    };
    return a.turn_ == b.turn_ && same(a.tables_[0], b.tables_[0]) && same(a.tables_[1], b.tables_[1]);
}

const ActionValues& QTablePair::values(TableId id, std::string_view key) const
{
    static const ActionValues zeros{};
    const auto& t = table(id);
    auto it = t.find(key);
    return it == t.end() ? zeros : it->second.values;
}

QRow& QTablePair::row(TableId id, std::string_view key)
{
    auto& t = table(id);
    auto it = t.find(key);
    if (it == t.end())
        it = t.emplace(std::string(key), QRow{}).first;
    return it->second;
}

int argmax(const ActionValues& v) noexcept
{
    int best = 0;
    for (int i = 1; i < action_count; ++i)
        if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)])
            best = i;
    return best;
}

ActionValues q_values_for_selection(const QTablePair& tables, std::string_view key)
{
    const auto& q = tables.values(TableId::Q, key);
    const auto& u = tables.values(TableId::U, key);
    ActionValues mean;
    for (std::size_t i = 0; i < mean.size(); ++i)
        mean[i] = 0.5 * (q[i] + u[i]);
    return mean;
}

Action select_action(const ActionValues& values, double epsilon, Rng& rng)
{
    const double var = uniform01(rng);
    if (var > epsilon)
        return action_from_code(argmax(values));
    return action_from_code(static_cast<int>(uniform_index(rng, action_count)));
}

namespace {

void check_transition(const Transition& tr)
{
    if (!(tr.reward >= 0.0 && tr.reward <= 1.0))
        throw LearnError("reward " + std::to_string(tr.reward) + " outside [0, 1]");
    if (action_code(tr.action) < 0 || action_code(tr.action) >= action_count)
        throw LearnError("action code out of range");
}

double step_size(QRow& row, int action, const LearnerConfig& cfg)
{
    auto& n = row.visits[static_cast<std::size_t>(action)];
    ++n;
    return cfg.alpha_schedule == AlphaSchedule::InverseVisit ? 1.0 / static_cast<double>(n) : cfg.alpha;
}

void pass_turn(QTablePair& tables, const LearnerConfig& cfg, Rng& rng)
{
    if (cfg.interleave == Interleave::Alternate)
        tables.set_turn(other(tables.turn()));
    else
        tables.set_turn(uniform01(rng) < 0.5 ? TableId::Q : TableId::U);
}

/// Shared body of the two double-Q rules; `bounded` applies the (1 - Q) scale.
void double_q_step(QTablePair& tables, const Transition& tr, const LearnerConfig& cfg, Rng& rng, bool bounded)
{
    check_transition(tr);
    const TableId self = tables.turn();
    double target = tr.reward;
    if (!tr.terminal) {
        const int best = argmax(tables.values(self, tr.next_key));
        target += cfg.gamma * tables.values(other(self), tr.next_key)[static_cast<std::size_t>(best)];
    }
    QRow& row = tables.row(self, tr.key);
    const int a = action_code(tr.action);
    double& q = row.values[static_cast<std::size_t>(a)];
    double td = step_size(row, a, cfg) * (target - q);
    if (bounded)
        td *= 1.0 - q;
    q += td;
    pass_turn(tables, cfg, rng);
}

} // namespace

void update_double_q(QTablePair& tables, const Transition& tr, const LearnerConfig& cfg, Rng& rng)
{
    double_q_step(tables, tr, cfg, rng, false);
}

void update_boundary(QTablePair& tables, const Transition& tr, const LearnerConfig& cfg, Rng& rng)
{
    double_q_step(tables, tr, cfg, rng, true);
}

void update_single_q(QTablePair& tables, const Transition& tr, const LearnerConfig& cfg)
{
    check_transition(tr);
    double target = tr.reward;
    if (!tr.terminal) {
        const auto& next = tables.values(TableId::Q, tr.next_key);
        target += cfg.gamma * *std::max_element(next.begin(), next.end());
    }
    QRow& row = tables.row(TableId::Q, tr.key);
    const int a = action_code(tr.action);
    double& q = row.values[static_cast<std::size_t>(a)];
    q += step_size(row, a, cfg) * (target - q);
}

void apply_update(QTablePair& tables, const Transition& tr, const LearnerConfig& cfg, Rng& rng)
{
    switch (cfg.update_rule) {
    case UpdateRule::DoubleQ: update_double_q(tables, tr, cfg, rng); break;
    case UpdateRule::BoundaryDoubleQ: update_boundary(tables, tr, cfg, rng); break;
    case UpdateRule::SingleQ: update_single_q(tables, tr, cfg); break;
    }
}

double decay_epsilon(double epsilon, const LearnerConfig& cfg) noexcept
{
    return std::max(cfg.epsilon_min, epsilon * cfg.epsilon_decay);
}

void write_snapshot(std::ostream& out, const QTablePair& tables)
{
    char buf[40];
    for (TableId id : {TableId::Q, TableId::U}) {
        std::vector<const QTablePair::Table::value_type*> rows;
        rows.reserve(tables.size(id));
        for (const auto& entry : tables.table(id))
            rows.push_back(&entry);
        std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->first < b->first; });
        const char* tag = id == TableId::Q ? "Q" : "U";
        for (const auto* entry : rows) {
            out << tag << '\t' << entry->first;
            for (double v : entry->second.values) {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << '\t' << buf;
            }
            out << '\n';
        }
    }
}

std::string snapshot_text(const QTablePair& tables)
{
    std::ostringstream ss;
    write_snapshot(ss, tables);
    return ss.str();
}

QTablePair read_snapshot(std::istream& in)
{
    QTablePair tables;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (;;) {
            auto tab = rest.find('\t');
            fields.push_back(rest.substr(0, tab));
            if (tab == std::string_view::npos)
                break;
            rest.remove_prefix(tab + 1);
        }
        if (fields.size() != 2 + action_count || (fields[0] != "Q" && fields[0] != "U"))
            throw LearnError("snapshot line " + std::to_string(line_no) + " is malformed");
        QRow& row = tables.row(fields[0] == "Q" ? TableId::Q : TableId::U, fields[1]);
        for (int a = 0; a < action_count; ++a) {
            auto f = fields[static_cast<std::size_t>(2 + a)];
            double v = 0.0;
            auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || p != f.data() + f.size())
                throw LearnError("snapshot line " + std::to_string(line_no) + " has a bad value");
            row.values[static_cast<std::size_t>(a)] = v;
        }
    }
    return tables;
}

} // namespace hazardgrid
