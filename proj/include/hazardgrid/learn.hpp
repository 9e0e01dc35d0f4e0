#pragma once

#include "hazardgrid/engine.hpp"
#include "hazardgrid/rng.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

namespace hazardgrid {

using ActionValues = std::array<double, action_count>;

enum class UpdateRule { DoubleQ, BoundaryDoubleQ, SingleQ };
enum class Interleave { Alternate, CoinFlip };
enum class AlphaSchedule { Constant, InverseVisit };
enum class DecayMode { PerEpisode, PerStep };

std::string_view to_string(UpdateRule r);
std::string_view to_string(Interleave i);
std::string_view to_string(AlphaSchedule s);
std::string_view to_string(DecayMode m);
UpdateRule parse_update_rule(std::string_view s);
Interleave parse_interleave(std::string_view s);
AlphaSchedule parse_alpha_schedule(std::string_view s);
DecayMode parse_decay_mode(std::string_view s);

class LearnError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct LearnerConfig {
    double alpha = 0.7;           ///< (0, 1]; ignored by InverseVisit
    double gamma = 0.8;           ///< [0, 1)
    double epsilon0 = 1.0;        ///< [0, 1]
    double epsilon_decay = 0.9985; ///< (0, 1]
    double epsilon_min = 0.0;     ///< >= 0
    UpdateRule update_rule = UpdateRule::DoubleQ;
    Interleave interleave = Interleave::Alternate;
    AlphaSchedule alpha_schedule = AlphaSchedule::Constant;
    DecayMode decay_mode = DecayMode::PerEpisode;

    /// Throws LearnError on any out-of-range field. The boundary rule also
    /// needs a constant alpha with alpha * (1 + gamma) <= 1; that bound is what
    /// keeps its values in [0, 1] when a non-terminal reward is positive.
    void validate() const;
};

/// Per-state storage: one value and one visit counter per action.
struct QRow {
    ActionValues values{};
    std::array<std::uint32_t, action_count> visits{};
};

enum class TableId : std::uint8_t { Q = 0, U = 1 };

/// The two dynamically grown tables Q and Q^u, keyed by observation key.
/// Rows appear zero-filled on first write.
class QTablePair {
public:
    struct KeyHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };
    using Table = std::unordered_map<std::string, QRow, KeyHash, std::equal_to<>>;

    const Table& table(TableId id) const noexcept { return tables_[static_cast<int>(id)]; }
    Table& table(TableId id) noexcept { return tables_[static_cast<int>(id)]; }

    /// Values for `key`, or all zeros when absent. Never inserts.
    const ActionValues& values(TableId id, std::string_view key) const;

    /// Row for `key`, inserting a zero row when absent.
    QRow& row(TableId id, std::string_view key);

    /// Which table the next double-Q update writes.
    TableId turn() const noexcept { return turn_; }
    void set_turn(TableId t) noexcept { turn_ = t; }

    std::size_t size(TableId id) const noexcept { return table(id).size(); }

    friend bool operator==(const QTablePair&, const QTablePair&);

private:
    std::array<Table, 2> tables_;
    TableId turn_ = TableId::Q;
};

inline TableId other(TableId id) noexcept { return id == TableId::Q ? TableId::U : TableId::Q; }

/// Lowest index among the maxima.
int argmax(const ActionValues& v) noexcept;

/// Elementwise mean of Q[key] and U[key]; zeros for missing rows.
ActionValues q_values_for_selection(const QTablePair& tables, std::string_view key);

/// Epsilon-greedy: draw var in [0, 1); exploit iff var > epsilon, else pick
/// one of the 8 actions uniformly.
Action select_action(const ActionValues& values, double epsilon, Rng& rng);

/// One observed transition. `next_key` is ignored when `terminal`.
struct Transition {
    std::string_view key;
    Action action = Action::N;
    double reward = 0.0;
    std::string_view next_key;
    bool terminal = false;
};

/// Double Q-learning update of the table whose turn it is:
/// a* = argmax A[s'], target = r + gamma * B[s'][a*] (r alone when terminal),
/// A[s][a] += alpha * (target - A[s][a]). Then the turn passes on. `rng` is
/// only drawn from under CoinFlip.
void update_double_q(QTablePair& tables, const Transition& tr, const LearnerConfig& cfg, Rng& rng);

/// As update_double_q, with the TD error scaled by (1 - A[s][a]) before it is
/// applied.
void update_boundary(QTablePair& tables, const Transition& tr, const LearnerConfig& cfg, Rng& rng);

/// Classical Q-learning on table Q only: target = r + gamma * max Q[s'].
void update_single_q(QTablePair& tables, const Transition& tr, const LearnerConfig& cfg);

/// Dispatches on cfg.update_rule.
void apply_update(QTablePair& tables, const Transition& tr, const LearnerConfig& cfg, Rng& rng);

/// max(epsilon_min, epsilon * epsilon_decay).
double decay_epsilon(double epsilon, const LearnerConfig& cfg) noexcept;

/// Snapshot lines `table_id<TAB>key<TAB>v0<TAB>...<TAB>v7`, values at 17
/// significant digits, sorted by (table_id, key).
void write_snapshot(std::ostream& out, const QTablePair& tables);
std::string snapshot_text(const QTablePair& tables);
QTablePair read_snapshot(std::istream& in);

} // namespace hazardgrid
