#pragma once

#include "modeswitch/switched_system.hpp"
#include "modeswitch/time_grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace modeswitch {

/// Piecewise-constant mode assignment, one mode index per grid cell.
///
/// A grid schedule always has finitely many switches (at most N - 1), so every value of
/// this type is admissible.
class Schedule {
public:
    Schedule(TimeGrid grid, std::vector<ModeIndex> cell_modes, std::size_t mode_count);

    /// Every cell in mode `mode`.
    static Schedule constant(TimeGrid grid, ModeIndex mode, std::size_t mode_count);

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t n_cells() const noexcept { return modes_.size(); }
    [[nodiscard]] std::size_t mode_count() const noexcept { return mode_count_; }
    [[nodiscard]] ModeIndex operator[](std::size_t cell) const noexcept { return modes_[cell]; }
    [[nodiscard]] std::span<const ModeIndex> cell_modes() const noexcept { return modes_; }

    /// Switching instants tau_1..tau_{l-1}: start times of every cell whose mode differs
    /// from its predecessor.
    [[nodiscard]] std::vector<double> switch_times() const;

    friend bool operator==(const Schedule&, const Schedule&) = default;

private:
    TimeGrid grid_;
    std::vector<ModeIndex> modes_;
    std::size_t mode_count_;
};

struct CellInterval {
    std::size_t begin;
    std::size_t end;  // exclusive

    friend bool operator==(const CellInterval&, const CellInterval&) = default;
};

/// Finite union of disjoint, sorted, nonempty cell intervals [begin, end).
class CellSet {
public:
    CellSet() = default;

    /// Throws std::invalid_argument unless intervals are nonempty, sorted and disjoint.
    /// Touching intervals are merged.
    explicit CellSet(std::vector<CellInterval> intervals);

    /// Builds the set from arbitrary cell indices (duplicates allowed).
    static CellSet from_cells(std::vector<std::size_t> cells);

    [[nodiscard]] const std::vector<CellInterval>& intervals() const noexcept { return intervals_; }
    [[nodiscard]] bool empty() const noexcept { return intervals_.empty(); }
    [[nodiscard]] std::size_t cell_count() const noexcept;
    [[nodiscard]] double measure(double dt) const noexcept {
        return static_cast<double>(cell_count()) * dt;
    }
    [[nodiscard]] bool contains(std::size_t cell) const noexcept;
    [[nodiscard]] std::vector<std::size_t> cells() const;
    [[nodiscard]] std::size_t upper_bound() const noexcept {
        return intervals_.empty() ? 0 : intervals_.back().end;
    }

    [[nodiscard]] CellSet united_with(const CellSet& other) const;

    friend bool operator==(const CellSet&, const CellSet&) = default;

private:
    std::vector<CellInterval> intervals_;
};

/// Schedule equal to `schedule` except on `set`, where each cell takes `targets[cell]`
/// when a per-cell target map is given and the complementary mode otherwise (bimodal only).
/// Throws OutOfRange if the set reaches past the last cell.
[[nodiscard]] Schedule flip_set(const Schedule& schedule, const CellSet& set,
                                std::span<const ModeIndex> targets = {});

/// l(sigma): number of maximal constant-mode blocks.
[[nodiscard]] std::size_t switch_count(const Schedule& schedule);

struct ScheduleBlock {
    ModeIndex mode;
    double duration;
};

/// Fills cells left to right from (mode, duration) blocks. Block boundaries are rounded to
/// the nearest cell boundary and the last block absorbs the remainder.
/// Throws BadBlocks on negative durations, a duration sum differing from T by more than
/// 1e-9, or an unknown mode.
[[nodiscard]] Schedule schedule_from_blocks(std::span<const ScheduleBlock> blocks,
                                            const TimeGrid& grid, std::size_t mode_count);

/// Maximal runs of the schedule as (mode, duration) blocks.
[[nodiscard]] std::vector<ScheduleBlock> schedule_blocks(const Schedule& schedule);

}  // namespace modeswitch
