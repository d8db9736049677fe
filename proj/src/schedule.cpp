#include "modeswitch/schedule.hpp"

#include "modeswitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace modeswitch {

Schedule::Schedule(TimeGrid grid, std::vector<ModeIndex> cell_modes, std::size_t mode_count)
    : grid_(grid), modes_(std::move(cell_modes)), mode_count_(mode_count) {
    if (modes_.size() != grid_.n_cells()) {
        throw LengthMismatch("schedule: " + std::to_string(modes_.size()) + " cells for a grid of " +
                             std::to_string(grid_.n_cells()));
    }
    if (mode_count_ < 2) {
        throw std::invalid_argument("schedule: mode count must be >= 2");
    }
    for (ModeIndex m : modes_) {
        if (m >= mode_count_) {
            throw std::invalid_argument("schedule: mode index " + std::to_string(m) + " out of range");
        }
    }
}

Schedule Schedule::constant(TimeGrid grid, ModeIndex mode, std::size_t mode_count) {
    std::vector<ModeIndex> modes(grid.n_cells(), mode);
    return Schedule(grid, std::move(modes), mode_count);
}

std::vector<double> Schedule::switch_times() const {
    std::vector<double> times;
    for (std::size_t i = 1; i < modes_.size(); ++i) {
        if (modes_[i] != modes_[i - 1]) {
            times.push_back(grid_.time_at(i));
        }
    }
    return times;
}

CellSet::CellSet(std::vector<CellInterval> intervals) {
    intervals_.reserve(intervals.size());
    for (const auto& iv : intervals) {
        if (iv.begin >= iv.end) {
            throw std::invalid_argument("cell set: empty or reversed interval");
        }
        if (!intervals_.empty()) {
            auto& back = intervals_.back();
            if (iv.begin < back.end) {
                throw std::invalid_argument("cell set: intervals overlap or are unsorted");
            }
            if (iv.begin == back.end) {
                back.end = iv.end;
                continue;
            }
        }
        intervals_.push_back(iv);
    }
}

CellSet CellSet::from_cells(std::vector<std::size_t> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    std::vector<CellInterval> intervals;
    for (std::size_t c : cells) {
        if (!intervals.empty() && intervals.back().end == c) {
            ++intervals.back().end;
        } else {
            intervals.push_back({c, c + 1});
        }
    }
    return CellSet(std::move(intervals));
}

std::size_t CellSet::cell_count() const noexcept {
    std::size_t count = 0;
    for (const auto& iv : intervals_) {
        count += iv.end - iv.begin;
    }
    return count;
}

bool CellSet::contains(std::size_t cell) const noexcept {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), cell,
                               [](std::size_t c, const CellInterval& iv) { return c < iv.end; });
    return it != intervals_.end() && it->begin <= cell;
}

std::vector<std::size_t> CellSet::cells() const {
    std::vector<std::size_t> out;
    out.reserve(cell_count());
    for (const auto& iv : intervals_) {
        for (std::size_t c = iv.begin; c < iv.end; ++c) {
            out.push_back(c);
        }
    }
    return out;
}

CellSet CellSet::united_with(const CellSet& other) const {
    std::vector<CellInterval> all = intervals_;
    all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
    std::sort(all.begin(), all.end(),
              [](const CellInterval& a, const CellInterval& b) { return a.begin < b.begin; });
    std::vector<CellInterval> merged;
    for (const auto& iv : all) {
        if (!merged.empty() && iv.begin <= merged.back().end) {
            merged.back().end = std::max(merged.back().end, iv.end);
        } else {
            merged.push_back(iv);
        }
    }
    return CellSet(std::move(merged));
}

Schedule flip_set(const Schedule& schedule, const CellSet& set, std::span<const ModeIndex> targets) {
    if (set.upper_bound() > schedule.n_cells()) {
        throw OutOfRange("flip_set: set reaches cell " + std::to_string(set.upper_bound()) +
                         " past a grid of " + std::to_string(schedule.n_cells()));
    }
    const bool complement = targets.empty();
    if (complement && schedule.mode_count() != 2) {
        throw std::invalid_argument("flip_set: complement is only defined for two modes");
    }
    if (!complement && targets.size() != schedule.n_cells()) {
        throw LengthMismatch("flip_set: target map must have one entry per cell");
    }
    std::vector<ModeIndex> modes(schedule.cell_modes().begin(), schedule.cell_modes().end());
    for (const auto& iv : set.intervals()) {
        for (std::size_t c = iv.begin; c < iv.end; ++c) {
            modes[c] = complement ? 1 - modes[c] : targets[c];
        }
    }
    return Schedule(schedule.grid(), std::move(modes), schedule.mode_count());
}

std::size_t switch_count(const Schedule& schedule) {
    const auto modes = schedule.cell_modes();
    if (modes.empty()) {
        return 1;
    }
    std::size_t count = 1;
    for (std::size_t i = 1; i < modes.size(); ++i) {
        count += modes[i] != modes[i - 1] ? 1 : 0;
    }
    return count;
}

Schedule schedule_from_blocks(std::span<const ScheduleBlock> blocks, const TimeGrid& grid,
                              std::size_t mode_count) {
    if (blocks.empty()) {
        throw BadBlocks("schedule blocks: at least one block is required");
    }
    double total = 0.0;
    for (const auto& b : blocks) {
        if (!(b.duration >= 0.0) || !std::isfinite(b.duration)) {
            throw BadBlocks("schedule blocks: durations must be finite and non-negative");
        }
        if (b.mode >= mode_count) {
            throw BadBlocks("schedule blocks: mode " + std::to_string(b.mode) + " does not exist");
        }
        total += b.duration;
    }
    if (std::abs(total - grid.horizon()) > 1e-9) {
        throw BadBlocks("schedule blocks: durations sum to " + std::to_string(total) +
                        " but the horizon is " + std::to_string(grid.horizon()));
    }

    std::vector<ModeIndex> modes;
    modes.reserve(grid.n_cells());
    double elapsed = 0.0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        elapsed += blocks[k].duration;
        const std::size_t boundary = k + 1 == blocks.size()
                                         ? grid.n_cells()
                                         : std::min(grid.n_cells(), grid.cells_for(elapsed));
        while (modes.size() < boundary) {
            modes.push_back(blocks[k].mode);
        }
    }
    return Schedule(grid, std::move(modes), mode_count);
}

std::vector<ScheduleBlock> schedule_blocks(const Schedule& schedule) {
    std::vector<ScheduleBlock> blocks;
    const double dt = schedule.grid().dt();
    for (std::size_t i = 0; i < schedule.n_cells(); ++i) {
        if (blocks.empty() || blocks.back().mode != schedule[i]) {
            blocks.push_back({schedule[i], 0.0});
        }
        blocks.back().duration += dt;
    }
    return blocks;
}

}  // namespace modeswitch
