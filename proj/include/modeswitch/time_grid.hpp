#pragma once

#include <cstddef>

namespace modeswitch {

/// Uniform grid on [0, T]. Cell i covers [i*dt, (i+1)*dt); samples are indexed 0..N.
///
/// The constructor rounds T/dt to the nearest cell count and then recomputes dt = T/N,
/// so N*dt reproduces T to rounding. A grid with N == 0 keeps the requested dt.
class TimeGrid {
public:
    TimeGrid(double horizon, double dt);

    static TimeGrid from_cells(double horizon, std::size_t n_cells);

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t n_cells() const noexcept { return n_cells_; }
    [[nodiscard]] std::size_t n_samples() const noexcept { return n_cells_ + 1; }

    [[nodiscard]] double time_at(std::size_t sample) const noexcept {
        return static_cast<double>(sample) * dt_;
    }

    /// Cell containing time t under the half-open convention; t == T maps to the last cell.
    [[nodiscard]] std::size_t cell_at(double t) const;

    /// Number of whole cells spanned by a duration (rounded to nearest).
    [[nodiscard]] std::size_t cells_for(double duration) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    TimeGrid() = default;

    double horizon_ = 0.0;
    double dt_ = 0.0;
    std::size_t n_cells_ = 0;
};

}  // namespace modeswitch
