#include "modeswitch/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace modeswitch {

TimeGrid::TimeGrid(double horizon, double dt) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("time grid: horizon must be finite and > 0");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("time grid: dt must be finite and > 0");
    }
    horizon_ = horizon;
    n_cells_ = static_cast<std::size_t>(std::llround(horizon / dt));
    dt_ = n_cells_ == 0 ? dt : horizon / static_cast<double>(n_cells_);
}

TimeGrid TimeGrid::from_cells(double horizon, std::size_t n_cells) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("time grid: horizon must be finite and > 0");
    }
    if (n_cells == 0) {
        throw std::invalid_argument("time grid: from_cells needs at least one cell");
    }
    TimeGrid grid;
    grid.horizon_ = horizon;
    grid.n_cells_ = n_cells;
    grid.dt_ = horizon / static_cast<double>(n_cells);
    return grid;
}

std::size_t TimeGrid::cell_at(double t) const {
    if (n_cells_ == 0 || t < 0.0 || t > horizon_) {
        throw std::out_of_range("time grid: time outside horizon");
    }
    auto cell = static_cast<std::size_t>(std::floor(t / dt_ + 1e-9));
    return cell >= n_cells_ ? n_cells_ - 1 : cell;
}

std::size_t TimeGrid::cells_for(double duration) const {
    if (duration < 0.0) {
        throw std::invalid_argument("time grid: negative duration");
    }
    return static_cast<std::size_t>(std::llround(duration / dt_));
}

}  // namespace modeswitch
