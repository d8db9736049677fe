#pragma once

#include "modeswitch/insertion_gradient.hpp"
#include "modeswitch/optimizer.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace modeswitch {

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_number(double v);

/// Writes to a sibling temporary file and renames it over `path`. Throws IOError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Columns: cell_index, t_start, mode.
[[nodiscard]] std::string schedule_csv(const Schedule& schedule);

/// Parses schedule CSV text produced by schedule_csv. Throws LengthMismatch when the row
/// count differs from grid.n_cells() (including an empty file) and IOError on malformed rows.
[[nodiscard]] Schedule parse_schedule_csv(std::string_view text, const TimeGrid& grid,
                                          std::size_t mode_count);

[[nodiscard]] Schedule read_schedule_csv(const std::filesystem::path& path, const TimeGrid& grid,
                                         std::size_t mode_count);

/// Columns: k, J, D_sigma, mu_eta, lambda, j_backtracks, switch_count, alt_opt.
[[nodiscard]] std::string trace_csv(const RunTrace& trace);

/// Columns: t, x1..xn, p1..pn, mode. The final sample repeats the last cell's mode.
[[nodiscard]] std::string trajectory_csv(const Trajectory& trajectory, const CostatePath& costate,
                                         const Schedule& schedule);

/// Columns: cell, t, D_sigma_s, w_star, in_eta_set.
[[nodiscard]] std::string profile_csv(const GradientProfile& profile, const TimeGrid& grid,
                                      const CellSet& eta_set);

/// JSON object with status, final_J, final_D_sigma, iterations (accepted steps), records,
/// wall_time_s and message.
[[nodiscard]] std::string summary_json(const RunTrace& trace);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace modeswitch
