#include "modeswitch/io.hpp"

#include "modeswitch/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

namespace modeswitch {

std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string num(double v) { return format_number(v); }

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IOError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IOError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw IOError("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IOError("cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IOError("cannot open " + path.string() + ": " + std::strerror(errno));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string schedule_csv(const Schedule& schedule) {
    std::string out = "cell_index,t_start,mode\n";
    for (std::size_t i = 0; i < schedule.n_cells(); ++i) {
        out += std::to_string(i) + ',' + num(schedule.grid().time_at(i)) + ',' +
               std::to_string(schedule[i]) + '\n';
    }
    return out;
}

Schedule parse_schedule_csv(std::string_view text, const TimeGrid& grid, std::size_t mode_count) {
    std::vector<ModeIndex> modes;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line == "cell_index,t_start,mode") {
                continue;
            }
        }
        const auto fields = split(line, ',');
        if (fields.size() != 3) {
            throw IOError("schedule csv line " + std::to_string(line_no) + ": expected 3 columns");
        }
        std::size_t index = 0;
        ModeIndex mode = 0;
        const auto idx_field = trim(fields[0]);
        const auto mode_field = trim(fields[2]);
        if (std::from_chars(idx_field.data(), idx_field.data() + idx_field.size(), index).ec !=
                std::errc{} ||
            std::from_chars(mode_field.data(), mode_field.data() + mode_field.size(), mode).ec !=
                std::errc{}) {
            throw IOError("schedule csv line " + std::to_string(line_no) + ": malformed number");
        }
        if (index != modes.size()) {
            throw IOError("schedule csv line " + std::to_string(line_no) + ": cell indices must be consecutive");
        }
        modes.push_back(mode);
    }
    if (modes.size() != grid.n_cells()) {
        throw LengthMismatch("schedule csv has " + std::to_string(modes.size()) +
                             " cells, the grid has " + std::to_string(grid.n_cells()));
    }
    return Schedule(grid, std::move(modes), mode_count);
}

Schedule read_schedule_csv(const std::filesystem::path& path, const TimeGrid& grid,
                           std::size_t mode_count) {
    return parse_schedule_csv(read_text_file(path), grid, mode_count);
}

std::string trace_csv(const RunTrace& trace) {
    std::string out = "k,J,D_sigma,mu_eta,lambda,j_backtracks,switch_count,alt_opt\n";
    for (const auto& r : trace.records) {
        out += std::to_string(r.k) + ',' + num(r.cost) + ',' + num(r.d_sigma) + ',' + num(r.mu_eta) +
               ',' + num(r.lambda) + ',' + std::to_string(r.backtracks) + ',' +
               std::to_string(r.switch_count) + ',' + num(r.alt_optimality) + '\n';
    }
    return out;
}

std::string trajectory_csv(const Trajectory& trajectory, const CostatePath& costate,
                           const Schedule& schedule) {
    const auto n = trajectory.samples.rows();
    std::string out = "t";
    for (Eigen::Index i = 1; i <= n; ++i) {
        out += ",x" + std::to_string(i);
    }
    for (Eigen::Index i = 1; i <= n; ++i) {
        out += ",p" + std::to_string(i);
    }
    out += ",mode\n";
    const std::size_t cells = schedule.n_cells();
    for (std::size_t s = 0; s < trajectory.grid.n_samples(); ++s) {
        const auto col = static_cast<Eigen::Index>(s);
        out += num(trajectory.grid.time_at(s));
        for (Eigen::Index i = 0; i < n; ++i) {
            out += ',' + num(trajectory.samples(i, col));
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            out += ',' + num(costate.samples(i, col));
        }
        const std::size_t cell = cells == 0 ? 0 : std::min(s, cells - 1);
        out += ',' + (cells == 0 ? std::string("") : std::to_string(schedule[cell])) + '\n';
    }
    return out;
}

std::string profile_csv(const GradientProfile& profile, const TimeGrid& grid, const CellSet& eta_set) {
    std::string out = "cell,t,D_sigma_s,w_star,in_eta_set\n";
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        out += std::to_string(i) + ',' + num(grid.time_at(i)) + ',' + num(profile.values[i]) + ',' +
               std::to_string(profile.best_mode[i]) + ',' + (eta_set.contains(i) ? "1" : "0") + '\n';
    }
    return out;
}

std::string summary_json(const RunTrace& trace) {
    nlohmann::json j;
    j["status"] = std::string(to_string(trace.status));
    j["final_J"] = trace.final_cost;
    j["final_D_sigma"] = trace.final_d_sigma;
    j["iterations"] = std::count_if(trace.records.begin(), trace.records.end(),
                                    [](const IterationRecord& r) { return r.lambda > 0.0; });
    j["records"] = trace.records.size();
    j["wall_time_s"] = trace.wall_seconds;
    j["message"] = trace.message;
    return j.dump(2) + "\n";
}

}  // namespace modeswitch
