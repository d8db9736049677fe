#include "modeswitch/run_config.hpp"

#include "modeswitch/errors.hpp"
#include "modeswitch/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace modeswitch {

namespace {

namespace pt = boost::property_tree;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = text.find(sep);
        out.push_back(trim(text.substr(0, pos)));
        if (pos == std::string_view::npos) {
            return out;
        }
        text = text.substr(pos + 1);
    }
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError(key + ": " + what);
}

double to_double(std::string_view text, const std::string& key) {
    text = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        fail(key, "'" + std::string(text) + "' is not a finite number");
    }
    return v;
}

long long to_integer(std::string_view text, const std::string& key) {
    text = trim(text);
    long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        fail(key, "'" + std::string(text) + "' is not an integer");
    }
    return v;
}

Vector to_vector(std::string_view text, const std::string& key) {
    const auto parts = split(text, ',');
    Vector v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = to_double(parts[i], key);
    }
    return v;
}

// Rows separated by ';', entries by whitespace or ','.
Matrix to_matrix(std::string_view text, const std::string& key) {
    std::vector<std::vector<double>> rows;
    for (auto row_text : split(text, ';')) {
        std::vector<double> row;
        std::string row_str(row_text);
        for (char& c : row_str) {
            if (c == ',') {
                c = ' ';
            }
        }
        std::istringstream in(row_str);
        std::string tok;
        while (in >> tok) {
            row.push_back(to_double(tok, key));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail(key, "rows have different lengths");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty()) {
        fail(key, "empty matrix");
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

std::vector<ScheduleBlock> to_blocks(std::string_view text, const std::string& key) {
    std::vector<ScheduleBlock> blocks;
    for (auto item : split(text, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            fail(key, "expected mode:duration, got '" + std::string(item) + "'");
        }
        const long long mode = to_integer(item.substr(0, colon), key);
        const double duration = to_double(item.substr(colon + 1), key);
        if (mode < 0) {
            fail(key, "negative mode index");
        }
        if (duration < 0.0) {
            fail(key, "negative duration");
        }
        blocks.push_back({static_cast<ModeIndex>(mode), duration});
    }
    return blocks;
}

bool is_linear_key(const std::string& key) {
    if (key == "Q") {
        return true;
    }
    if (key.size() < 2 || (key[0] != 'A' && key[0] != 'b')) {
        return false;
    }
    return key.find_first_not_of("0123456789", 1) == std::string::npos;
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
    }

    const std::map<std::string, std::set<std::string>> allowed = {
        {"model", {"name", "x0"}},
        {"grid", {"T", "dt"}},
        {"schedule", {"blocks"}},
        {"optimizer",
         {"alpha", "beta", "eta", "max_iters", "d_tol", "max_backtracks", "selection_rule"}},
        {"output", {"dir"}},
        {"validation", {"seed"}},
    };

    RunConfig cfg;
    std::map<std::size_t, Matrix> a_by_mode;
    std::map<std::size_t, Vector> b_by_mode;
    std::optional<Matrix> q;

    for (const auto& [section, body] : tree) {
        const auto known = allowed.find(section);
        if (known == allowed.end()) {
            fail(section, body.empty() ? "keys must live inside a [section]" : "unknown section");
        }
        for (const auto& [key, node] : body) {
            const std::string name = section + "." + key;
            const std::string value = node.get_value<std::string>();
            const bool linear_key = section == "model" && is_linear_key(key);
            if (!known->second.contains(key) && !linear_key) {
                fail(name, "unknown key");
            }
            if (linear_key) {
                if (key == "Q") {
                    q = to_matrix(value, name);
                } else {
                    const auto index = static_cast<std::size_t>(to_integer(key.substr(1), name));
                    if (key[0] == 'A') {
                        a_by_mode[index] = to_matrix(value, name);
                    } else {
                        b_by_mode[index] = to_vector(value, name);
                    }
                }
            } else if (name == "model.name") {
                cfg.model = std::string(trim(value));
            } else if (name == "model.x0") {
                cfg.x0 = to_vector(value, name);
            } else if (name == "grid.T") {
                cfg.horizon = to_double(value, name);
            } else if (name == "grid.dt") {
                cfg.dt = to_double(value, name);
            } else if (name == "schedule.blocks") {
                cfg.blocks = to_blocks(value, name);
            } else if (name == "optimizer.alpha") {
                cfg.optimizer.alpha = to_double(value, name);
            } else if (name == "optimizer.beta") {
                cfg.optimizer.beta = to_double(value, name);
            } else if (name == "optimizer.eta") {
                cfg.optimizer.eta = to_double(value, name);
            } else if (name == "optimizer.max_iters") {
                cfg.optimizer.max_iters = static_cast<int>(to_integer(value, name));
            } else if (name == "optimizer.d_tol") {
                cfg.optimizer.d_tol = to_double(value, name);
            } else if (name == "optimizer.max_backtracks") {
                cfg.optimizer.max_backtracks = static_cast<int>(to_integer(value, name));
            } else if (name == "optimizer.selection_rule") {
                const auto rule = parse_selection_rule(trim(value));
                if (!rule) {
                    fail(name, "expected leftmost or most_negative_first");
                }
                cfg.optimizer.selection_rule = *rule;
            } else if (name == "output.dir") {
                cfg.output_dir = std::string(trim(value));
            } else if (name == "validation.seed") {
                const long long seed = to_integer(value, name);
                if (seed < 0) {
                    fail(name, "must be >= 0");
                }
                cfg.seed = static_cast<std::uint64_t>(seed);
            }
        }
    }

    try {
        cfg.warnings = cfg.optimizer.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("optimizer: ") + e.what());
    }
    if (cfg.horizon && !(*cfg.horizon > 0.0)) {
        fail("grid.T", "must be > 0");
    }
    if (cfg.dt && !(*cfg.dt > 0.0)) {
        fail("grid.dt", "must be > 0");
    }

    const bool any_linear = !a_by_mode.empty() || !b_by_mode.empty() || q.has_value();
    if (cfg.model == "linear") {
        if (a_by_mode.size() < 2 || !q) {
            fail("model", "a linear model needs A0, A1, ... and Q");
        }
        LinearModelConfig linear;
        for (std::size_t v = 0; v < a_by_mode.size(); ++v) {
            const auto a = a_by_mode.find(v);
            if (a == a_by_mode.end()) {
                fail("model.A" + std::to_string(v), "missing (modes must be numbered from 0)");
            }
            linear.a.push_back(a->second);
            const auto b = b_by_mode.find(v);
            linear.b.push_back(b == b_by_mode.end() ? Vector::Zero(a->second.rows()) : b->second);
        }
        if (b_by_mode.size() > a_by_mode.size()) {
            fail("model", "offset given for a mode without a matrix");
        }
        linear.q = *q;
        cfg.linear = std::move(linear);
        if (!cfg.x0 || !cfg.horizon || !cfg.dt) {
            fail("model", "a linear model needs model.x0, grid.T and grid.dt");
        }
    } else if (any_linear) {
        fail("model", "matrices are only accepted with name = linear");
    }

    // Resolving the problem here surfaces block and dimension errors at parse time.
    (void)build_problem(cfg);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IOError& e) {
        throw ConfigError(e.what());
    }
    return parse_run_config(text);
}

Problem build_problem(const RunConfig& config) {
    std::optional<ModelSpec> spec;
    std::optional<SwitchedSystem> system;
    try {
        if (config.model == "linear") {
            if (!config.linear) {
                fail("model", "linear model without matrices");
            }
            system = make_switched_linear(config.linear->a, config.linear->b, config.linear->q);
        } else {
            spec = make_builtin_model(config.model);
            system = spec->system;
        }
    } catch (const DimensionMismatch& e) {
        fail("model", e.what());
    } catch (const std::invalid_argument& e) {
        fail("model.name", e.what());
    }

    Vector x0 = config.x0 ? *config.x0 : spec->default_x0;
    if (x0.size() != static_cast<Eigen::Index>(system->state_dim())) {
        fail("model.x0", "expected " + std::to_string(system->state_dim()) + " components");
    }
    const double horizon = config.horizon ? *config.horizon : spec->default_horizon;
    const double dt = config.dt ? *config.dt : spec->default_dt;
    if (dt > horizon) {
        fail("grid.dt", "must not exceed grid.T");
    }
    const TimeGrid grid(horizon, dt);

    std::vector<ScheduleBlock> blocks;
    if (config.blocks) {
        blocks = *config.blocks;
    } else if (spec && !config.horizon) {
        blocks = spec->default_blocks;
    } else {
        blocks = {{0, horizon}};
    }
    try {
        Schedule initial = schedule_from_blocks(blocks, grid, system->mode_count());
        return {std::move(*system), std::move(x0), std::move(initial)};
    } catch (const BadBlocks& e) {
        fail("schedule.blocks", e.what());
    }
}

}  // namespace modeswitch
