#include "levysim/experiments/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "levysim/errors.hpp"

namespace levysim::experiments {

namespace {

const std::pair<ExperimentKind, const char*> kNames[] = {
    {ExperimentKind::CltCheck, "clt-check"},
    {ExperimentKind::CltLowerBound, "clt-lower-bound"},
    {ExperimentKind::SchemeRate, "scheme-rate"},
    {ExperimentKind::EulerBaseline, "euler-baseline"},
    {ExperimentKind::NeglectVsGauss, "neglect-vs-gauss"},
    {ExperimentKind::BrownianApprox, "brownian-approx"},
    {ExperimentKind::CostAudit, "cost-audit"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& section, const std::string& key, const std::string& raw) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] key '" + key + "': cannot parse '" + raw +
                          "' as a number");
    }
}

/// Key/value view of one section; getters consume keys, finish() rejects
/// whatever is left so typos never pass silently.
class KeyValues {
public:
    KeyValues(std::string section, std::map<std::string, std::string> kv)
        : section_(std::move(section)), kv_(std::move(kv)) {}

    std::optional<std::string> take(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        std::string v = it->second;
        kv_.erase(it);
        return v;
    }

    std::string take_required(const std::string& key) {
        auto v = take(key);
        if (!v) throw ConfigError("[" + section_ + "] missing required key '" + key + "'");
        return *v;
    }

    std::string take_string(const std::string& key, const std::string& fallback) {
        auto v = take(key);
        return v ? *v : fallback;
    }

    double take_double(const std::string& key, double fallback) {
        auto v = take(key);
        return v ? parse_double(section_, key, *v) : fallback;
    }

    double take_required_double(const std::string& key) {
        return parse_double(section_, key, take_required(key));
    }

    std::int64_t take_int(const std::string& key, std::int64_t fallback) {
        const double v = take_double(key, static_cast<double>(fallback));
        if (v != std::floor(v))
            throw ConfigError("[" + section_ + "] key '" + key + "' must be an integer");
        return static_cast<std::int64_t>(v);
    }

    std::vector<double> take_grid(const std::string& key) {
        auto raw = take(key);
        if (!raw) return {};
        std::vector<double> grid;
        std::stringstream ss(*raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty())
                throw ConfigError("[" + section_ + "] key '" + key + "' has an empty entry");
            grid.push_back(parse_double(section_, key, item));
        }
        if (grid.empty())
            throw ConfigError("[" + section_ + "] key '" + key + "' must list values");
        validate_monotone(key, grid);
        return grid;
    }

    void validate_monotone(const std::string& key, const std::vector<double>& grid) const {
        if (grid.size() < 2) return;
        const bool inc = grid[1] > grid[0];
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const bool step_inc = grid[i] > grid[i - 1];
            if (grid[i] == grid[i - 1] || step_inc != inc)
                throw ConfigError("[" + section_ + "] grid '" + key +
                                  "' must be strictly monotone");
        }
    }

    const std::string& section() const { return section_; }

    void finish() const {
        if (kv_.empty()) return;
        std::string keys;
        for (const auto& [k, v] : kv_) keys += (keys.empty() ? "" : ", ") + k;
        throw ConfigError("[" + section_ + "] unknown key(s): " + keys);
    }

private:
    std::string section_;
    std::map<std::string, std::string> kv_;
};

std::vector<PoissonAtom> parse_atoms(const std::string& section, const std::string& raw) {
    std::vector<PoissonAtom> atoms;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("[" + section + "] atoms entries must look like 'z:rate'");
        atoms.push_back({parse_double(section, "atoms", trim(item.substr(0, colon))),
                         parse_double(section, "atoms", trim(item.substr(colon + 1)))});
    }
    return atoms;
}

// Driver keys: family (+ its parameters), drift, Brownian coefficient, sigma.
void read_driver(KeyValues& kv, ExperimentConfig& cfg, bool need_family) {
    cfg.family = kv.take_string("family", need_family ? "" : "none");
    if (need_family && cfg.family.empty())
        throw ConfigError("[" + kv.section() + "] missing required key 'family'");

    LevyMeasureSpec nu = LevyMeasureSpec::none();
    if (cfg.family == "two-point") {
        nu = LevyMeasureSpec::two_point(kv.take_required_double("eps0"));
    } else if (cfg.family == "stable") {
        nu = LevyMeasureSpec::stable(kv.take_required_double("alpha"), kv.take_double("c", 1.0),
                                     kv.take_double("R", 1.0));
    } else if (cfg.family == "compound-poisson") {
        nu = LevyMeasureSpec::compound_poisson(
            parse_atoms(kv.section(), kv.take_required("atoms")));
    } else if (cfg.family == "none") {
        nu = LevyMeasureSpec::none();
    } else {
        throw ConfigError("[" + kv.section() + "] unknown family '" + cfg.family + "'");
    }
    const double a = kv.take_double("a", 0.0);
    const double b = kv.take_double("b", 0.0);
    if (b < 0.0) throw ConfigError("[" + kv.section() + "] Brownian coefficient b must be >= 0");
    cfg.triplet = LevyTriplet{a, b, nu};
}

void read_sigma(KeyValues& kv, ExperimentConfig& cfg) {
    const std::string name = kv.take_string("sigma", "clipped-sine");
    const double scale = kv.take_double("sigma_scale", 1.0);
    if (name == "constant") cfg.sigma = sigma_constant(scale);
    else if (name == "clipped-sine") cfg.sigma = sigma_clipped_sine();
    else if (name == "inverse-quadratic") cfg.sigma = sigma_inverse_quadratic(scale);
    else throw ConfigError("[" + kv.section() + "] unknown sigma '" + name + "'");
    cfg.x0 = kv.take_double("x0", 0.0);
}

void read_common(KeyValues& kv, ExperimentConfig& cfg) {
    cfg.paths = static_cast<std::size_t>(kv.take_int("paths", 10000));
    if (cfg.paths < 1000)
        throw ConfigError("[" + kv.section() +
                          "] paths must be >= 1000 (statistical assertions need M >= 1e3)");
    cfg.seed = static_cast<std::uint64_t>(kv.take_int("seed", 1));
    cfg.out_dir = kv.take_string("out", std::string("out/") + kv.section());
    const std::int64_t threads = kv.take_int("threads", 0);
    if (threads > 0) cfg.threads = static_cast<unsigned>(threads);
    cfg.bootstrap = static_cast<int>(kv.take_int("bootstrap", 200));
    if (cfg.bootstrap != 0 && cfg.bootstrap < 200)
        throw ConfigError("[" + kv.section() + "] bootstrap must be 0 (off) or >= 200");
}

std::vector<std::int64_t> read_n_grid(KeyValues& kv) {
    const auto grid = kv.take_grid("n_grid");
    if (grid.empty()) throw ConfigError("[" + kv.section() + "] missing required key 'n_grid'");
    std::vector<std::int64_t> out;
    for (const double v : grid) {
        if (v < 1.0 || v != std::floor(v))
            throw ConfigError("[" + kv.section() + "] n_grid entries must be positive integers");
        out.push_back(static_cast<std::int64_t>(v));
    }
    return out;
}

void read_eps_rule(KeyValues& kv, ExperimentConfig& cfg) {
    cfg.eps_rule = kv.take_string("eps_rule", "one-over-n");
    if (cfg.eps_rule != "one-over-n" && cfg.eps_rule != "explicit")
        throw ConfigError("[" + kv.section() + "] eps_rule must be 'one-over-n' or 'explicit'");
    if (cfg.eps_rule == "explicit") {
        cfg.eps = kv.take_required_double("eps");
        if (!(cfg.eps > 0.0)) throw ConfigError("[" + kv.section() + "] eps must be > 0");
    }
}

void require_positive_grid(const std::string& section, const std::string& key,
                           const std::vector<double>& grid) {
    for (const double v : grid)
        if (!(v > 0.0))
            throw ConfigError("[" + section + "] grid '" + key + "' must be strictly positive");
}

ExperimentConfig build(ExperimentKind kind, KeyValues kv) {
    ExperimentConfig cfg;
    cfg.experiment = kind;
    read_common(kv, cfg);
    const std::string& sec = kv.section();

    switch (kind) {
        case ExperimentKind::CltCheck: {
            cfg.eps0_grid = kv.take_grid("eps0_grid");
            cfg.t_grid = kv.take_grid("t_grid");
            cfg.t_rel_grid = kv.take_grid("t_rel_grid");
            cfg.slope_eps0_grid = kv.take_grid("slope_eps0_grid");
            if (cfg.eps0_grid.empty())
                throw ConfigError("[" + sec + "] missing required key 'eps0_grid'");
            if (cfg.t_grid.empty() && cfg.t_rel_grid.empty())
                throw ConfigError("[" + sec + "] need 't_grid' and/or 't_rel_grid'");
            if (cfg.slope_eps0_grid.empty())
                throw ConfigError("[" + sec + "] missing required key 'slope_eps0_grid'");
            require_positive_grid(sec, "eps0_grid", cfg.eps0_grid);
            require_positive_grid(sec, "slope_eps0_grid", cfg.slope_eps0_grid);
            cfg.cap_c = kv.take_double("cap_c", 5.0);
            cfg.slope_target = kv.take_double("slope_target", 2.0);
            cfg.slope_tol = kv.take_double("slope_tol", 0.3);
            break;
        }
        case ExperimentKind::CltLowerBound: {
            cfg.eps0_grid = kv.take_grid("eps0_grid");
            cfg.t_grid = kv.take_grid("t_grid");
            cfg.t_rel_grid = kv.take_grid("t_rel_grid");
            if (cfg.eps0_grid.empty())
                throw ConfigError("[" + sec + "] missing required key 'eps0_grid'");
            if (cfg.t_grid.empty() && cfg.t_rel_grid.empty())
                throw ConfigError("[" + sec + "] need 't_grid' and/or 't_rel_grid'");
            require_positive_grid(sec, "eps0_grid", cfg.eps0_grid);
            cfg.profile_eps0 = kv.take_double("profile_eps0", 0.1);
            cfg.profile_t_rel_grid = kv.take_grid("profile_t_rel_grid");
            if (cfg.profile_t_rel_grid.empty())
                cfg.profile_t_rel_grid = {0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0};
            cfg.floor_c = kv.take_double("floor_c", 0.01);
            break;
        }
        case ExperimentKind::SchemeRate: {
            read_driver(kv, cfg, true);
            read_sigma(kv, cfg);
            cfg.horizon = kv.take_double("T", 1.0);
            cfg.mode = kv.take_string("mode", "path-rate");
            if (cfg.mode == "path-rate") {
                cfg.n_grid = read_n_grid(kv);
                read_eps_rule(kv, cfg);
                cfg.refine = static_cast<int>(kv.take_int("refine", 64));
                cfg.slope_max = kv.take_double("slope_max", -0.65);
                cfg.dump_paths = static_cast<int>(kv.take_int("dump_paths", 0));
            } else if (cfg.mode == "increment-gap") {
                cfg.eps0_grid = kv.take_grid("eps0_grid");
                if (cfg.eps0_grid.empty())
                    throw ConfigError("[" + sec + "] increment-gap mode needs 'eps0_grid'");
                require_positive_grid(sec, "eps0_grid", cfg.eps0_grid);
                if (cfg.family != "two-point")
                    throw ConfigError("[" + sec +
                                      "] increment-gap mode sweeps the two-point magnitude; "
                                      "set family = two-point (eps0 is taken from the grid)");
                cfg.n_fixed = kv.take_int("n", 100);
                cfg.eps = kv.take_double("eps", 0.5);
                cfg.gap_cap_c = kv.take_double("gap_cap_c", 5.0);
                cfg.slope_target = kv.take_double("slope_target", 2.0);
                cfg.slope_tol = kv.take_double("slope_tol", 0.3);
                cfg.dump_increments = static_cast<int>(kv.take_int("dump_increments", 0));
            } else {
                throw ConfigError("[" + sec + "] mode must be 'path-rate' or 'increment-gap'");
            }
            cfg.inner_factor = kv.take_double("inner_factor", 64.0);
            cfg.cdf_samples = static_cast<std::size_t>(kv.take_int("cdf_samples", 100000));
            break;
        }
        case ExperimentKind::EulerBaseline: {
            read_driver(kv, cfg, true);
            read_sigma(kv, cfg);
            cfg.horizon = kv.take_double("T", 1.0);
            cfg.n_grid = read_n_grid(kv);
            cfg.refine = static_cast<int>(kv.take_int("refine", 64));
            cfg.slope_target = kv.take_double("slope_target", -1.0);
            cfg.slope_tol = kv.take_double("slope_tol", 0.3);
            cfg.dump_paths = static_cast<int>(kv.take_int("dump_paths", 0));
            if (!cfg.triplet.measure.finite_activity())
                throw ConfigError("[" + sec + "] euler-baseline needs a finite-activity family");
            break;
        }
        case ExperimentKind::NeglectVsGauss: {
            read_driver(kv, cfg, true);
            cfg.n_grid = read_n_grid(kv);
            read_eps_rule(kv, cfg);
            cfg.inner_factor = kv.take_double("inner_factor", 64.0);
            cfg.dump_increments = static_cast<int>(kv.take_int("dump_increments", 0));
            break;
        }
        case ExperimentKind::BrownianApprox: {
            const double a = kv.take_double("a", 0.0);
            const double b = kv.take_double("b", 0.0);
            if (b < 0.0) throw ConfigError("[" + sec + "] b must be >= 0");
            // The jump measure is the symmetric two-point family at magnitude
            // eps, instantiated per grid point; no family keys here.
            cfg.family = "two-point";
            cfg.triplet = LevyTriplet{a, b, LevyMeasureSpec::none()};
            read_sigma(kv, cfg);
            cfg.horizon = kv.take_double("T", 1.0);
            cfg.eps_grid = kv.take_grid("eps_grid");
            if (cfg.eps_grid.empty())
                throw ConfigError("[" + sec + "] missing required key 'eps_grid'");
            require_positive_grid(sec, "eps_grid", cfg.eps_grid);
            for (const double e : cfg.eps_grid)
                if (e > 1.0)
                    throw ConfigError("[" + sec + "] eps_grid entries must lie in (0, 1]");
            cfg.p_moment = kv.take_double("p", 8.0);
            if (cfg.p_moment < 4.0) throw ConfigError("[" + sec + "] p must be >= 4");
            cfg.refine = static_cast<int>(kv.take_int("refine", 64));
            cfg.slope_min = kv.take_double("slope_min", 0.75);
            cfg.dump_paths = static_cast<int>(kv.take_int("dump_paths", 0));
            break;
        }
        case ExperimentKind::CostAudit: {
            read_driver(kv, cfg, true);
            cfg.horizon = kv.take_double("T", 1.0);
            cfg.n_grid = read_n_grid(kv);
            read_eps_rule(kv, cfg);
            cfg.cost_rel_tol = kv.take_double("cost_rel_tol", 0.05);
            cfg.exponent_target = kv.take_double("exponent_target", 0.0);
            cfg.exponent_tol = kv.take_double("exponent_tol", 0.15);
            break;
        }
    }
    if (cfg.refine < 1) throw ConfigError("[" + sec + "] refine must be >= 1");
    kv.finish();
    return cfg;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    return "?";
}

std::optional<ExperimentKind> experiment_from_string(const std::string& name) {
    for (const auto& [k, n] : kNames)
        if (name == n) return k;
    return std::nullopt;
}

std::vector<ExperimentKind> all_experiments() {
    std::vector<ExperimentKind> out;
    for (const auto& [k, n] : kNames) out.push_back(k);
    return out;
}

ExperimentConfig parse_config_text(const std::string& text, ExperimentKind experiment) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string current;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            if (!experiment_from_string(current))
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" +
                                  current + "]");
            sections[current];  // a section may be present but empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        if (current.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        auto& kv = sections[current];
        if (!kv.emplace(key, value).second)
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                              "'");
    }
    const std::string wanted = to_string(experiment);
    const auto it = sections.find(wanted);
    if (it == sections.end())
        throw ConfigError("config has no [" + wanted + "] section");
    return build(experiment, KeyValues(wanted, it->second));
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentKind experiment) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), experiment);
}

void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::string> out_dir, std::optional<unsigned> threads) {
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    if (threads) cfg.threads = *threads;
}

}  // namespace levysim::experiments
