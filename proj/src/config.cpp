#include "mdauct/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mdauct {

namespace {

struct KeyValue {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

using KeyMap = std::map<std::string, KeyValue>;

[[noreturn]] void fail(int line, const std::string& message) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

KeyMap tokenize(const std::string& text) {
    KeyMap map;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) fail(line, "expected `key = value`");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (value.empty()) fail(line, "empty value for `" + key + "`");
        if (map.count(key)) fail(line, "duplicate key `" + key + "`");
        map[key] = {value, line, false};
    }
    return map;
}

const KeyValue* find(const KeyMap& map, const std::string& key) {
    const auto it = map.find(key);
    if (it == map.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

std::string require(const KeyMap& map, const std::string& key) {
    const KeyValue* kv = find(map, key);
    if (!kv) throw std::invalid_argument("config: missing required key `" + key + "`");
    return kv->value;
}

double parse_number(const std::string& value, const std::string& key, int line) {
    std::size_t used = 0;
    double out;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        fail(line, "`" + key + "` is not a number");
    }
    if (used != value.size()) fail(line, "`" + key + "` has trailing characters");
    return out;
}

long parse_integer(const std::string& value, const std::string& key, int line) {
    const double d = parse_number(value, key, line);
    const long i = static_cast<long>(d);
    if (static_cast<double>(i) != d) fail(line, "`" + key + "` must be an integer");
    return i;
}

std::vector<double> parse_list(const std::string& value, const std::string& key, int line) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, "`" + key + "` has an empty element");
        out.push_back(parse_number(item, key, line));
    }
    if (out.empty()) fail(line, "`" + key + "` is empty");
    return out;
}

double get_number(const KeyMap& map, const std::string& key, double fallback) {
    const KeyValue* kv = find(map, key);
    return kv ? parse_number(kv->value, key, kv->line) : fallback;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::ostringstream ss;
        ss << v[i];
        if (i) out += ",";
        out += ss.str();
    }
    return out;
}

/// Recursive distribution parser; `box` is the (sub-)support the spec
/// applies to, so truncated-normal defaults resolve per dimension.
DistributionSpec parse_distribution(const KeyMap& map, const std::string& prefix, const Box& box,
                                    std::string& summary) {
    const KeyValue* kindkv = find(map, prefix + ".kind");
    if (!kindkv) throw std::invalid_argument("config: missing `" + prefix + ".kind`");
    const std::string& kind = kindkv->value;
    const int dim = box.dim();

    if (kind == "uniform") {
        summary = "uniform";
        return DistributionSpec::uniform();
    }
    if (kind == "beta") {
        const double a = get_number(map, prefix + ".a", 1.0);
        const double b = get_number(map, prefix + ".b", 2.0);
        if (a <= 0.0 || b <= 0.0) fail(kindkv->line, "beta parameters must be positive");
        std::ostringstream ss;
        ss << "beta(a=" << a << ",b=" << b << ")";
        summary = ss.str();
        return DistributionSpec::beta(a, b);
    }
    if (kind == "truncnormal") {
        std::vector<double> mean, stddev;
        if (const KeyValue* kv = find(map, prefix + ".mean")) {
            mean = parse_list(kv->value, prefix + ".mean", kv->line);
        } else {
            for (int j = 0; j < dim; ++j) mean.push_back(0.5 * (box.lower[j] + box.upper[j]));
        }
        if (const KeyValue* kv = find(map, prefix + ".stddev")) {
            stddev = parse_list(kv->value, prefix + ".stddev", kv->line);
        } else {
            for (int j = 0; j < dim; ++j) stddev.push_back(box.range(j) / 4.0);
        }
        if (static_cast<int>(mean.size()) != dim || static_cast<int>(stddev.size()) != dim) {
            fail(kindkv->line, "truncnormal mean/stddev must have one entry per dimension");
        }
        summary = "truncnormal(mean=[" + join(mean) + "],stddev=[" + join(stddev) + "])";
        return DistributionSpec::trunc_normal(std::move(mean), std::move(stddev));
    }
    if (kind == "mixture") {
        const KeyValue* akv = find(map, prefix + ".alpha");
        if (!akv) throw std::invalid_argument("config: missing `" + prefix + ".alpha`");
        const double alpha = parse_number(akv->value, prefix + ".alpha", akv->line);
        if (alpha < 0.0 || alpha > 1.0) fail(akv->line, "mixture weight must be in [0, 1]");
        std::string s1, s2;
        DistributionSpec first = parse_distribution(map, prefix + ".first", box, s1);
        DistributionSpec second = parse_distribution(map, prefix + ".second", box, s2);
        std::ostringstream ss;
        ss << "mixture(alpha=" << alpha << "," << s1 << "," << s2 << ")";
        summary = ss.str();
        return DistributionSpec::mixture(alpha, std::move(first), std::move(second));
    }
    if (kind == "product") {
        std::vector<DistributionSpec> dims;
        std::string parts;
        for (int j = 0; j < dim; ++j) {
            Box sub{{box.lower[j]}, {box.upper[j]}};
            std::string sj;
            dims.push_back(
                parse_distribution(map, prefix + ".dim" + std::to_string(j + 1), sub, sj));
            if (j) parts += " x ";
            parts += sj;
        }
        summary = "product(" + parts + ")";
        return DistributionSpec::product(std::move(dims));
    }
    if (kind == "table") {
        const KeyValue* kv = find(map, prefix + ".values");
        if (!kv) throw std::invalid_argument("config: missing `" + prefix + ".values`");
        std::vector<double> values = parse_list(kv->value, prefix + ".values", kv->line);
        summary = "table(" + std::to_string(values.size()) + " values)";
        return DistributionSpec::table(std::move(values));
    }
    fail(kindkv->line, "unknown distribution kind `" + kind + "`");
}

}  // namespace

AuctionSetting ExperimentConfig::make_setting(int buyers) const {
    AuctionSetting setting;
    setting.buyers = buyers;
    setting.costs = costs;
    auto grid = std::make_shared<const TypeGrid>(box, intervals);
    setting.density = discretize_density(distribution, grid);
    setting.grid = std::move(grid);
    validate_setting(setting);
    return setting;
}

ExperimentConfig parse_config(const std::string& text) {
    const KeyMap map = tokenize(text);
    ExperimentConfig cfg;

    cfg.name = require(map, "name");
    for (char ch : cfg.name) {
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') {
            throw std::invalid_argument("config: `name` must be alphanumeric/underscore/dash");
        }
    }

    {
        const KeyValue* kv = find(map, "J");
        if (!kv) throw std::invalid_argument("config: missing required key `J`");
        const long j = parse_integer(kv->value, "J", kv->line);
        if (j < 1) fail(kv->line, "J must be >= 1");
        cfg.qualities = static_cast<int>(j);
    }
    {
        const KeyValue* kv = find(map, "T");
        if (!kv) throw std::invalid_argument("config: missing required key `T`");
        const long t = parse_integer(kv->value, "T", kv->line);
        if (t < 1) fail(kv->line, "T must be >= 1");
        cfg.intervals = static_cast<int>(t);
    }
    {
        const KeyValue* kv = find(map, "N");
        if (!kv) throw std::invalid_argument("config: missing required key `N`");
        for (double d : parse_list(kv->value, "N", kv->line)) {
            const long n = static_cast<long>(d);
            if (static_cast<double>(n) != d || n < 1) fail(kv->line, "N entries must be >= 1");
            cfg.buyer_counts.push_back(static_cast<int>(n));
        }
    }
    {
        const KeyValue* lo = find(map, "box.lower");
        const KeyValue* hi = find(map, "box.upper");
        if (!lo || !hi) throw std::invalid_argument("config: box.lower and box.upper required");
        cfg.box.lower = parse_list(lo->value, "box.lower", lo->line);
        cfg.box.upper = parse_list(hi->value, "box.upper", hi->line);
        if (static_cast<int>(cfg.box.lower.size()) != cfg.qualities ||
            static_cast<int>(cfg.box.upper.size()) != cfg.qualities) {
            fail(lo->line, "box bounds must have J entries");
        }
        validate_box(cfg.box);
    }
    {
        const KeyValue* kv = find(map, "costs");
        if (!kv) throw std::invalid_argument("config: missing required key `costs`");
        cfg.costs = parse_list(kv->value, "costs", kv->line);
        if (static_cast<int>(cfg.costs.size()) != cfg.qualities) {
            fail(kv->line, "costs must have J entries");
        }
        for (double c : cfg.costs) {
            if (c < 0.0) fail(kv->line, "costs must be nonnegative");
        }
    }

    cfg.distribution = parse_distribution(map, "dist", cfg.box, cfg.distribution_summary);

    if (const KeyValue* kv = find(map, "seed")) {
        const long s = parse_integer(kv->value, "seed", kv->line);
        if (s < 0) fail(kv->line, "seed must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (const KeyValue* kv = find(map, "ebm.resolution")) {
        const long r = parse_integer(kv->value, "ebm.resolution", kv->line);
        if (r < 1) fail(kv->line, "ebm.resolution must be >= 1");
        cfg.ebm_resolution = static_cast<int>(r);
    }
    if (const KeyValue* kv = find(map, "ebm.samples")) {
        const long s = parse_integer(kv->value, "ebm.samples", kv->line);
        if (s < 1) fail(kv->line, "ebm.samples must be >= 1");
        cfg.ebm_samples = s;
    }
    if (const KeyValue* kv = find(map, "solver.violation_tol")) {
        cfg.solver.violation_tol = parse_number(kv->value, "solver.violation_tol", kv->line);
    }
    if (const KeyValue* kv = find(map, "solver.inactive_slack")) {
        cfg.solver.inactive_slack = parse_number(kv->value, "solver.inactive_slack", kv->line);
    }
    if (const KeyValue* kv = find(map, "solver.tau")) {
        cfg.solver.exclusion_tau = parse_number(kv->value, "solver.tau", kv->line);
    }
    if (const KeyValue* kv = find(map, "solver.lp_tol")) {
        const double tol = parse_number(kv->value, "solver.lp_tol", kv->line);
        cfg.solver.lp.feas_tol = tol;
        cfg.solver.lp.opt_tol = tol;
    }
    if (const KeyValue* kv = find(map, "solver.max_inner")) {
        cfg.solver.max_inner = static_cast<int>(parse_integer(kv->value, "solver.max_inner", kv->line));
    }
    if (const KeyValue* kv = find(map, "solver.max_outer")) {
        cfg.solver.max_outer = static_cast<int>(parse_integer(kv->value, "solver.max_outer", kv->line));
    }
    cfg.solver.validate();

    for (const auto& [key, kv] : map) {
        if (!kv.used) fail(kv.line, "unknown key `" + key + "`");
    }
    if (cfg.ebm_resolution == 0) cfg.ebm_resolution = cfg.intervals;
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

}  // namespace mdauct
