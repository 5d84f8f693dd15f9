#include "mlob/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "mlob/errors.hpp"

namespace mlob {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || errno == ERANGE)
        throw ArgumentError("config: '" + key + "' is not a number: '" + v + "'");
    return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    if (v.empty() || v[0] == '-') throw ArgumentError("config: '" + key + "' must be a nonnegative integer");
    unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) throw ArgumentError("config: '" + key + "' must be a nonnegative integer");
    return x;
}

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

const std::set<std::string> kKeys{"name",  "c",       "r",         "beta",    "delta",   "mu",   "gamma",
                                  "sigma", "s0",      "eta",       "y0",      "theta0",  "theta_max", "horizon",
                                  "dt",    "paths",   "seed",      "rho",     "workers"};

}  // namespace

Config Config::from_map(const std::map<std::string, std::string>& kv) {
    Config c;
    c.seed = default_seed();
    for (const auto& [k, v] : kv)
        if (!kKeys.count(k)) throw ArgumentError("config: unknown key '" + k + "'");
    auto get = [&](const char* k, double& dst) {
        if (auto it = kv.find(k); it != kv.end()) dst = to_double(k, it->second);
    };
    if (auto it = kv.find("name"); it != kv.end()) c.name = it->second;
    get("c", c.book.c);
    get("r", c.book.r);
    get("beta", c.book.beta);
    get("sigma", c.sigma);
    get("s0", c.s0);
    get("eta", c.eta);
    get("y0", c.y_init);
    get("theta0", c.theta_init);
    get("theta_max", c.theta_max);
    get("horizon", c.horizon);
    get("dt", c.dt);
    get("rho", c.rho);
    if (auto it = kv.find("paths"); it != kv.end()) c.paths = to_u64("paths", it->second);
    if (auto it = kv.find("seed"); it != kv.end()) c.seed = to_u64("seed", it->second);
    if (auto it = kv.find("workers"); it != kv.end()) c.workers = static_cast<unsigned>(to_u64("workers", it->second));

    const bool has_d = kv.count("delta"), has_g = kv.count("gamma");
    get("mu", c.mu);
    if (has_d) get("delta", c.delta);
    if (has_g) {
        get("gamma", c.gamma);
        double d = c.gamma - c.mu;
        if (has_d && std::abs(d - c.delta) > 1e-12 * std::max(1.0, std::abs(d)))
            throw ValidationError("config: delta = " + num(c.delta) + " but gamma - mu = " + num(d));
        // keep an explicit delta as written, so resolved configs reload exactly
        if (!has_d) c.delta = d;
    } else {
        c.gamma = c.delta + c.mu;
    }
    return c;
}

Config Config::parse(std::istream& is, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ArgumentError(origin + ":" + std::to_string(n) + ": expected 'key = value'");
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
        if (k.empty()) throw ArgumentError(origin + ":" + std::to_string(n) + ": empty key");
        if (kv.count(k)) throw ArgumentError(origin + ":" + std::to_string(n) + ": duplicate key '" + k + "'");
        kv[k] = v;
    }
    return from_map(kv);
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config file '" + path + "'");
    return parse(in, path);
}

MarketSpec Config::spec(bool allow_zero_delta) const {
    MarketSpec s = power_law_spec(book, delta, allow_zero_delta);
    s.name = name;
    return s;
}

SimConfig Config::sim() const {
    SimConfig s;
    s.mu = mu;
    s.sigma = sigma;
    s.gamma = gamma;
    s.s0 = s0;
    s.horizon = horizon;
    s.dt = dt;
    s.n_paths = paths;
    s.seed = seed;
    s.workers = workers;
    return s;
}

std::map<std::string, std::string> Config::resolved() const {
    return {{"name", name},
            {"c", num(book.c)},
            {"r", num(book.r)},
            {"beta", num(book.beta)},
            {"delta", num(delta)},
            {"mu", num(mu)},
            {"gamma", num(gamma)},
            {"sigma", num(sigma)},
            {"s0", num(s0)},
            {"eta", num(acquisition_eta())},
            {"y0", num(y_init)},
            {"theta0", num(theta_init)},
            {"theta_max", num(theta_max)},
            {"horizon", num(horizon)},
            {"dt", num(dt)},
            {"paths", std::to_string(paths)},
            {"seed", std::to_string(seed)},
            {"rho", num(ls_rho())},
            {"workers", std::to_string(workers)}};
}

}  // namespace mlob
